#include "redsched/ready_queue.hpp"

#include <cassert>

namespace redsched {

ReadyQueue::ReadyQueue(std::uint32_t capacity) : q_(capacity) {}

ReadyQueue::InsertResult ReadyQueue::insert(const ProcessDescriptor& d, Cycle now) {
  ReadyCell cell;
  cell.desc = d;
  cell.rem_wcet = d.wcet;
  auto ins = q_.insert(cell);

  // When the new element was the worst cell of a full queue it is already
  // the displaced one and never landed; position then equals cells.size().
  auto cells = q_.cells();
  if (ins.position < cells.size()) {
    ReadyCell& placed = cells[ins.position];
    placed.cum_exec = placed.rem_wcet +
                      (ins.position > 0 ? cells[ins.position - 1].cum_exec : 0);
    for (std::size_t i = ins.position + 1; i < cells.size(); ++i)
      cells[i].cum_exec += d.wcet;
  }

  InsertResult res;
  if (ins.displaced) res.displaced = std::move(*ins.displaced);
  res.report = overload(now);
  return res;
}

std::optional<ReadyCell> ReadyQueue::remove(ProcessId id, Cycle now) {
  auto cells = q_.cells();
  std::size_t pos = 0;
  while (pos < cells.size() && cells[pos].desc.id != id) ++pos;
  if (pos == cells.size()) return std::nullopt;

  const std::uint32_t removed_rem = cells[pos].rem_wcet;
  for (std::size_t i = pos + 1; i < cells.size(); ++i)
    cells[i].cum_exec -= removed_rem;

  auto out = q_.remove_by_id(id);
  refresh_bits(now);
  return out;
}

std::optional<ProcessId> ReadyQueue::tick(Cycle now) {
  auto cells = q_.cells();
  if (cells.empty()) return std::nullopt;

  assert(cells[0].rem_wcet > 0);
  cells[0].rem_wcet -= 1;
  for (ReadyCell& c : cells) c.cum_exec -= 1;

  std::optional<ProcessId> completed;
  if (cells[0].rem_wcet == 0) {
    completed = cells[0].desc.id;
    q_.remove_by_id(*completed);  // rem is 0, later registers already correct
  }
  refresh_bits(now);
  return completed;
}

void ReadyQueue::refresh_bits(Cycle now) {
  for (ReadyCell& c : q_.cells())
    c.overload_bit = now + c.cum_exec > c.desc.deadline;
}

OverloadReport ReadyQueue::overload(Cycle now) {
  refresh_bits(now);
  OverloadReport rep;
  auto cells = q_.cells();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].overload_bit) {
      rep.any_overload = true;
      rep.first_overload_pos = i;
      break;
    }
  }
  if (rep.any_overload) rep.victim = select_victim(rep);
  return rep;
}

std::optional<std::pair<std::size_t, ProcessId>> ReadyQueue::select_victim(
    const OverloadReport& report) const {
  if (!report.any_overload || !report.first_overload_pos) return std::nullopt;
  auto cells = q_.cells();
  const std::size_t last = *report.first_overload_pos;

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i <= last && i < cells.size(); ++i) {
    const ProcessDescriptor& d = cells[i].desc;
    if (d.criticality == Criticality::hard_rt) continue;
    if (!best) {
      best = i;
      continue;
    }
    const ProcessDescriptor& b = cells[*best].desc;
    if (d.criticality != b.criticality) {
      if (d.criticality < b.criticality) best = i;
    } else {
      // Equal lowest criticality: latest position wins. Positions are
      // unique, so the sub-priority and id tie-breaks can never engage;
      // the scan order already yields the larger index here.
      best = i;
    }
  }
  if (!best) return std::nullopt;
  return std::make_pair(*best, cells[*best].desc.id);
}

const ProcessDescriptor* ReadyQueue::head() const {
  const ReadyCell* h = q_.head();
  return h ? &h->desc : nullptr;
}

void ReadyQueue::seed(const ProcessDescriptor& d, std::uint32_t rem_wcet, Cycle now) {
  assert(rem_wcet >= 1 && rem_wcet <= d.wcet);
  insert(d, now);
  if (rem_wcet == d.wcet) return;
  const std::uint32_t delta = d.wcet - rem_wcet;
  auto cells = q_.cells();
  std::size_t pos = 0;
  while (cells[pos].desc.id != d.id) ++pos;
  cells[pos].rem_wcet = rem_wcet;
  for (std::size_t i = pos; i < cells.size(); ++i) cells[i].cum_exec -= delta;
  refresh_bits(now);
}

bool ReadyQueue::check_registers() const {
  if (!q_.is_sorted()) return false;
  std::uint64_t sum = 0;
  for (const ReadyCell& c : q_.cells()) {
    sum += c.rem_wcet;
    if (c.cum_exec != sum) return false;
    if (c.rem_wcet > c.desc.wcet) return false;
  }
  return true;
}

}  // namespace redsched
