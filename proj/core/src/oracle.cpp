#include "redsched/oracle.hpp"

#include <algorithm>
#include <cassert>

namespace redsched {

bool edf_feasible(std::vector<std::pair<Cycle, std::uint32_t>> processes, Cycle now) {
  std::stable_sort(processes.begin(), processes.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::uint64_t demand = 0;
  for (const auto& [deadline, rem] : processes) {
    demand += rem;
    if (now + demand > deadline) return false;
  }
  return true;
}

std::optional<std::pair<std::size_t, ProcessId>> check_victim(
    std::span<const std::pair<ProcessDescriptor, std::uint32_t>> edf_ordered,
    Cycle now, bool invert_position_tiebreak) {
  // First overloading position under recomputed prefix sums.
  std::optional<std::size_t> first;
  std::uint64_t demand = 0;
  for (std::size_t i = 0; i < edf_ordered.size(); ++i) {
    demand += edf_ordered[i].second;
    if (now + demand > edf_ordered[i].first.deadline) {
      first = i;
      break;
    }
  }
  if (!first) return std::nullopt;

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i <= *first; ++i) {
    const ProcessDescriptor& d = edf_ordered[i].first;
    if (d.criticality == Criticality::hard_rt) continue;
    if (!best) {
      best = i;
      continue;
    }
    const ProcessDescriptor& b = edf_ordered[*best].first;
    if (d.criticality < b.criticality) {
      best = i;
    } else if (d.criticality == b.criticality && !invert_position_tiebreak) {
      best = i;  // latest position wins
    }
  }
  if (!best) return std::nullopt;
  return std::make_pair(*best, edf_ordered[*best].first.id);
}

// ---------------------------------------------------------------- RedOracle

RedOracle::RedOracle(SchedulerConfig cfg, OracleTweaks tweaks)
    : cfg_(cfg), tweaks_(tweaks) {}

void RedOracle::emit(std::vector<EventRecord>& events, EventKind kind, ProcessId id,
                     Criticality crit) const {
  events.push_back(EventRecord{now_, kind, id, crit});
}

std::vector<std::size_t> RedOracle::edf_order() const {
  std::vector<std::size_t> order(ready_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
    return edf_before(ready_[a].desc, ready_[b].desc);
  });
  return order;
}

std::vector<std::size_t> RedOracle::reject_order() const {
  std::vector<std::size_t> order(reject_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
    return reject_before(reject_[a], reject_[b]);
  });
  return order;
}

bool RedOracle::is_live(ProcessId id) const {
  for (const Entry& e : ready_)
    if (e.desc.id == id) return true;
  for (const ProcessDescriptor& d : reject_)
    if (d.id == id) return true;
  return false;
}

RedOracle::Scan RedOracle::overload_scan() const {
  Scan s;
  std::vector<std::pair<ProcessDescriptor, std::uint32_t>> view;
  view.reserve(ready_.size());
  for (std::size_t idx : edf_order())
    view.emplace_back(ready_[idx].desc, ready_[idx].rem_wcet);

  std::uint64_t demand = 0;
  for (std::size_t i = 0; i < view.size(); ++i) {
    demand += view[i].second;
    if (now_ + demand > view[i].first.deadline) {
      s.any_overload = true;
      s.first_overload_pos = i;
      break;
    }
  }
  if (s.any_overload)
    s.victim = check_victim(view, now_, tweaks_.invert_victim_tiebreak);
  return s;
}

void RedOracle::erase_ready(ProcessId id) {
  for (std::size_t i = 0; i < ready_.size(); ++i) {
    if (ready_[i].desc.id == id) {
      ready_.erase(ready_.begin() + static_cast<std::ptrdiff_t>(i));
      return;
    }
  }
  assert(false && "erase_ready: id not present");
}

void RedOracle::erase_reject(ProcessId id) {
  for (std::size_t i = 0; i < reject_.size(); ++i) {
    if (reject_[i].id == id) {
      reject_.erase(reject_.begin() + static_cast<std::ptrdiff_t>(i));
      return;
    }
  }
  assert(false && "erase_reject: id not present");
}

void RedOracle::reject_insert(const ProcessDescriptor& d,
                              std::vector<EventRecord>& events) {
  assert(d.criticality != Criticality::hard_rt);
  reject_.push_back(d);
  if (reject_.size() > cfg_.reject_capacity) {
    const std::size_t worst = reject_order().back();
    const ProcessId dropped = reject_[worst].id;
    reject_.erase(reject_.begin() + static_cast<std::ptrdiff_t>(worst));
    emit(events, EventKind::capacity_drop, dropped);
  }
}

CycleOutput RedOracle::step(std::optional<Instruction> instr) {
  if (instr) {
    if (phase_.kind != PhaseKind::idle) throw InstructionWhileBusyError();
    phase_ = ControlPhase{PhaseKind::exec_instr, 2, *instr, 0};
  }

  CycleOutput out;
  out.cycle = now_;
  {
    auto order = edf_order();
    if (!order.empty()) out.process_to_run = ready_[order[0]].desc.id;
  }
  out.busy = phase_.kind != PhaseKind::idle;
  out.phase = phase_.kind;

  // Head execution.
  {
    auto order = edf_order();
    if (!order.empty()) {
      Entry& head = ready_[order[0]];
      assert(head.rem_wcet > 0);
      head.rem_wcet -= 1;
      if (head.rem_wcet == 0) {
        const ProcessId done = head.desc.id;
        erase_ready(done);
        ++ready_version_;
        emit(out.events, EventKind::completed, done);
      }
    }
  }

  if (phase_.kind != PhaseKind::idle) {
    if (--phase_.cycles_left == 0) {
      ControlPhase finished = phase_;
      phase_ = ControlPhase{};
      switch (finished.kind) {
        case PhaseKind::exec_instr:
          apply_instruction(*finished.instr, out.events);
          break;
        case PhaseKind::rejecting:
          apply_reject(out.events);
          break;
        case PhaseKind::reclaim_try:
          apply_reclaim(finished.reclaim_id, out.events);
          break;
        case PhaseKind::reclaim_redo:
        case PhaseKind::idle:
          break;
      }
    }
  }

  if (phase_.kind == PhaseKind::idle) control_eval(out.events);

  ++now_;
  return out;
}

void RedOracle::apply_instruction(const Instruction& in,
                                  std::vector<EventRecord>& events) {
  if (in.is_insert())
    apply_insert(in.desc(), events);
  else
    apply_kill(in.kill_id(), events);
}

void RedOracle::apply_insert(const ProcessDescriptor& d,
                             std::vector<EventRecord>& events) {
  if (is_live(d.id)) {
    emit(events, EventKind::duplicate_id_ignored, d.id);
    return;
  }
  emit(events, EventKind::accepted, d.id);
  ready_.push_back(Entry{d, d.wcet, false});
  ++ready_version_;
  if (ready_.size() > cfg_.ready_capacity) {
    const std::size_t tail = edf_order().back();
    const ProcessDescriptor displaced = ready_[tail].desc;
    ready_.erase(ready_.begin() + static_cast<std::ptrdiff_t>(tail));
    if (displaced.criticality == Criticality::hard_rt) {
      emit(events, EventKind::capacity_drop, displaced.id);
    } else {
      emit(events, EventKind::rejected, displaced.id);
      reject_insert(displaced, events);
    }
  }
}

void RedOracle::apply_kill(ProcessId id, std::vector<EventRecord>& events) {
  for (const Entry& e : ready_) {
    if (e.desc.id == id) {
      erase_ready(id);
      ++ready_version_;
      emit(events, EventKind::killed, id);
      return;
    }
  }
  for (const ProcessDescriptor& d : reject_) {
    if (d.id == id) {
      erase_reject(id);
      emit(events, EventKind::killed, id);
      return;
    }
  }
  emit(events, EventKind::unknown_id_ignored, id);
}

void RedOracle::apply_reject(std::vector<EventRecord>& events) {
  Scan s = overload_scan();
  if (!s.any_overload) return;

  if (s.victim) {
    const ProcessId vid = s.victim->second;
    ProcessDescriptor desc;
    for (const Entry& e : ready_)
      if (e.desc.id == vid) desc = e.desc;
    erase_ready(vid);
    ++ready_version_;
    emit(events, EventKind::rejected, vid);
    reject_insert(desc, events);
  } else {
    const std::size_t pos = *s.first_overload_pos;
    Entry& cell = ready_[edf_order()[pos]];
    if (!cell.miss_reported) {
      cell.miss_reported = true;
      emit(events, EventKind::hard_overload, cell.desc.id, cell.desc.criticality);
      emit(events, EventKind::deadline_miss, cell.desc.id, cell.desc.criticality);
    }
  }
}

void RedOracle::apply_reclaim(ProcessId pin, std::vector<EventRecord>& events) {
  // The pinned head cannot have left the reject queue during the phase;
  // erase_reject asserts its presence.
  ProcessDescriptor d;
  for (const ProcessDescriptor& r : reject_)
    if (r.id == pin) d = r;
  erase_reject(pin);
  ready_.push_back(Entry{d, d.wcet, false});

  Scan s = overload_scan();
  if (!s.any_overload) {
    ++ready_version_;
    emit(events, EventKind::reclaimed, pin);
    return;
  }
  erase_ready(pin);
  reject_.push_back(d);
  failed_reclaim_ = std::make_pair(pin, ready_version_);
  emit(events, EventKind::reclaim_redone, pin);
  phase_ = ControlPhase{PhaseKind::reclaim_redo, 2, std::nullopt, pin};
}

void RedOracle::control_eval(std::vector<EventRecord>& events) {
  // Purge expired rejects in MAX-queue order.
  std::vector<ProcessDescriptor> expired;
  for (std::size_t idx : reject_order()) {
    const ProcessDescriptor& d = reject_[idx];
    if (d.deadline != kDeadlineSentinel && d.deadline <= now_) expired.push_back(d);
  }
  for (const ProcessDescriptor& d : expired) {
    erase_reject(d.id);
    emit(events, EventKind::expired_purged, d.id);
    if (d.criticality == Criticality::soft_medium ||
        d.criticality == Criticality::soft_high)
      emit(events, EventKind::deadline_miss, d.id, d.criticality);
  }

  Scan s = overload_scan();
  if (s.any_overload) {
    phase_ = ControlPhase{PhaseKind::rejecting, 2, std::nullopt, 0};
    return;
  }

  if (!reject_.empty() && ready_.size() < cfg_.ready_capacity) {
    const ProcessId head = reject_[reject_order()[0]].id;
    const bool blocked = failed_reclaim_ && failed_reclaim_->first == head &&
                         failed_reclaim_->second == ready_version_;
    if (!blocked)
      phase_ = ControlPhase{PhaseKind::reclaim_try, 2, std::nullopt, head};
  }
}

std::vector<RedOracle::ReadyView> RedOracle::ready_view() const {
  std::vector<ReadyView> view;
  view.reserve(ready_.size());
  std::uint64_t demand = 0;
  for (std::size_t idx : edf_order()) {
    const Entry& e = ready_[idx];
    demand += e.rem_wcet;
    view.push_back(ReadyView{e.desc.id, e.desc.deadline, e.rem_wcet, demand});
  }
  return view;
}

std::vector<ProcessId> RedOracle::reject_view() const {
  std::vector<ProcessId> view;
  view.reserve(reject_.size());
  for (std::size_t idx : reject_order()) view.push_back(reject_[idx].id);
  return view;
}

std::set<ProcessId> RedOracle::live_ids() const {
  std::set<ProcessId> ids;
  for (const Entry& e : ready_) ids.insert(e.desc.id);
  for (const ProcessDescriptor& d : reject_) ids.insert(d.id);
  return ids;
}

void RedOracle::seed_ready(const ProcessDescriptor& d, std::uint32_t rem_wcet) {
  ready_.push_back(Entry{d, rem_wcet == 0 ? d.wcet : rem_wcet, false});
  ++ready_version_;
}

void RedOracle::seed_reject(const ProcessDescriptor& d) {
  assert(d.criticality != Criticality::hard_rt);
  reject_.push_back(d);
}

// -------------------------------------------------------------- EdfBaseline

void EdfBaseline::emit(std::vector<EventRecord>& events, EventKind kind,
                       ProcessId id, Criticality crit) const {
  events.push_back(EventRecord{now_, kind, id, crit});
}

std::vector<std::size_t> EdfBaseline::edf_order() const {
  std::vector<std::size_t> order(list_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
    return edf_before(list_[a].desc, list_[b].desc);
  });
  return order;
}

CycleOutput EdfBaseline::step(std::optional<Instruction> instr) {
  if (instr) {
    if (phase_.kind != PhaseKind::idle) throw InstructionWhileBusyError();
    phase_ = ControlPhase{PhaseKind::exec_instr, 2, *instr, 0};
  }

  CycleOutput out;
  out.cycle = now_;
  {
    auto order = edf_order();
    if (!order.empty()) out.process_to_run = list_[order[0]].desc.id;
  }
  out.busy = phase_.kind != PhaseKind::idle;
  out.phase = phase_.kind;

  {
    auto order = edf_order();
    if (!order.empty()) {
      Entry& head = list_[order[0]];
      head.rem_wcet -= 1;
      if (head.rem_wcet == 0) {
        const ProcessId done = head.desc.id;
        list_.erase(list_.begin() + static_cast<std::ptrdiff_t>(order[0]));
        emit(out.events, EventKind::completed, done);
      }
    }
  }

  if (phase_.kind != PhaseKind::idle && --phase_.cycles_left == 0) {
    const Instruction in = *phase_.instr;
    phase_ = ControlPhase{};
    if (in.is_insert()) {
      const ProcessDescriptor& d = in.desc();
      bool dup = false;
      for (const Entry& e : list_)
        if (e.desc.id == d.id) dup = true;
      if (dup) {
        emit(out.events, EventKind::duplicate_id_ignored, d.id);
      } else {
        emit(out.events, EventKind::accepted, d.id);
        list_.push_back(Entry{d, d.wcet});
      }
    } else {
      const ProcessId id = in.kill_id();
      bool found = false;
      for (std::size_t i = 0; i < list_.size(); ++i) {
        if (list_[i].desc.id == id) {
          list_.erase(list_.begin() + static_cast<std::ptrdiff_t>(i));
          found = true;
          break;
        }
      }
      emit(out.events, found ? EventKind::killed : EventKind::unknown_id_ignored, id);
    }
  }

  // Drop every process whose deadline has passed, in EDF order.
  {
    std::vector<ProcessId> missed;
    for (std::size_t idx : edf_order()) {
      const Entry& e = list_[idx];
      if (e.desc.deadline != kDeadlineSentinel && now_ > e.desc.deadline)
        missed.push_back(e.desc.id);
    }
    for (ProcessId id : missed) {
      for (std::size_t i = 0; i < list_.size(); ++i) {
        if (list_[i].desc.id == id) {
          emit(out.events, EventKind::deadline_miss, id, list_[i].desc.criticality);
          list_.erase(list_.begin() + static_cast<std::ptrdiff_t>(i));
          break;
        }
      }
    }
  }

  ++now_;
  return out;
}

}  // namespace redsched
