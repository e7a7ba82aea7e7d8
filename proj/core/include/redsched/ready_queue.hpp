#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "redsched/shift_queue.hpp"
#include "redsched/types.hpp"

namespace redsched {

// One process cell: the descriptor, its remaining WCET, the execution-time
// register (remaining WCET of this cell plus of every cell scheduled
// sooner), and the overload bit computed from it.
struct ReadyCell {
  ProcessDescriptor desc;
  std::uint32_t rem_wcet = 0;
  std::uint64_t cum_exec = 0;
  bool overload_bit = false;
  // Latch so a stuck hard overload reports its miss once per cell lifetime.
  bool miss_reported = false;

  bool operator==(const ReadyCell&) const = default;
};

struct OverloadReport {
  bool any_overload = false;                      // OR over all cell bits
  std::optional<std::size_t> first_overload_pos;  // earliest-scheduled overloading cell
  std::optional<std::pair<std::size_t, ProcessId>> victim;
};

// EDF MIN queue of ready cells extended with overload analysis. The
// execution-time registers are maintained incrementally, mirroring the
// per-cell register updates of the hardware; the recompute-from-scratch
// cross-check lives in the oracle and the tests.
class ReadyQueue {
 public:
  explicit ReadyQueue(std::uint32_t capacity);

  struct InsertResult {
    OverloadReport report;
    std::optional<ReadyCell> displaced;
  };

  // Inserts at the EDF position with rem_wcet = d.wcet; the new cell's
  // register picks up the next-sooner cell's register, every later cell
  // gains d.wcet, and all overload bits are refreshed for `now`.
  InsertResult insert(const ProcessDescriptor& d, Cycle now);

  // Removes the cell if present; every later cell's register drops by the
  // removed cell's current rem_wcet.
  std::optional<ReadyCell> remove(ProcessId id, Cycle now);

  // One cycle of head execution: head rem_wcet and every register decrease
  // by one; a head reaching zero is removed and returned as completed.
  std::optional<ProcessId> tick(Cycle now);

  // Refreshes every overload bit as (now + cum_exec > deadline), ORs them,
  // and selects the victim when overloaded.
  OverloadReport overload(Cycle now);

  // Victim choice over cells 0..first_overload_pos inclusive, hard-RT cells
  // excluded: minimum criticality, ties to the latest position, then lowest
  // sub-priority, then highest id. Absent when every candidate is hard-RT.
  std::optional<std::pair<std::size_t, ProcessId>> select_victim(
      const OverloadReport& report) const;

  const ProcessDescriptor* head() const;

  std::size_t size() const { return q_.size(); }
  std::uint32_t capacity() const { return static_cast<std::uint32_t>(q_.capacity()); }
  bool empty() const { return q_.empty(); }
  bool full() const { return q_.full(); }
  bool contains(ProcessId id) const { return q_.find(id) != nullptr; }

  std::span<const ReadyCell> cells() const { return q_.cells(); }
  ReadyCell* find(ProcessId id) { return q_.find(id); }
  std::vector<ReadyCell> snapshot() const { return q_.snapshot(); }

  // True when every register equals the prefix sum recomputed from scratch
  // and the EDF order holds.
  bool check_registers() const;

  // Test/bench state construction: inserts with a possibly part-consumed
  // budget (1 <= rem_wcet <= d.wcet), keeping all registers consistent.
  void seed(const ProcessDescriptor& d, std::uint32_t rem_wcet, Cycle now);

 private:
  struct CellBefore {
    bool operator()(const ReadyCell& a, const ReadyCell& b) const {
      return edf_before(a.desc, b.desc);
    }
  };
  struct CellId {
    ProcessId operator()(const ReadyCell& c) const { return c.desc.id; }
  };

  void refresh_bits(Cycle now);

  ShiftQueue<ReadyCell, CellBefore, CellId> q_;
};

}  // namespace redsched
