#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "redsched/cycle.hpp"
#include "redsched/scheduler.hpp"
#include "redsched/types.hpp"

namespace redsched {

// Prefix-sum schedulability test: sorts by deadline and checks that, under
// remaining-WCET assumptions, every process completes by its deadline.
bool edf_feasible(std::vector<std::pair<Cycle, std::uint32_t>> processes, Cycle now);

// Exhaustive victim scan over EDF-ordered (descriptor, rem_wcet) pairs:
// candidates are the cells up to and including the first overloading one,
// hard-RT excluded; minimum criticality wins, ties to the latest position.
// Absent when there is no overload or every candidate is hard-RT.
std::optional<std::pair<std::size_t, ProcessId>> check_victim(
    std::span<const std::pair<ProcessDescriptor, std::uint32_t>> edf_ordered,
    Cycle now, bool invert_position_tiebreak = false);

// Harness self-test seam: a deliberately wrong policy variant used to prove
// the differential harness detects divergence.
struct OracleTweaks {
  bool invert_victim_tiebreak = false;
};

// Behavioral golden model of the RED machine. Shares core's comparators but
// no queue code: every quantity (EDF order, prefix sums, overload bits,
// victim, reclaim candidate) is recomputed from scratch each time.
class RedOracle {
 public:
  explicit RedOracle(SchedulerConfig cfg, OracleTweaks tweaks = {});

  CycleOutput step(std::optional<Instruction> instr = std::nullopt);

  bool busy() const { return phase_.kind != PhaseKind::idle; }
  Cycle now() const { return now_; }
  bool drained() const {
    return ready_.empty() && reject_.empty() && phase_.kind == PhaseKind::idle;
  }
  PhaseKind phase() const { return phase_.kind; }

  struct ReadyView {
    ProcessId id;
    Cycle deadline;
    std::uint32_t rem_wcet;
    std::uint64_t cum_exec;
    bool operator==(const ReadyView&) const = default;
  };
  std::vector<ReadyView> ready_view() const;   // EDF order, sums from scratch
  std::vector<ProcessId> reject_view() const;  // MAX order
  std::set<ProcessId> live_ids() const;

  void seed_ready(const ProcessDescriptor& d, std::uint32_t rem_wcet = 0);
  void seed_reject(const ProcessDescriptor& d);

 private:
  struct Entry {
    ProcessDescriptor desc;
    std::uint32_t rem_wcet = 0;
    bool miss_reported = false;
  };

  struct Scan {
    bool any_overload = false;
    std::optional<std::size_t> first_overload_pos;
    std::optional<std::pair<std::size_t, ProcessId>> victim;
  };

  std::vector<std::size_t> edf_order() const;
  std::vector<std::size_t> reject_order() const;
  bool is_live(ProcessId id) const;
  Scan overload_scan() const;
  void erase_ready(ProcessId id);
  void erase_reject(ProcessId id);
  void reject_insert(const ProcessDescriptor& d, std::vector<EventRecord>& events);

  void apply_instruction(const Instruction& in, std::vector<EventRecord>& events);
  void apply_insert(const ProcessDescriptor& d, std::vector<EventRecord>& events);
  void apply_kill(ProcessId id, std::vector<EventRecord>& events);
  void apply_reject(std::vector<EventRecord>& events);
  void apply_reclaim(ProcessId pin, std::vector<EventRecord>& events);
  void control_eval(std::vector<EventRecord>& events);
  void emit(std::vector<EventRecord>& events, EventKind kind, ProcessId id,
            Criticality crit = Criticality::non_rt) const;

  SchedulerConfig cfg_;
  OracleTweaks tweaks_;
  std::vector<Entry> ready_;              // insertion order
  std::vector<ProcessDescriptor> reject_;  // insertion order
  ControlPhase phase_;
  Cycle now_ = 0;
  std::uint64_t ready_version_ = 0;
  std::optional<std::pair<ProcessId, std::uint64_t>> failed_reclaim_;
};

// Plain-EDF baseline: accepts every insert, no overload analysis, no reject
// queue; a queued process whose deadline has passed is dropped with a
// DeadlineMiss. Instructions keep the 2-cycle contract.
class EdfBaseline {
 public:
  CycleOutput step(std::optional<Instruction> instr = std::nullopt);

  bool busy() const { return phase_.kind != PhaseKind::idle; }
  Cycle now() const { return now_; }
  bool drained() const { return list_.empty() && phase_.kind == PhaseKind::idle; }

  std::size_t size() const { return list_.size(); }

  // (deadline, rem_wcet) pairs of the queued processes, for feasibility probes.
  std::vector<std::pair<Cycle, std::uint32_t>> queue_view() const {
    std::vector<std::pair<Cycle, std::uint32_t>> v;
    v.reserve(list_.size());
    for (const Entry& e : list_) v.emplace_back(e.desc.deadline, e.rem_wcet);
    return v;
  }

 private:
  struct Entry {
    ProcessDescriptor desc;
    std::uint32_t rem_wcet = 0;
  };
  std::vector<std::size_t> edf_order() const;
  void emit(std::vector<EventRecord>& events, EventKind kind, ProcessId id,
            Criticality crit = Criticality::non_rt) const;

  std::vector<Entry> list_;  // insertion order, unbounded
  ControlPhase phase_;
  Cycle now_ = 0;
};

}  // namespace redsched
