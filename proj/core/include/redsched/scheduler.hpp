#pragma once

#include <optional>
#include <set>
#include <span>
#include <vector>

#include "redsched/cycle.hpp"
#include "redsched/metrics.hpp"
#include "redsched/ready_queue.hpp"
#include "redsched/reject_queue.hpp"
#include "redsched/types.hpp"

namespace redsched {

struct ControlPhase {
  PhaseKind kind = PhaseKind::idle;
  int cycles_left = 0;
  std::optional<Instruction> instr;  // exec_instr payload
  ProcessId reclaim_id = 0;          // reclaim_try pin
};

// The coprocessor top module: ready queue + reject queue + control unit,
// advanced one clock cycle per step() call. Every instruction and every
// internal move (rejection, reclaim try, reclaim redo) occupies exactly two
// busy cycles; the action lands on the phase's second cycle.
class RedScheduler {
 public:
  explicit RedScheduler(SchedulerConfig cfg);

  // Advances one cycle. An instruction may only be supplied while not busy.
  CycleOutput step(std::optional<Instruction> instr = std::nullopt);

  bool busy() const { return phase_.kind != PhaseKind::idle; }
  Cycle now() const { return now_; }
  bool drained() const {
    return ready_.empty() && reject_.empty() && phase_.kind == PhaseKind::idle;
  }

  const SchedulerConfig& config() const { return cfg_; }
  const ReadyQueue& ready() const { return ready_; }
  const RejectQueue& reject() const { return reject_; }
  PhaseKind phase() const { return phase_.kind; }

  const std::set<ProcessId>& live_ids() const { return live_; }
  bool live_ids_consistent() const;

  // Count of failed reclaims whose queue restoration was verified exactly
  // (config.self_check); a restoration mismatch throws instead.
  std::uint64_t restorations_verified() const { return restorations_verified_; }

  // State seeding for tests and benchmarks. rem_wcet 0 means d.wcet.
  void seed_ready(const ProcessDescriptor& d, std::uint32_t rem_wcet = 0);
  void seed_reject(const ProcessDescriptor& d);

 private:
  void apply_instruction(const Instruction& in, std::vector<EventRecord>& events);
  void apply_insert(const ProcessDescriptor& d, std::vector<EventRecord>& events);
  void apply_kill(ProcessId id, std::vector<EventRecord>& events);
  void apply_reject(std::vector<EventRecord>& events);
  void apply_reclaim(ProcessId pin, std::vector<EventRecord>& events);
  void control_eval(std::vector<EventRecord>& events);
  void emit(std::vector<EventRecord>& events, EventKind kind, ProcessId id,
            Criticality crit = Criticality::non_rt) const;

  SchedulerConfig cfg_;
  ReadyQueue ready_;
  RejectQueue reject_;
  ControlPhase phase_;
  Cycle now_ = 0;
  std::set<ProcessId> live_;

  // Reclaim livelock guard: a failed head is not retried until the ready
  // queue next changes (completion, kill, insert, or rejection).
  std::uint64_t ready_version_ = 0;
  struct ReclaimGuard {
    ProcessId id;
    std::uint64_t version;
  };
  std::optional<ReclaimGuard> failed_reclaim_;
  std::uint64_t restorations_verified_ = 0;
};

struct RunResult {
  std::vector<CycleOutput> trace;
  RunMetrics metrics;
};

// Steps a machine cycle by cycle, feeding each instruction at the first
// non-busy cycle at or after its issue cycle, until the workload is
// exhausted and the machine drains. Works for the RED machine, the oracle
// and the EDF baseline alike.
template <typename Machine>
RunResult run_machine(Machine& m, std::span<const Instruction> workload,
                      Cycle cycle_limit = 1'000'000) {
  RunResult res;
  std::size_t idx = 0;
  for (;;) {
    if (idx >= workload.size() && m.drained()) break;
    if (m.now() >= cycle_limit) throw CycleLimitError(cycle_limit);
    std::optional<Instruction> in;
    if (idx < workload.size() && !m.busy() && workload[idx].issue_cycle <= m.now())
      in = workload[idx++];
    CycleOutput out = m.step(in);
    res.metrics.absorb(out);
    res.trace.push_back(std::move(out));
  }
  return res;
}

}  // namespace redsched
