#include "redsched/difftest.hpp"

#include <chrono>
#include <set>
#include <sstream>
#include <thread>

#include "redsched/trace_io.hpp"

namespace redsched {

namespace {

// Terminal-event accounting for the conservation criterion: every accepted
// id closes exactly one open lifetime.
class ConservationTracker {
 public:
  void observe(const EventRecord& e, std::uint64_t& failures) {
    switch (e.kind) {
      case EventKind::accepted:
        if (open_.count(e.id)) ++failures;
        open_.insert(e.id);
        break;
      case EventKind::completed:
      case EventKind::killed:
      case EventKind::expired_purged:
      case EventKind::capacity_drop:
        if (!open_.count(e.id))
          ++failures;
        else
          open_.erase(e.id);
        break;
      default:
        break;
    }
  }
  bool all_closed() const { return open_.empty(); }

 private:
  std::set<ProcessId> open_;
};

// Busy-phase run lengths must be even: every instruction and internal move
// occupies exactly two cycles, and consecutive phases of one kind only ever
// stack in whole phases.
class PhaseRunChecker {
 public:
  void observe(const CycleOutput& out, std::uint64_t& violations) {
    if (out.phase == current_) {
      ++run_;
      return;
    }
    flush(violations);
    current_ = out.phase;
    run_ = 1;
  }
  void finish(std::uint64_t& violations) { flush(violations); }

 private:
  void flush(std::uint64_t& violations) {
    if (current_ != PhaseKind::idle && run_ % 2 != 0) ++violations;
    run_ = 0;
  }
  PhaseKind current_ = PhaseKind::idle;
  std::uint64_t run_ = 0;
};

bool registers_consistent(const RedScheduler& m) {
  std::uint64_t sum = 0;
  for (const ReadyCell& c : m.ready().cells()) {
    sum += c.rem_wcet;
    if (c.cum_exec != sum) return false;
  }
  return true;
}

bool overload_now(const RedScheduler& m, Cycle now) {
  for (const ReadyCell& c : m.ready().cells())
    if (now + c.cum_exec > c.desc.deadline) return true;
  return false;
}

std::string dump_ready(const std::vector<RedOracle::ReadyView>& view) {
  std::string s = "[";
  for (const auto& c : view) {
    if (s.size() > 1) s += ' ';
    s += std::to_string(c.id) + ":rem" + std::to_string(c.rem_wcet) + ":cum" +
         std::to_string(c.cum_exec);
  }
  return s + "]";
}

std::string final_state_mismatch(const RedScheduler& m, const RedOracle& o) {
  std::vector<RedOracle::ReadyView> mview;
  for (const ReadyCell& c : m.ready().cells())
    mview.push_back({c.desc.id, c.desc.deadline, c.rem_wcet, c.cum_exec});
  const auto oview = o.ready_view();
  if (mview != oview)
    return "ready queues differ: machine " + dump_ready(mview) + " oracle " +
           dump_ready(oview);

  std::vector<ProcessId> mreject;
  for (const ProcessDescriptor& d : m.reject().cells()) mreject.push_back(d.id);
  const auto oreject = o.reject_view();
  if (mreject != oreject) {
    std::string s = "reject queues differ: machine [";
    for (ProcessId id : mreject) s += std::to_string(id) + ' ';
    s += "] oracle [";
    for (ProcessId id : oreject) s += std::to_string(id) + ' ';
    return s + "]";
  }

  if (m.now() != o.now())
    return "clocks differ: machine " + std::to_string(m.now()) + " oracle " +
           std::to_string(o.now());
  return {};
}

}  // namespace

std::uint64_t episode_seed(std::uint64_t base_seed, std::uint64_t episode) {
  return splitmix64(base_seed + episode);
}

namespace {
EpisodeResult run_lockstep_episode_impl(const SchedulerConfig& cfg,
                                        const WorkloadParams& params,
                                        Cycle cycle_limit, OracleTweaks tweaks);
}  // namespace

// Any exception out of a model (including the machine's restoration
// self-check) is reported as a divergence of that episode, never a crash of
// the campaign.
EpisodeResult run_lockstep_episode(const SchedulerConfig& cfg,
                                   const WorkloadParams& params, Cycle cycle_limit,
                                   OracleTweaks tweaks) {
  try {
    return run_lockstep_episode_impl(cfg, params, cycle_limit, tweaks);
  } catch (const std::exception& e) {
    EpisodeResult res;
    res.diverged = true;
    res.detail = std::string("exception: ") + e.what();
    return res;
  }
}

namespace {
EpisodeResult run_lockstep_episode_impl(const SchedulerConfig& cfg,
                                        const WorkloadParams& params,
                                        Cycle cycle_limit, OracleTweaks tweaks) {
  EpisodeResult res;
  RedScheduler machine(cfg);
  RedOracle oracle(cfg, tweaks);
  const std::vector<Instruction> stream = generate(params);

  ConservationTracker conservation;
  PhaseRunChecker phase_runs;
  std::size_t idx = 0;

  auto diverge = [&](Cycle cycle, const std::string& what) {
    if (res.diverged) return;
    res.diverged = true;
    res.divergence_cycle = cycle;
    res.detail = what;
  };

  for (;;) {
    if (idx >= stream.size() && machine.drained() && oracle.drained()) break;
    if (machine.now() >= cycle_limit) {
      diverge(machine.now(), "cycle limit exceeded before drain");
      break;
    }
    if (machine.busy() != oracle.busy()) {
      diverge(machine.now(), "busy flags differ before step");
      break;
    }

    std::optional<Instruction> in;
    if (idx < stream.size() && !machine.busy() &&
        stream[idx].issue_cycle <= machine.now())
      in = stream[idx++];

    const CycleOutput a = machine.step(in);
    const CycleOutput b = oracle.step(in);
    ++res.cycles;
    res.metrics.absorb(a);

    if (!(a == b)) {
      diverge(a.cycle, "machine " + describe(a) + " | oracle " + describe(b));
      break;
    }

    if (!registers_consistent(machine)) ++res.register_failures;
    if (!a.busy && overload_now(machine, a.cycle)) ++res.stabilization_failures;
    if (!machine.live_ids_consistent()) ++res.live_set_failures;
    phase_runs.observe(a, res.phase_run_violations);
    for (const EventRecord& e : a.events)
      conservation.observe(e, res.conservation_failures);
    for (const EventRecord& e : a.events)
      if (e.kind == EventKind::reclaim_redone) ++res.reclaim_redos;
  }

  phase_runs.finish(res.phase_run_violations);
  if (!conservation.all_closed()) ++res.conservation_failures;
  res.restorations_verified = machine.restorations_verified();

  if (!res.diverged) {
    const std::string mismatch = final_state_mismatch(machine, oracle);
    if (!mismatch.empty()) diverge(machine.now(), "final state: " + mismatch);
  }
  return res;
}
}  // namespace

FuzzReport run_fuzz_campaign(const FuzzCampaign& campaign, OracleTweaks tweaks) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint32_t jobs = std::max(1u, campaign.jobs);

  struct WorkerState {
    FuzzReport report;
  };
  std::vector<WorkerState> workers(jobs);

  auto work = [&](std::uint32_t w) {
    FuzzReport& rep = workers[w].report;
    for (std::uint64_t i = w; i < campaign.episodes; i += jobs) {
      const std::uint64_t seed = episode_seed(campaign.base_seed, i);
      const std::uint32_t capacity =
          campaign.capacities[i % campaign.capacities.size()];
      SchedulerConfig cfg = make_config(capacity);
      WorkloadParams params = preset("uniform");
      params.instruction_count = campaign.ops;
      params.live_limit = cfg.max_ids();
      params.seed = seed;

      EpisodeResult ep = run_lockstep_episode(cfg, params, campaign.cycle_limit, tweaks);
      ++rep.episodes;
      rep.cycles += ep.cycles;
      rep.register_failures += ep.register_failures;
      rep.stabilization_failures += ep.stabilization_failures;
      rep.phase_run_violations += ep.phase_run_violations;
      rep.conservation_failures += ep.conservation_failures;
      rep.live_set_failures += ep.live_set_failures;
      rep.reclaim_redos += ep.reclaim_redos;
      rep.restorations_verified += ep.restorations_verified;
      if (ep.diverged) {
        ++rep.divergences;
        if (!rep.first_divergence_episode || i < *rep.first_divergence_episode) {
          rep.first_divergence_episode = i;
          rep.first_divergence_seed = seed;
          std::ostringstream os;
          os << "episode " << i << " seed " << seed << " capacity " << capacity
             << " cycle " << ep.divergence_cycle << ": " << ep.detail;
          rep.first_divergence_detail = os.str();
        }
      }
    }
  };

  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(jobs);
    for (std::uint32_t w = 0; w < jobs; ++w) threads.emplace_back(work, w);
    for (std::thread& th : threads) th.join();
  }

  FuzzReport total;
  for (const WorkerState& w : workers) {
    const FuzzReport& r = w.report;
    total.episodes += r.episodes;
    total.cycles += r.cycles;
    total.divergences += r.divergences;
    total.register_failures += r.register_failures;
    total.stabilization_failures += r.stabilization_failures;
    total.phase_run_violations += r.phase_run_violations;
    total.conservation_failures += r.conservation_failures;
    total.live_set_failures += r.live_set_failures;
    total.reclaim_redos += r.reclaim_redos;
    total.restorations_verified += r.restorations_verified;
    if (r.first_divergence_episode &&
        (!total.first_divergence_episode ||
         *r.first_divergence_episode < *total.first_divergence_episode)) {
      total.first_divergence_episode = r.first_divergence_episode;
      total.first_divergence_seed = r.first_divergence_seed;
      total.first_divergence_detail = r.first_divergence_detail;
    }
  }
  total.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return total;
}

}  // namespace redsched
