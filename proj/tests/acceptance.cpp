// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria 1-4, 7 and 8 share one differential fuzz campaign;
// 5 and 6 run their own generated workload corpora.

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "redsched/difftest.hpp"
#include "redsched/oracle.hpp"
#include "redsched/scheduler.hpp"
#include "redsched/workload.hpp"

using namespace redsched;

namespace {

struct Criterion {
  bool pass = false;
  std::string detail;
};

std::uint32_t worker_count() {
  return std::max(2u, std::min(8u, std::thread::hardware_concurrency()));
}

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

// ---------------------------------------------------------------- 5: hard-RT

WorkloadParams hardguard_params(std::uint64_t seed) {
  WorkloadParams p;
  p.instruction_count = 500;
  p.insert_ratio = 0.5;
  p.deadline_slack = {32, 160};
  p.wcet_range = {4, 28};
  p.inter_arrival = {5, 10};
  p.criticality_weights = {0.30, 0.30, 0.25, 0.15};
  p.sentinel_ratio = 0.3;
  p.live_limit = make_config(16).max_ids();
  p.seed = seed;
  return p;
}

// Soft processes need enough demand to force rejections; hard processes
// need small budgets and roomy windows or their full-WCET sets collide.
// One wcet range cannot give both, so hard inserts are reshaped after
// generation (still deadline >= issue + wcet, ids untouched).
std::vector<Instruction> hardguard_stream(std::uint64_t seed) {
  auto stream = generate(hardguard_params(seed));
  for (Instruction& in : stream) {
    if (!in.is_insert()) continue;
    ProcessDescriptor d = in.desc();
    if (d.criticality != Criticality::hard_rt) continue;
    d.wcet = 2 + d.wcet % 6;
    d.deadline = in.issue_cycle + d.wcet + 40 + (d.deadline - in.issue_cycle) % 80;
    in = Instruction::insert(in.issue_cycle, d);
  }
  return stream;
}

// The criterion's precondition taken at worst-case budgets: at every
// instruction boundary the live criticality-3 set must be edf_feasible.
// Inside the machine a queued hard cell may be starved behind earlier
// deadlines and keep its whole WCET, yet stabilization caps its remaining
// budget by (deadline - now); a queued hard's budget is therefore bounded
// by min(wcet, deadline - t).
bool hard_subset_feasible(const std::vector<Instruction>& stream) {
  std::map<ProcessId, ProcessDescriptor> live_hard;
  for (const Instruction& in : stream) {
    const Cycle t = in.issue_cycle;
    if (in.is_insert()) {
      if (in.desc().criticality == Criticality::hard_rt)
        live_hard[in.desc().id] = in.desc();
    } else {
      live_hard.erase(in.kill_id());
    }
    std::vector<std::pair<Cycle, std::uint32_t>> set;
    for (auto it = live_hard.begin(); it != live_hard.end();) {
      const ProcessDescriptor& d = it->second;
      if (d.deadline <= t) {
        it = live_hard.erase(it);  // its window has closed
      } else {
        const auto bound =
            static_cast<std::uint32_t>(std::min<Cycle>(d.wcet, d.deadline - t));
        set.emplace_back(d.deadline, bound);
        ++it;
      }
    }
    if (!edf_feasible(set, t)) return false;
  }
  return true;
}

struct HardGuardRun {
  std::uint64_t hard_misses = 0;
  std::uint64_t hard_drops = 0;
  std::uint64_t rejections = 0;
};

HardGuardRun run_red_tracking_hard(const SchedulerConfig& cfg,
                                   const std::vector<Instruction>& stream) {
  HardGuardRun r;
  RedScheduler m(cfg);
  std::size_t idx = 0;
  std::map<ProcessId, Criticality> live_crit;
  std::optional<ProcessDescriptor> pending;
  while (!(idx >= stream.size() && m.drained())) {
    if (m.now() >= 1'000'000) break;
    std::optional<Instruction> in;
    if (idx < stream.size() && !m.busy() && stream[idx].issue_cycle <= m.now()) {
      in = stream[idx++];
      if (in->is_insert()) pending = in->desc();
    }
    const CycleOutput out = m.step(in);
    for (const EventRecord& e : out.events) {
      switch (e.kind) {
        case EventKind::accepted:
          live_crit[e.id] = pending ? pending->criticality : Criticality::non_rt;
          break;
        case EventKind::deadline_miss:
          if (e.criticality == Criticality::hard_rt) ++r.hard_misses;
          break;
        case EventKind::rejected:
          ++r.rejections;
          break;
        case EventKind::capacity_drop:
          if (live_crit.count(e.id) &&
              live_crit[e.id] == Criticality::hard_rt)
            ++r.hard_drops;
          live_crit.erase(e.id);
          break;
        case EventKind::completed:
        case EventKind::killed:
        case EventKind::expired_purged:
          live_crit.erase(e.id);
          break;
        default:
          break;
      }
    }
  }
  return r;
}

Criterion criterion5() {
  const SchedulerConfig cfg = make_config(16);
  const std::size_t target = 1000;
  std::size_t qualified = 0, attempts = 0;
  HardGuardRun total;
  for (std::uint64_t seed = 1; qualified < target && attempts < 5000; ++seed) {
    ++attempts;
    const auto stream = hardguard_stream(seed);
    if (!hard_subset_feasible(stream)) continue;
    ++qualified;
    const HardGuardRun r = run_red_tracking_hard(cfg, stream);
    total.hard_misses += r.hard_misses;
    total.hard_drops += r.hard_drops;
    total.rejections += r.rejections;
  }

  // Second half: one overload_stress seed where plain EDF misses a hard
  // deadline and RED, without any hard overload, misses none.
  std::optional<std::uint64_t> witness;
  for (std::uint64_t seed = 1; seed <= 200 && !witness; ++seed) {
    WorkloadParams params = preset("overload_stress");
    params.seed = seed;
    params.live_limit = cfg.max_ids();
    const auto stream = generate(params);

    RedScheduler red(cfg);
    EdfBaseline edf;
    const auto red_res = run_machine(red, stream, 1'000'000);
    const auto edf_res = run_machine(edf, stream, 1'000'000);
    if (red_res.metrics.hard_overloads == 0 &&
        red_res.metrics.misses_by_criticality[3] == 0 &&
        edf_res.metrics.misses_by_criticality[3] >= 1)
      witness = seed;
  }

  Criterion c;
  c.pass = qualified == target && total.hard_misses == 0 && total.hard_drops == 0 &&
           total.rejections > 0 && witness.has_value();
  c.detail = fmt(
      "%zu/%zu feasible-hard workloads, %llu hard misses, %llu hard drops, "
      "%llu rejections exercised; EDF-vs-RED witness seed %llu",
      qualified, target, (unsigned long long)total.hard_misses,
      (unsigned long long)total.hard_drops, (unsigned long long)total.rejections,
      witness ? (unsigned long long)*witness : 0ull);
  return c;
}

// ----------------------------------------------------- 6: EDF degeneration

WorkloadParams feasible_params(std::uint64_t seed, const SchedulerConfig& cfg) {
  WorkloadParams p;
  p.instruction_count = 500;
  p.insert_ratio = 0.5;
  p.deadline_slack = {500, 2000};
  p.wcet_range = {1, 8};
  p.inter_arrival = {2, 8};
  p.criticality_weights = {0.25, 0.25, 0.25, 0.25};
  p.sentinel_ratio = 0.5;
  p.live_limit = cfg.max_ids();
  p.seed = seed;
  return p;
}

Criterion criterion6() {
  const SchedulerConfig cfg = make_config(64);
  const std::size_t target = 1000;
  std::size_t qualified = 0, attempts = 0, mismatches = 0;
  for (std::uint64_t seed = 1; qualified < target && attempts < 5000; ++seed) {
    ++attempts;
    const auto stream = generate(feasible_params(seed, cfg));

    RedScheduler red(cfg);
    const auto red_res = run_machine(red, stream, 1'000'000);
    if (red_res.metrics.rejections != 0 || red_res.metrics.hard_overloads != 0 ||
        red_res.metrics.capacity_drops != 0)
      continue;  // overload occurred; outside this criterion's precondition
    ++qualified;

    EdfBaseline edf;
    const auto edf_res = run_machine(edf, stream, 1'000'000);
    if (red_res.trace.size() != edf_res.trace.size()) {
      ++mismatches;
      continue;
    }
    for (std::size_t i = 0; i < red_res.trace.size(); ++i) {
      if (red_res.trace[i].process_to_run != edf_res.trace[i].process_to_run) {
        ++mismatches;
        break;
      }
    }
  }
  Criterion c;
  c.pass = qualified == target && mismatches == 0;
  c.detail = fmt("%zu/%zu overload-free workloads, %zu dispatch mismatches",
                 qualified, target, mismatches);
  return c;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, Criterion>> results;

  // Criteria 1-4, 7, 8 ride on one campaign.
  FuzzCampaign campaign;
  campaign.episodes = 10'000;
  campaign.ops = 500;
  campaign.base_seed = 20260808;
  campaign.capacities = {8, 16, 64};
  campaign.jobs = worker_count();
  campaign.cycle_limit = 1'000'000;
  const FuzzReport rep = run_fuzz_campaign(campaign);

  {
    Criterion c;
    c.pass = rep.episodes == campaign.episodes && rep.divergences == 0 &&
             rep.elapsed_seconds <= 300.0;
    c.detail = fmt("%llu episodes x %u ops at capacities {8,16,64}: %llu divergences, %.1f s",
                   (unsigned long long)rep.episodes, campaign.ops,
                   (unsigned long long)rep.divergences, rep.elapsed_seconds);
    if (rep.first_divergence_episode) c.detail += "; first: " + rep.first_divergence_detail;
    results.emplace_back("differential fuzz, machine == golden model", c);
  }
  {
    Criterion c;
    c.pass = rep.register_failures == 0;
    c.detail = fmt("%llu register mismatches across %llu cycles",
                   (unsigned long long)rep.register_failures,
                   (unsigned long long)rep.cycles);
    results.emplace_back("register consistency (cum_exec == prefix sums)", c);
  }
  {
    Criterion c;
    c.pass = rep.stabilization_failures == 0;
    c.detail = fmt("%llu overloaded non-busy cycles",
                   (unsigned long long)rep.stabilization_failures);
    results.emplace_back("stabilization (idle implies no overload)", c);
  }
  {
    Criterion c;
    c.pass = rep.phase_run_violations == 0;
    c.detail = fmt("%llu odd-length busy phase runs",
                   (unsigned long long)rep.phase_run_violations);
    results.emplace_back("two-cycle contract for every operation", c);
  }

  results.emplace_back("hard-RT guarantee under feasible hard subsets", criterion5());
  results.emplace_back("EDF degeneration on overload-free workloads", criterion6());

  {
    Criterion c;
    c.pass = rep.reclaim_redos > 0 && rep.restorations_verified == rep.reclaim_redos;
    c.detail = fmt("%llu failed reclaims, %llu exact restorations",
                   (unsigned long long)rep.reclaim_redos,
                   (unsigned long long)rep.restorations_verified);
    results.emplace_back("reclaim-redo restores both queues exactly", c);
  }
  {
    Criterion c;
    c.pass = rep.conservation_failures == 0 && rep.live_set_failures == 0;
    c.detail = fmt("%llu conservation faults, %llu live-set faults",
                   (unsigned long long)rep.conservation_failures,
                   (unsigned long long)rep.live_set_failures);
    results.emplace_back("conservation and live-set consistency", c);
  }

  int failures = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& [name, c] = results[i];
    std::printf("[%s] %zu. %s: %s\n", c.pass ? "PASS" : "FAIL", i + 1, name.c_str(),
                c.detail.c_str());
    if (!c.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
