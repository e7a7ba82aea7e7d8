#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "redsched/oracle.hpp"
#include "redsched/scheduler.hpp"
#include "redsched/workload.hpp"

namespace redsched {

// One machine-vs-oracle lockstep episode plus the per-cycle invariant
// checks the acceptance criteria ask for.
struct EpisodeResult {
  bool diverged = false;
  Cycle divergence_cycle = 0;
  std::string detail;  // first divergence, human-readable

  std::uint64_t cycles = 0;
  std::uint64_t register_failures = 0;       // cum_exec != recomputed prefix sum
  std::uint64_t stabilization_failures = 0;  // overload at a non-busy cycle
  std::uint64_t phase_run_violations = 0;    // odd-length busy phase run
  std::uint64_t conservation_failures = 0;   // bad terminal-event accounting
  std::uint64_t live_set_failures = 0;       // live_ids != queue union
  std::uint64_t reclaim_redos = 0;
  std::uint64_t restorations_verified = 0;
  RunMetrics metrics;

  bool clean() const {
    return !diverged && register_failures == 0 && stabilization_failures == 0 &&
           phase_run_violations == 0 && conservation_failures == 0 &&
           live_set_failures == 0 && restorations_verified == reclaim_redos;
  }
};

EpisodeResult run_lockstep_episode(const SchedulerConfig& cfg,
                                   const WorkloadParams& params,
                                   Cycle cycle_limit = 1'000'000,
                                   OracleTweaks tweaks = {});

struct FuzzCampaign {
  std::uint64_t episodes = 10'000;
  std::uint32_t ops = 500;
  std::uint64_t base_seed = 1;
  std::vector<std::uint32_t> capacities{8, 16, 64};
  std::uint32_t jobs = 1;
  Cycle cycle_limit = 1'000'000;
};

struct FuzzReport {
  std::uint64_t episodes = 0;
  std::uint64_t cycles = 0;
  std::uint64_t divergences = 0;
  std::optional<std::uint64_t> first_divergence_episode;
  std::uint64_t first_divergence_seed = 0;
  std::string first_divergence_detail;

  std::uint64_t register_failures = 0;
  std::uint64_t stabilization_failures = 0;
  std::uint64_t phase_run_violations = 0;
  std::uint64_t conservation_failures = 0;
  std::uint64_t live_set_failures = 0;
  std::uint64_t reclaim_redos = 0;
  std::uint64_t restorations_verified = 0;
  double elapsed_seconds = 0.0;

  bool clean() const {
    return divergences == 0 && register_failures == 0 &&
           stabilization_failures == 0 && phase_run_violations == 0 &&
           conservation_failures == 0 && live_set_failures == 0 &&
           restorations_verified == reclaim_redos;
  }
};

// Episode i runs with seed splitmix64(base_seed + i) at capacities[i % n],
// so results merge order-independently across workers.
FuzzReport run_fuzz_campaign(const FuzzCampaign& campaign, OracleTweaks tweaks = {});

std::uint64_t episode_seed(std::uint64_t base_seed, std::uint64_t episode);

}  // namespace redsched
