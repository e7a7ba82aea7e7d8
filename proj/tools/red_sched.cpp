#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "redsched/difftest.hpp"
#include "redsched/oracle.hpp"
#include "redsched/scheduler.hpp"
#include "redsched/trace_io.hpp"
#include "redsched/workload.hpp"

namespace {

using namespace redsched;

constexpr int kExitOk = 0;
constexpr int kExitIoError = 1;
constexpr int kExitCycleLimit = 2;
constexpr int kExitDivergence = 3;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("RED_SCHED_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring malformed RED_SCHED_SEED\n";
    }
  }
  return 1;
}

struct WorkloadArgs {
  std::string workload_path;
  std::string preset_name;
  std::uint64_t seed = default_seed();
  std::uint32_t ops = 500;
};

void add_workload_flags(CLI::App* cmd, WorkloadArgs& args) {
  auto* wl = cmd->add_option("--workload", args.workload_path, "workload JSONL file");
  auto* pr = cmd->add_option("--preset", args.preset_name,
                             "preset: uniform|overload_stress|reclaim_heavy|capacity_pressure");
  wl->excludes(pr);
  cmd->add_option("--seed", args.seed, "generator seed (default: RED_SCHED_SEED or 1)");
  cmd->add_option("--ops", args.ops, "instructions to generate for presets");
}

std::vector<Instruction> make_stream(const WorkloadArgs& args, const SchedulerConfig& cfg) {
  std::vector<Instruction> stream;
  if (!args.workload_path.empty()) {
    stream = load_jsonl(args.workload_path);
  } else {
    WorkloadParams params = preset(args.preset_name.empty() ? "uniform" : args.preset_name);
    params.seed = args.seed;
    params.instruction_count = args.ops;
    params.live_limit = cfg.max_ids();
    stream = generate(params);
  }
  for (const Instruction& in : stream) {
    if (!in.is_insert()) continue;
    const auto violations = validate(in.desc(), cfg);
    if (!violations.empty())
      throw WorkloadFormatError("descriptor id " + std::to_string(in.desc().id) +
                                ": field '" + violations.front().field +
                                "': " + violations.front().message);
  }
  return stream;
}

int cmd_run(const WorkloadArgs& args, std::uint32_t capacity, std::uint32_t reject_capacity,
            const std::string& trace_path, const std::string& metrics_path,
            Cycle cycle_limit) {
  const SchedulerConfig cfg = make_config(capacity, reject_capacity);
  const auto stream = make_stream(args, cfg);

  RedScheduler machine(cfg);
  RunResult result;
  try {
    result = run_machine(machine, stream, cycle_limit);
  } catch (const CycleLimitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCycleLimit;
  }

  if (!trace_path.empty()) {
    std::ofstream out(trace_path);
    if (!out) {
      std::cerr << "error: cannot open " << trace_path << '\n';
      return kExitIoError;
    }
    write_trace_csv(out, result.trace);
  }
  const std::string metrics = metrics_to_json(result.metrics);
  if (metrics_path.empty()) {
    std::cout << metrics << '\n';
  } else {
    std::ofstream out(metrics_path);
    if (!out) {
      std::cerr << "error: cannot open " << metrics_path << '\n';
      return kExitIoError;
    }
    out << metrics << '\n';
  }
  return kExitOk;
}

int cmd_fuzz(std::uint64_t episodes, std::uint32_t ops, std::uint64_t seed,
             std::uint32_t capacity, std::uint32_t jobs, Cycle cycle_limit) {
  FuzzCampaign campaign;
  campaign.episodes = episodes;
  campaign.ops = ops;
  campaign.base_seed = seed;
  campaign.capacities = {capacity};
  campaign.jobs = jobs;
  campaign.cycle_limit = cycle_limit;

  const FuzzReport report = run_fuzz_campaign(campaign);
  std::cout << "episodes:               " << report.episodes << '\n'
            << "cycles:                 " << report.cycles << '\n'
            << "divergences:            " << report.divergences << '\n'
            << "register failures:      " << report.register_failures << '\n'
            << "stabilization failures: " << report.stabilization_failures << '\n'
            << "phase-run violations:   " << report.phase_run_violations << '\n'
            << "conservation failures:  " << report.conservation_failures << '\n'
            << "live-set failures:      " << report.live_set_failures << '\n'
            << "reclaim redos:          " << report.reclaim_redos << '\n'
            << "restorations verified:  " << report.restorations_verified << '\n'
            << "elapsed:                " << report.elapsed_seconds << " s\n";
  if (report.divergences > 0) {
    std::cout << "first divergence: " << report.first_divergence_detail << '\n';
    return kExitDivergence;
  }
  if (!report.clean()) {
    std::cout << "invariant check failures detected\n";
    return kExitDivergence;
  }
  return kExitOk;
}

int cmd_compare(const WorkloadArgs& args, std::uint32_t capacity,
                std::uint32_t reject_capacity, const std::string& out_path,
                Cycle cycle_limit) {
  const SchedulerConfig cfg = make_config(capacity, reject_capacity);
  const auto stream = make_stream(args, cfg);

  RedScheduler red(cfg);
  EdfBaseline edf;
  RunResult red_result, edf_result;
  try {
    red_result = run_machine(red, stream, cycle_limit);
    edf_result = run_machine(edf, stream, cycle_limit);
  } catch (const CycleLimitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCycleLimit;
  }

  nlohmann::json j;
  j["edf"] = nlohmann::json::parse(metrics_to_json(edf_result.metrics));
  j["red"] = nlohmann::json::parse(metrics_to_json(red_result.metrics));
  const std::string report = j.dump(2);
  if (out_path.empty()) {
    std::cout << report << '\n';
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "error: cannot open " << out_path << '\n';
      return kExitIoError;
    }
    out << report << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RED scheduler coprocessor simulator"};
  app.require_subcommand(1);

  // run
  WorkloadArgs run_args;
  std::uint32_t run_capacity = 16, run_reject_capacity = 0;
  std::string run_trace, run_metrics;
  Cycle run_cycle_limit = 1'000'000;
  CLI::App* run = app.add_subcommand("run", "simulate one workload and export trace/metrics");
  add_workload_flags(run, run_args);
  run->add_option("--capacity", run_capacity, "ready-queue capacity")
      ->check(CLI::Range(8u, 64u));
  run->add_option("--reject-capacity", run_reject_capacity,
                  "reject-queue capacity (default: same as --capacity)");
  run->add_option("--trace", run_trace, "trace CSV output path");
  run->add_option("--metrics", run_metrics, "metrics JSON output path (default: stdout)");
  run->add_option("--cycle-limit", run_cycle_limit, "abort after this many cycles");

  // fuzz
  std::uint64_t fuzz_episodes = 10'000, fuzz_seed = default_seed();
  std::uint32_t fuzz_ops = 500, fuzz_capacity = 16;
  std::uint32_t fuzz_jobs = std::max(1u, std::thread::hardware_concurrency());
  Cycle fuzz_cycle_limit = 1'000'000;
  CLI::App* fuzz = app.add_subcommand("fuzz", "differential fuzz: machine vs golden model");
  fuzz->add_option("--episodes", fuzz_episodes, "number of random episodes");
  fuzz->add_option("--ops", fuzz_ops, "instructions per episode");
  fuzz->add_option("--seed", fuzz_seed, "base seed (default: RED_SCHED_SEED or 1)");
  fuzz->add_option("--capacity", fuzz_capacity, "ready-queue capacity")
      ->check(CLI::Range(8u, 64u));
  fuzz->add_option("--jobs", fuzz_jobs, "parallel workers");
  fuzz->add_option("--cycle-limit", fuzz_cycle_limit, "per-episode cycle cap");

  // compare
  WorkloadArgs cmp_args;
  std::uint32_t cmp_capacity = 16, cmp_reject_capacity = 0;
  std::string cmp_out;
  Cycle cmp_cycle_limit = 1'000'000;
  CLI::App* cmp = app.add_subcommand("compare", "run RED vs plain EDF on one workload");
  add_workload_flags(cmp, cmp_args);
  cmp->add_option("--capacity", cmp_capacity, "ready-queue capacity")
      ->check(CLI::Range(8u, 64u));
  cmp->add_option("--reject-capacity", cmp_reject_capacity,
                  "reject-queue capacity (default: same as --capacity)");
  cmp->add_option("--out", cmp_out, "report JSON output path (default: stdout)");
  cmp->add_option("--cycle-limit", cmp_cycle_limit, "abort after this many cycles");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(run_args, run_capacity, run_reject_capacity, run_trace,
                     run_metrics, run_cycle_limit);
    if (fuzz->parsed())
      return cmd_fuzz(fuzz_episodes, fuzz_ops, fuzz_seed, fuzz_capacity, fuzz_jobs,
                      fuzz_cycle_limit);
    if (cmp->parsed())
      return cmd_compare(cmp_args, cmp_capacity, cmp_reject_capacity, cmp_out,
                         cmp_cycle_limit);
  } catch (const WorkloadFormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIoError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIoError;
  } catch (const SchedulerError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIoError;
  }
  return kExitOk;
}
