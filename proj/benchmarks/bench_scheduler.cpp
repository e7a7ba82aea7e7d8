#include <benchmark/benchmark.h>

#include "redsched/difftest.hpp"
#include "redsched/oracle.hpp"
#include "redsched/scheduler.hpp"
#include "redsched/shift_queue.hpp"
#include "redsched/workload.hpp"

using namespace redsched;

namespace {

std::vector<Instruction> bench_stream(std::uint32_t capacity, std::uint32_t ops) {
  WorkloadParams params = preset("uniform");
  params.instruction_count = ops;
  params.live_limit = make_config(capacity).max_ids();
  params.seed = 7;
  return generate(params);
}

void BM_ShiftQueueInsert(benchmark::State& state) {
  const auto capacity = static_cast<std::size_t>(state.range(0));
  std::vector<ProcessDescriptor> descs;
  for (ProcessId i = 0; i < 256; ++i)
    descs.push_back({i, (i * 2654435761u) % 4096, 1, Criticality::non_rt, 0});
  for (auto _ : state) {
    ShiftQueue<ProcessDescriptor, EdfBefore, DescriptorId> q(capacity);
    for (const auto& d : descs) benchmark::DoNotOptimize(q.insert(d));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(descs.size()));
}

void BM_MachineRun(benchmark::State& state) {
  const auto capacity = static_cast<std::uint32_t>(state.range(0));
  SchedulerConfig cfg = make_config(capacity);
  cfg.self_check = false;
  const auto stream = bench_stream(capacity, 500);
  std::uint64_t cycles = 0;
  for (auto _ : state) {
    RedScheduler m(cfg);
    const auto res = run_machine(m, stream, 10'000'000);
    cycles += res.metrics.total_cycles;
    benchmark::DoNotOptimize(res.metrics.total_cycles);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(cycles));
  state.SetLabel("items = simulated cycles");
}

void BM_LockstepEpisode(benchmark::State& state) {
  const auto capacity = static_cast<std::uint32_t>(state.range(0));
  const SchedulerConfig cfg = make_config(capacity);
  WorkloadParams params = preset("uniform");
  params.instruction_count = 500;
  params.live_limit = cfg.max_ids();
  params.seed = 11;
  std::uint64_t cycles = 0;
  for (auto _ : state) {
    const auto ep = run_lockstep_episode(cfg, params, 10'000'000);
    cycles += ep.cycles;
    benchmark::DoNotOptimize(ep.diverged);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(cycles));
  state.SetLabel("items = lockstep-checked cycles");
}

}  // namespace

BENCHMARK(BM_ShiftQueueInsert)->Arg(8)->Arg(16)->Arg(64);
BENCHMARK(BM_MachineRun)->Arg(8)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LockstepEpisode)->Arg(8)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
