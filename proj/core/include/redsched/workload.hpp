#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "redsched/types.hpp"

namespace redsched {

// Instruction-stream generation parameters. Deadlines are drawn as
// issue_cycle + wcet + slack, so no process is born infeasible in isolation.
struct WorkloadParams {
  std::uint32_t instruction_count = 500;
  double insert_ratio = 0.5;
  std::pair<std::uint32_t, std::uint32_t> deadline_slack{0, 128};
  std::pair<std::uint32_t, std::uint32_t> wcet_range{1, 32};
  std::array<double, 4> criticality_weights{0.25, 0.25, 0.25, 0.25};
  std::pair<std::uint16_t, std::uint16_t> sub_priority_range{0, 1023};
  std::pair<std::uint32_t, std::uint32_t> inter_arrival{0, 8};
  // Share of criticality-0 processes generated as pure non-RT (sentinel
  // deadline) rather than low-priority soft RT.
  double sentinel_ratio = 0.5;
  // Bound on simultaneously-live ids; set to 1 << id_bits so every generated
  // descriptor validates against the target SchedulerConfig.
  std::uint32_t live_limit = 1024;
  std::uint64_t seed = 1;
};

// Deterministic pseudo-random stream: nondecreasing issue cycles, kill
// targets always live, ids unique among simultaneously-live processes.
std::vector<Instruction> generate(const WorkloadParams& params);

// Named parameter sets: uniform, overload_stress, reclaim_heavy,
// capacity_pressure. Throws on an unknown name.
WorkloadParams preset(std::string_view name);

// Workload JSONL: one object per line with fields t, op ("insert"|"kill"),
// id; inserts additionally deadline, wcet, crit (0-3), prio (0-1023).
std::vector<Instruction> load_jsonl(const std::string& path);
void save_jsonl(const std::vector<Instruction>& stream, const std::string& path);

std::vector<Instruction> parse_jsonl(std::istream& in);
void write_jsonl(const std::vector<Instruction>& stream, std::ostream& out);

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace redsched
