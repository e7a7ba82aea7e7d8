#include "redsched/workload.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace redsched {

namespace {

void check_params(const WorkloadParams& p) {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (p.instruction_count < 1) fail("instruction_count must be >= 1");
  if (p.insert_ratio < 0.0 || p.insert_ratio > 1.0) fail("insert_ratio must be in [0,1]");
  if (p.sentinel_ratio < 0.0 || p.sentinel_ratio > 1.0) fail("sentinel_ratio must be in [0,1]");
  if (p.deadline_slack.first > p.deadline_slack.second) fail("deadline_slack range inverted");
  if (p.wcet_range.first < 1) fail("wcet minimum must be >= 1");
  if (p.wcet_range.first > p.wcet_range.second) fail("wcet_range inverted");
  if (p.sub_priority_range.first > p.sub_priority_range.second)
    fail("sub_priority_range inverted");
  if (p.sub_priority_range.second >= kSubPriorityLevels)
    fail("sub_priority_range exceeds 1023");
  if (p.inter_arrival.first > p.inter_arrival.second) fail("inter_arrival range inverted");
  if (p.live_limit < 1) fail("live_limit must be >= 1");
  double wsum = 0;
  for (double w : p.criticality_weights) {
    if (w < 0) fail("criticality weight must be >= 0");
    wsum += w;
  }
  if (wsum <= 0) fail("criticality weights must not all be zero");
}

}  // namespace

std::vector<Instruction> generate(const WorkloadParams& p) {
  check_params(p);
  std::mt19937_64 rng(p.seed);
  std::uniform_int_distribution<std::uint32_t> gap(p.inter_arrival.first,
                                                   p.inter_arrival.second);
  std::uniform_int_distribution<std::uint32_t> wcet(p.wcet_range.first,
                                                    p.wcet_range.second);
  std::uniform_int_distribution<std::uint32_t> slack(p.deadline_slack.first,
                                                     p.deadline_slack.second);
  std::uniform_int_distribution<std::uint16_t> prio(p.sub_priority_range.first,
                                                    p.sub_priority_range.second);
  std::discrete_distribution<int> crit(p.criticality_weights.begin(),
                                       p.criticality_weights.end());
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  std::vector<Instruction> stream;
  stream.reserve(p.instruction_count);
  std::set<ProcessId> live;
  std::set<ProcessId> recycled;
  ProcessId next_fresh = 0;
  Cycle t = 0;

  for (std::uint32_t n = 0; n < p.instruction_count; ++n) {
    t += gap(rng);
    bool insert = coin(rng) < p.insert_ratio;
    if (live.empty()) insert = true;
    if (live.size() >= p.live_limit) insert = false;

    if (insert) {
      ProcessId id;
      if (next_fresh < p.live_limit) {
        id = next_fresh++;
      } else {
        id = *recycled.begin();
        recycled.erase(recycled.begin());
      }
      ProcessDescriptor d;
      d.id = id;
      d.criticality = static_cast<Criticality>(crit(rng));
      d.wcet = wcet(rng);
      const std::uint32_t s = slack(rng);
      const bool sentinel =
          d.criticality == Criticality::non_rt && coin(rng) < p.sentinel_ratio;
      d.deadline = sentinel ? kDeadlineSentinel : t + d.wcet + s;
      d.sub_priority = d.criticality == Criticality::non_rt ? prio(rng) : 0;
      live.insert(id);
      stream.push_back(Instruction::insert(t, d));
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, live.size() - 1);
      auto it = live.begin();
      std::advance(it, pick(rng));
      const ProcessId id = *it;
      live.erase(it);
      recycled.insert(id);
      stream.push_back(Instruction::kill(t, id));
    }
  }
  return stream;
}

WorkloadParams preset(std::string_view name) {
  WorkloadParams p;
  if (name == "uniform") {
    return p;
  }
  if (name == "overload_stress") {
    p.insert_ratio = 0.7;
    p.deadline_slack = {16, 64};
    p.wcet_range = {8, 24};
    p.inter_arrival = {4, 8};
    p.criticality_weights = {0.45, 0.25, 0.25, 0.05};
    p.sentinel_ratio = 0.1;
    return p;
  }
  if (name == "reclaim_heavy") {
    p.insert_ratio = 0.6;
    p.deadline_slack = {128, 512};
    p.wcet_range = {6, 16};
    p.inter_arrival = {2, 4};
    p.criticality_weights = {0.50, 0.20, 0.20, 0.10};
    p.sentinel_ratio = 0.7;
    return p;
  }
  if (name == "capacity_pressure") {
    p.insert_ratio = 0.85;
    p.deadline_slack = {512, 2048};
    p.wcet_range = {8, 16};
    p.inter_arrival = {2, 4};
    p.criticality_weights = {0.50, 0.20, 0.20, 0.10};
    p.sentinel_ratio = 0.5;
    return p;
  }
  throw std::invalid_argument("unknown preset: " + std::string(name));
}

namespace {

using nlohmann::json;

[[noreturn]] void format_fail(std::size_t line, const std::string& what) {
  throw WorkloadFormatError("line " + std::to_string(line) + ": " + what);
}

std::uint64_t require_uint(const json& j, const char* field, std::size_t line,
                           std::uint64_t max) {
  if (!j.contains(field)) format_fail(line, std::string("missing field '") + field + "'");
  const json& v = j.at(field);
  if (!v.is_number_unsigned())
    format_fail(line, std::string("field '") + field + "' must be an unsigned integer");
  const std::uint64_t x = v.get<std::uint64_t>();
  if (x > max)
    format_fail(line, std::string("field '") + field + "' out of range");
  return x;
}

}  // namespace

std::vector<Instruction> parse_jsonl(std::istream& in) {
  std::vector<Instruction> stream;
  std::string line;
  std::size_t lineno = 0;
  Cycle prev_t = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      format_fail(lineno, std::string("parse error: ") + e.what());
    }
    if (!j.is_object()) format_fail(lineno, "expected a JSON object");

    const Cycle t = require_uint(j, "t", lineno, kDeadlineSentinel);
    if (!stream.empty() && t < prev_t)
      format_fail(lineno, "field 't' must be nondecreasing");
    prev_t = t;

    if (!j.contains("op") || !j.at("op").is_string())
      format_fail(lineno, "field 'op' must be \"insert\" or \"kill\"");
    const std::string op = j.at("op").get<std::string>();
    const auto id = static_cast<ProcessId>(
        require_uint(j, "id", lineno, std::numeric_limits<ProcessId>::max()));

    if (op == "insert") {
      ProcessDescriptor d;
      d.id = id;
      d.deadline = require_uint(j, "deadline", lineno, kDeadlineSentinel);
      d.wcet = static_cast<std::uint32_t>(
          require_uint(j, "wcet", lineno, std::numeric_limits<std::uint32_t>::max()));
      if (d.wcet < 1) format_fail(lineno, "field 'wcet' must be >= 1");
      d.criticality = static_cast<Criticality>(require_uint(j, "crit", lineno, 3));
      d.sub_priority =
          static_cast<std::uint16_t>(require_uint(j, "prio", lineno, kSubPriorityLevels - 1));
      if (d.criticality != Criticality::non_rt && d.sub_priority != 0)
        format_fail(lineno, "field 'prio' must be 0 at criticality > 0");
      stream.push_back(Instruction::insert(t, d));
    } else if (op == "kill") {
      stream.push_back(Instruction::kill(t, id));
    } else {
      format_fail(lineno, "field 'op' must be \"insert\" or \"kill\"");
    }
  }
  return stream;
}

void write_jsonl(const std::vector<Instruction>& stream, std::ostream& out) {
  for (const Instruction& in : stream) {
    json j;
    j["t"] = in.issue_cycle;
    if (in.is_insert()) {
      const ProcessDescriptor& d = in.desc();
      j["op"] = "insert";
      j["id"] = d.id;
      j["deadline"] = d.deadline;
      j["wcet"] = d.wcet;
      j["crit"] = raw(d.criticality);
      j["prio"] = d.sub_priority;
    } else {
      j["op"] = "kill";
      j["id"] = in.kill_id();
    }
    out << j.dump() << '\n';
  }
}

std::vector<Instruction> load_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw WorkloadFormatError("cannot open " + path);
  return parse_jsonl(in);
}

void save_jsonl(const std::vector<Instruction>& stream, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw WorkloadFormatError("cannot open " + path + " for writing");
  write_jsonl(stream, out);
}

}  // namespace redsched
