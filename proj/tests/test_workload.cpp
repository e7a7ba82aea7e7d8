#include <set>
#include <sstream>

#include "doctest.h"
#include "redsched/scheduler.hpp"
#include "redsched/workload.hpp"

using namespace redsched;

TEST_CASE("generation is deterministic in the seed") {
  WorkloadParams params;
  params.seed = 77;
  CHECK(generate(params) == generate(params));
  params.seed = 78;
  CHECK(generate(WorkloadParams{}) != generate(params));
}

TEST_CASE("insert ratio 1.0 generates only inserts") {
  WorkloadParams params;
  params.insert_ratio = 1.0;
  params.instruction_count = 200;
  for (const Instruction& in : generate(params)) CHECK(in.is_insert());
}

TEST_CASE("default stream: balanced mix, kills always target live ids") {
  WorkloadParams params;
  params.seed = 5;
  const auto stream = generate(params);
  REQUIRE(stream.size() == 500);

  std::size_t inserts = 0;
  std::set<ProcessId> live;
  Cycle prev = 0;
  for (const Instruction& in : stream) {
    CHECK(in.issue_cycle >= prev);
    prev = in.issue_cycle;
    if (in.is_insert()) {
      ++inserts;
      CHECK_FALSE(live.count(in.desc().id));
      CHECK(in.desc().wcet >= 1);
      if (in.desc().deadline != kDeadlineSentinel)
        CHECK(in.desc().deadline >= in.issue_cycle + in.desc().wcet);
      live.insert(in.desc().id);
    } else {
      CHECK(live.count(in.kill_id()) == 1);
      live.erase(in.kill_id());
    }
  }
  const double ratio = double(inserts) / double(stream.size());
  CHECK(ratio >= 0.4);
  CHECK(ratio <= 0.6);
}

TEST_CASE("generated descriptors validate against the target config") {
  const SchedulerConfig cfg = make_config(8);
  WorkloadParams params;
  params.live_limit = cfg.max_ids();
  params.seed = 9;
  for (const Instruction& in : generate(params))
    if (in.is_insert()) CHECK(validate(in.desc(), cfg).empty());
}

TEST_CASE("invalid parameter ranges are rejected") {
  WorkloadParams params;
  params.wcet_range = {0, 4};
  CHECK_THROWS_AS(generate(params), std::invalid_argument);
  params = WorkloadParams{};
  params.insert_ratio = 1.5;
  CHECK_THROWS_AS(generate(params), std::invalid_argument);
  params = WorkloadParams{};
  params.deadline_slack = {100, 10};
  CHECK_THROWS_AS(generate(params), std::invalid_argument);
}

TEST_CASE("jsonl round-trip is the identity") {
  WorkloadParams params;
  params.seed = 21;
  params.instruction_count = 120;
  const auto stream = generate(params);

  std::stringstream buf;
  write_jsonl(stream, buf);
  CHECK(parse_jsonl(buf) == stream);
}

TEST_CASE("parse errors carry the line number") {
  std::stringstream buf;
  buf << R"({"t":0,"op":"insert","id":0,"deadline":10,"wcet":2,"crit":0,"prio":0})" << '\n'
      << R"({"t":1,"op":"kill","id":0})" << '\n'
      << "this is not json\n";
  try {
    parse_jsonl(buf);
    FAIL("expected WorkloadFormatError");
  } catch (const WorkloadFormatError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("schema violations name the offending field") {
  std::stringstream buf;
  buf << R"({"t":0,"op":"insert","id":0,"deadline":10,"wcet":2,"crit":0,"prio":5000})" << '\n';
  try {
    parse_jsonl(buf);
    FAIL("expected WorkloadFormatError");
  } catch (const WorkloadFormatError& e) {
    CHECK(std::string(e.what()).find("prio") != std::string::npos);
  }

  std::stringstream buf2;
  buf2 << R"({"t":5,"op":"kill","id":0})" << '\n'
       << R"({"t":1,"op":"kill","id":1})" << '\n';
  try {
    parse_jsonl(buf2);
    FAIL("expected WorkloadFormatError");
  } catch (const WorkloadFormatError& e) {
    CHECK(std::string(e.what()).find("'t'") != std::string::npos);
  }
}

TEST_CASE("unknown preset names are rejected") {
  CHECK_THROWS_AS(preset("totally_new_preset"), std::invalid_argument);
}

TEST_CASE("the uniform preset is the default parameter set") {
  const WorkloadParams p = preset("uniform");
  CHECK(p.instruction_count == 500);
  CHECK(p.insert_ratio == 0.5);
}

TEST_CASE("overload_stress produces rejections on the machine") {
  const SchedulerConfig cfg = make_config(16);
  WorkloadParams params = preset("overload_stress");
  params.seed = 3;
  params.live_limit = cfg.max_ids();
  RedScheduler m(cfg);
  const auto res = run_machine(m, generate(params), 1'000'000);
  CHECK(res.metrics.rejections >= 1);
}

TEST_CASE("reclaim_heavy produces successful reclaims on the machine") {
  const SchedulerConfig cfg = make_config(8);
  WorkloadParams params = preset("reclaim_heavy");
  params.seed = 3;
  params.live_limit = cfg.max_ids();
  RedScheduler m(cfg);
  const auto res = run_machine(m, generate(params), 1'000'000);
  CHECK(res.metrics.reclaims >= 1);
}

TEST_CASE("capacity_pressure drives the live set past the ready capacity") {
  const SchedulerConfig cfg = make_config(8);
  WorkloadParams params = preset("capacity_pressure");
  params.seed = 1;
  params.live_limit = cfg.max_ids();
  const auto stream = generate(params);

  RedScheduler m(cfg);
  std::size_t idx = 0;
  std::size_t max_live = 0;
  while (!(idx >= stream.size() && m.drained())) {
    REQUIRE(m.now() < 1'000'000);
    std::optional<Instruction> in;
    if (idx < stream.size() && !m.busy() && stream[idx].issue_cycle <= m.now())
      in = stream[idx++];
    m.step(in);
    max_live = std::max(max_live, m.live_ids().size());
  }
  CHECK(max_live > cfg.ready_capacity);
}
