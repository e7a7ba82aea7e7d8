#include "redsched/trace_io.hpp"

#include <ostream>
#include <sstream>

#include "json.hpp"

namespace redsched {

std::string events_cell(const std::vector<EventRecord>& events) {
  std::string cell;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (i) cell += ';';
    cell += to_string(events[i]);
  }
  return cell;
}

void write_trace_csv(std::ostream& out, std::span<const CycleOutput> trace) {
  out << "cycle,process_to_run,busy,phase,events\n";
  for (const CycleOutput& c : trace) {
    out << c.cycle << ',';
    if (c.process_to_run) out << *c.process_to_run;
    out << ',' << (c.busy ? 1 : 0) << ',' << to_string(c.phase) << ','
        << events_cell(c.events) << '\n';
  }
}

std::string metrics_to_json(const RunMetrics& m) {
  nlohmann::json j;
  j["total_cycles"] = m.total_cycles;
  j["busy_cycles"] = m.busy_cycles;
  j["utilized_cycles"] = m.utilized_cycles;
  j["utilization"] = m.utilization();
  j["misses_by_criticality"] = m.misses_by_criticality;
  j["accepted"] = m.accepted;
  j["rejections"] = m.rejections;
  j["reclaims"] = m.reclaims;
  j["reclaim_redos"] = m.reclaim_redos;
  j["capacity_drops"] = m.capacity_drops;
  j["hard_overloads"] = m.hard_overloads;
  j["completed"] = m.completed;
  j["killed"] = m.killed;
  j["expired"] = m.expired;
  return j.dump(2);
}

std::string describe(const CycleOutput& out) {
  std::ostringstream os;
  os << "cycle " << out.cycle << " run=";
  if (out.process_to_run)
    os << *out.process_to_run;
  else
    os << '-';
  os << " busy=" << (out.busy ? 1 : 0) << " phase=" << to_string(out.phase)
     << " events=[" << events_cell(out.events) << ']';
  return os.str();
}

}  // namespace redsched
