#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "redsched/cycle.hpp"
#include "redsched/metrics.hpp"

namespace redsched {

// Trace CSV: header "cycle,process_to_run,busy,phase,events"; one row per
// cycle; events are semicolon-joined Kind(id) entries.
void write_trace_csv(std::ostream& out, std::span<const CycleOutput> trace);

std::string events_cell(const std::vector<EventRecord>& events);

std::string metrics_to_json(const RunMetrics& m);

std::string describe(const CycleOutput& out);

}  // namespace redsched
