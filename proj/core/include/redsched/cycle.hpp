#pragma once

#include <optional>
#include <vector>

#include "redsched/types.hpp"

namespace redsched {

enum class PhaseKind : std::uint8_t {
  idle,
  exec_instr,
  rejecting,
  reclaim_try,
  reclaim_redo,
};

const char* to_string(PhaseKind k);

// Per-cycle observable output of the coprocessor. process_to_run is the
// ready-queue head dispatched during the cycle; busy mirrors phase != idle.
struct CycleOutput {
  Cycle cycle = 0;
  std::optional<ProcessId> process_to_run;
  bool busy = false;
  PhaseKind phase = PhaseKind::idle;
  std::vector<EventRecord> events;

  bool operator==(const CycleOutput&) const = default;
};

}  // namespace redsched
