#pragma once

#include <array>
#include <cstdint>

#include "redsched/cycle.hpp"

namespace redsched {

// Aggregated run statistics. Conservation: every accepted id terminates in
// exactly one of completed / killed / expired / capacity_drops.
struct RunMetrics {
  std::uint64_t total_cycles = 0;
  std::uint64_t busy_cycles = 0;
  std::uint64_t utilized_cycles = 0;  // cycles with a valid process_to_run
  std::array<std::uint64_t, 4> misses_by_criticality{};
  std::uint64_t accepted = 0;
  std::uint64_t rejections = 0;
  std::uint64_t reclaims = 0;
  std::uint64_t reclaim_redos = 0;
  std::uint64_t capacity_drops = 0;
  std::uint64_t hard_overloads = 0;
  std::uint64_t completed = 0;
  std::uint64_t killed = 0;
  std::uint64_t expired = 0;

  double utilization() const {
    return total_cycles == 0 ? 0.0
                             : static_cast<double>(utilized_cycles) /
                                   static_cast<double>(total_cycles);
  }

  bool conservation_holds() const {
    return completed + killed + expired + capacity_drops == accepted;
  }

  std::uint64_t total_misses() const {
    std::uint64_t n = 0;
    for (auto m : misses_by_criticality) n += m;
    return n;
  }

  void absorb(const CycleOutput& out) {
    ++total_cycles;
    if (out.busy) ++busy_cycles;
    if (out.process_to_run) ++utilized_cycles;
    for (const EventRecord& e : out.events) {
      switch (e.kind) {
        case EventKind::accepted: ++accepted; break;
        case EventKind::rejected: ++rejections; break;
        case EventKind::reclaimed: ++reclaims; break;
        case EventKind::reclaim_redone: ++reclaim_redos; break;
        case EventKind::killed: ++killed; break;
        case EventKind::completed: ++completed; break;
        case EventKind::deadline_miss: ++misses_by_criticality[raw(e.criticality)]; break;
        case EventKind::expired_purged: ++expired; break;
        case EventKind::capacity_drop: ++capacity_drops; break;
        case EventKind::hard_overload: ++hard_overloads; break;
        case EventKind::duplicate_id_ignored:
        case EventKind::unknown_id_ignored:
          break;
      }
    }
  }
};

}  // namespace redsched
