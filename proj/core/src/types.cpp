#include "redsched/types.hpp"

namespace redsched {

const char* to_string(Criticality c) {
  switch (c) {
    case Criticality::non_rt: return "non_rt";
    case Criticality::soft_medium: return "soft_medium";
    case Criticality::soft_high: return "soft_high";
    case Criticality::hard_rt: return "hard_rt";
  }
  return "?";
}

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::accepted: return "Accepted";
    case EventKind::rejected: return "Rejected";
    case EventKind::reclaimed: return "Reclaimed";
    case EventKind::reclaim_redone: return "ReclaimRedone";
    case EventKind::killed: return "Killed";
    case EventKind::completed: return "Completed";
    case EventKind::deadline_miss: return "DeadlineMiss";
    case EventKind::expired_purged: return "ExpiredPurged";
    case EventKind::capacity_drop: return "CapacityDrop";
    case EventKind::duplicate_id_ignored: return "DuplicateIdIgnored";
    case EventKind::unknown_id_ignored: return "UnknownIdIgnored";
    case EventKind::hard_overload: return "HardOverload";
  }
  return "?";
}

std::string to_string(const EventRecord& e) {
  std::string s = to_string(e.kind);
  s += '(';
  s += std::to_string(e.id);
  if (e.kind == EventKind::deadline_miss || e.kind == EventKind::hard_overload) {
    s += ",crit";
    s += std::to_string(raw(e.criticality));
  }
  s += ')';
  return s;
}

std::vector<Violation> validate(const ProcessDescriptor& d, const SchedulerConfig& cfg) {
  std::vector<Violation> out;
  if (d.wcet < 1) {
    out.push_back({"wcet", "wcet must be >= 1"});
  }
  if (d.sub_priority >= kSubPriorityLevels) {
    out.push_back({"prio", "sub_priority must be < 1024"});
  }
  if (d.criticality != Criticality::non_rt && d.sub_priority != 0) {
    out.push_back({"prio", "sub_priority must be 0 at criticality > 0"});
  }
  if (d.id >= cfg.max_ids()) {
    out.push_back({"id", "id " + std::to_string(d.id) + " does not fit in " +
                             std::to_string(cfg.id_bits()) + " bits"});
  }
  return out;
}

}  // namespace redsched
