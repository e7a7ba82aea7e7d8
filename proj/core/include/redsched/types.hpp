#pragma once

#include <bit>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace redsched {

using Cycle = std::uint64_t;
using ProcessId = std::uint32_t;

// Non-RT processes have no deadline; they carry the maximum representable
// value so they always sort last under EDF order and never trip the
// overload predicate.
inline constexpr Cycle kDeadlineSentinel = std::numeric_limits<Cycle>::max();

inline constexpr std::uint16_t kSubPriorityLevels = 1024;

// Two-bit criticality encoding: 3 is hard real-time, 0 is non-RT or
// low-priority soft RT. Total order 3 > 2 > 1 > 0.
enum class Criticality : std::uint8_t {
  non_rt = 0,
  soft_medium = 1,
  soft_high = 2,
  hard_rt = 3,
};

inline constexpr std::uint8_t raw(Criticality c) {
  return static_cast<std::uint8_t>(c);
}

const char* to_string(Criticality c);

struct ProcessDescriptor {
  ProcessId id = 0;
  Cycle deadline = kDeadlineSentinel;  // absolute cycle count
  std::uint32_t wcet = 1;              // worst-case execution time, cycles
  Criticality criticality = Criticality::non_rt;
  std::uint16_t sub_priority = 0;      // meaningful only at criticality 0

  bool operator==(const ProcessDescriptor&) const = default;
};

// Ready-queue MIN ordering: earliest deadline first. Strict, so that equal
// deadlines fall through to FIFO placement (a new process stops at the
// first cell with a strictly larger deadline).
inline bool edf_before(const ProcessDescriptor& a, const ProcessDescriptor& b) {
  return a.deadline < b.deadline;
}

// Reject-queue MAX ordering: highest criticality, then latest deadline,
// then highest sub-priority; lower id breaks the final tie, which makes
// the order strict and total.
inline bool reject_before(const ProcessDescriptor& a, const ProcessDescriptor& b) {
  if (a.criticality != b.criticality) return a.criticality > b.criticality;
  if (a.deadline != b.deadline) return a.deadline > b.deadline;
  if (a.sub_priority != b.sub_priority) return a.sub_priority > b.sub_priority;
  return a.id < b.id;
}

struct InsertProcess {
  ProcessDescriptor desc;
  bool operator==(const InsertProcess&) const = default;
};

struct KillProcess {
  ProcessId id = 0;
  bool operator==(const KillProcess&) const = default;
};

struct Instruction {
  Cycle issue_cycle = 0;
  std::variant<InsertProcess, KillProcess> op{InsertProcess{}};

  bool is_insert() const { return std::holds_alternative<InsertProcess>(op); }
  const ProcessDescriptor& desc() const { return std::get<InsertProcess>(op).desc; }
  ProcessId kill_id() const { return std::get<KillProcess>(op).id; }

  static Instruction insert(Cycle at, ProcessDescriptor d) {
    return Instruction{at, InsertProcess{d}};
  }
  static Instruction kill(Cycle at, ProcessId id) {
    return Instruction{at, KillProcess{id}};
  }

  bool operator==(const Instruction&) const = default;
};

struct SchedulerConfig {
  std::uint32_t ready_capacity = 16;
  std::uint32_t reject_capacity = 16;
  Cycle deadline_sentinel = kDeadlineSentinel;
  // Verify queue restoration after every failed reclaim (cheap; disable for
  // throughput benchmarks).
  bool self_check = true;

  // Smallest id width covering every cell of both queues.
  std::uint32_t id_bits() const {
    std::uint32_t cells = ready_capacity + reject_capacity;
    return cells <= 1 ? 1 : std::bit_width(cells - 1);
  }
  std::uint32_t max_ids() const { return 1u << id_bits(); }
};

inline SchedulerConfig make_config(std::uint32_t ready_capacity,
                                   std::uint32_t reject_capacity = 0) {
  SchedulerConfig cfg;
  cfg.ready_capacity = ready_capacity;
  cfg.reject_capacity = reject_capacity == 0 ? ready_capacity : reject_capacity;
  return cfg;
}

struct Violation {
  std::string field;
  std::string message;
  bool operator==(const Violation&) const = default;
};

// Reports every invariant violation of a descriptor; never throws.
std::vector<Violation> validate(const ProcessDescriptor& d, const SchedulerConfig& cfg);

enum class EventKind : std::uint8_t {
  accepted,
  rejected,
  reclaimed,
  reclaim_redone,
  killed,
  completed,
  deadline_miss,
  expired_purged,
  capacity_drop,
  duplicate_id_ignored,
  unknown_id_ignored,
  hard_overload,
};

const char* to_string(EventKind k);

struct EventRecord {
  Cycle cycle = 0;
  EventKind kind = EventKind::accepted;
  ProcessId id = 0;
  // Meaningful for deadline_miss and hard_overload only.
  Criticality criticality = Criticality::non_rt;

  bool operator==(const EventRecord&) const = default;
};

std::string to_string(const EventRecord& e);

class SchedulerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DuplicateIdError : public SchedulerError {
 public:
  explicit DuplicateIdError(ProcessId id)
      : SchedulerError("duplicate process id " + std::to_string(id)), id_(id) {}
  ProcessId id() const { return id_; }

 private:
  ProcessId id_;
};

class HardRtRejectedError : public SchedulerError {
 public:
  explicit HardRtRejectedError(ProcessId id)
      : SchedulerError("hard-RT process " + std::to_string(id) +
                       " offered to the reject queue") {}
};

class InstructionWhileBusyError : public SchedulerError {
 public:
  InstructionWhileBusyError() : SchedulerError("instruction supplied while busy") {}
};

class CycleLimitError : public SchedulerError {
 public:
  explicit CycleLimitError(Cycle limit)
      : SchedulerError("cycle limit " + std::to_string(limit) + " exceeded") {}
};

class WorkloadFormatError : public SchedulerError {
 public:
  using SchedulerError::SchedulerError;
};

}  // namespace redsched
