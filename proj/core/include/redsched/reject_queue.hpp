#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "redsched/shift_queue.hpp"
#include "redsched/types.hpp"

namespace redsched {

// MAX queue of temporarily rejected processes. The head is the best reclaim
// candidate: highest criticality, then latest deadline, then highest
// sub-priority. Hard-RT processes are never rejected and never enter.
class RejectQueue {
 public:
  explicit RejectQueue(std::uint32_t capacity) : q_(capacity) {}

  struct InsertResult {
    // Overflow discards the worst element permanently (CapacityDrop).
    std::optional<ProcessDescriptor> dropped;
  };

  InsertResult insert(const ProcessDescriptor& d) {
    if (d.criticality == Criticality::hard_rt) throw HardRtRejectedError(d.id);
    auto ins = q_.insert(d);
    InsertResult res;
    if (ins.displaced) res.dropped = std::move(*ins.displaced);
    return res;
  }

  const ProcessDescriptor* peek_reclaim() const { return q_.head(); }

  std::optional<ProcessDescriptor> remove(ProcessId id) { return q_.remove_by_id(id); }

  // Removes every element whose deadline has passed (deadline <= now);
  // sentinel-deadline non-RT elements never expire. Returned in queue order.
  std::vector<ProcessDescriptor> purge_expired(Cycle now) {
    std::vector<ProcessDescriptor> expired;
    for (const ProcessDescriptor& d : q_.cells())
      if (d.deadline != kDeadlineSentinel && d.deadline <= now) expired.push_back(d);
    for (const ProcessDescriptor& d : expired) q_.remove_by_id(d.id);
    return expired;
  }

  std::size_t size() const { return q_.size(); }
  bool empty() const { return q_.empty(); }
  bool full() const { return q_.full(); }
  bool contains(ProcessId id) const { return q_.find(id) != nullptr; }

  std::span<const ProcessDescriptor> cells() const { return q_.cells(); }
  std::vector<ProcessDescriptor> snapshot() const { return q_.snapshot(); }
  bool is_sorted() const { return q_.is_sorted(); }

 private:
  ShiftQueue<ProcessDescriptor, RejectBefore, DescriptorId> q_;
};

}  // namespace redsched
