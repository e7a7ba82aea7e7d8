#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "redsched/types.hpp"

namespace redsched {

// Capacity-bounded ordered cell array, the functional model of the
// shift-register priority queue. Position 0 is the head (extreme element
// under the configured order). A new element settles at the first cell
// whose occupant orders strictly after it; everything from that cell
// shifts one toward the tail, and on a full queue the tail falls off.
//
// MIN vs MAX direction lives entirely in the Before comparator: Before(a,b)
// true means a belongs closer to the head than b.
template <typename T, typename Before, typename IdOf>
class ShiftQueue {
 public:
  explicit ShiftQueue(std::size_t capacity, Before before = {}, IdOf id_of = {})
      : capacity_(capacity), before_(before), id_of_(id_of) {
    cells_.reserve(capacity_);
  }

  struct InsertResult {
    std::size_t position = 0;
    std::optional<T> displaced;
  };

  InsertResult insert(T value) {
    const ProcessId new_id = id_of_(value);
    if (find(new_id) != nullptr) throw DuplicateIdError(new_id);
    std::size_t pos = 0;
    while (pos < cells_.size() && !before_(value, cells_[pos])) ++pos;
    cells_.insert(cells_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(value));
    InsertResult res{pos, std::nullopt};
    if (cells_.size() > capacity_) {
      res.displaced = std::move(cells_.back());
      cells_.pop_back();
    }
    return res;
  }

  std::optional<T> remove_by_id(ProcessId id) {
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      if (id_of_(cells_[i]) == id) {
        T out = std::move(cells_[i]);
        cells_.erase(cells_.begin() + static_cast<std::ptrdiff_t>(i));
        return out;
      }
    }
    return std::nullopt;
  }

  const T* head() const { return cells_.empty() ? nullptr : &cells_.front(); }

  const T* find(ProcessId id) const {
    for (const T& c : cells_)
      if (id_of_(c) == id) return &c;
    return nullptr;
  }
  T* find(ProcessId id) {
    return const_cast<T*>(static_cast<const ShiftQueue*>(this)->find(id));
  }

  std::size_t size() const { return cells_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return cells_.empty(); }
  bool full() const { return cells_.size() >= capacity_; }

  // Mutable cell access for the register logic layered on top. Callers must
  // not touch fields the ordering key depends on.
  std::span<T> cells() { return cells_; }
  std::span<const T> cells() const { return cells_; }

  std::vector<T> snapshot() const { return cells_; }

  bool is_sorted() const {
    for (std::size_t i = 0; i + 1 < cells_.size(); ++i)
      if (before_(cells_[i + 1], cells_[i])) return false;
    return true;
  }

 private:
  std::vector<T> cells_;
  std::size_t capacity_;
  Before before_;
  IdOf id_of_;
};

struct DescriptorId {
  ProcessId operator()(const ProcessDescriptor& d) const { return d.id; }
};

struct EdfBefore {
  bool operator()(const ProcessDescriptor& a, const ProcessDescriptor& b) const {
    return edf_before(a, b);
  }
};

struct RejectBefore {
  bool operator()(const ProcessDescriptor& a, const ProcessDescriptor& b) const {
    return reject_before(a, b);
  }
};

}  // namespace redsched
