#pragma once

#include <cmath>
#include <cstddef>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pprwatch/graph_store.hpp"

namespace pprwatch {

// Entries whose magnitude falls below this are dropped.
inline constexpr double kSparseDropTolerance = 1e-15;

using SparseEntry = std::pair<NodeId, double>;

class SparseVector {
 public:
  using Map = std::unordered_map<NodeId, double>;

  double get(NodeId id) const {
    auto it = entries_.find(id);
    return it == entries_.end() ? 0.0 : it->second;
  }

  void add(NodeId id, double delta) {
    if (delta == 0.0) return;
    auto [it, inserted] = entries_.try_emplace(id, delta);
    if (!inserted) it->second += delta;
    if (std::abs(it->second) < kSparseDropTolerance) entries_.erase(it);
  }

  void set(NodeId id, double value) {
    if (std::abs(value) < kSparseDropTolerance) {
      entries_.erase(id);
    } else {
      entries_[id] = value;
    }
  }

  void erase(NodeId id) { entries_.erase(id); }
  void clear() { entries_.clear(); }

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  Map::const_iterator begin() const { return entries_.begin(); }
  Map::const_iterator end() const { return entries_.end(); }

  std::vector<SparseEntry> sorted_entries() const;
  double l1_norm() const;
  double sum() const;

 private:
  Map entries_;
};

}  // namespace pprwatch
