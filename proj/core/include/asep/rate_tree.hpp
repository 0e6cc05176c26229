#pragma once

#include <cstddef>
#include <vector>

namespace asep {

/// Complete binary sum tree over non-negative leaf rates.
///
/// Updating a leaf recomputes its ancestors from their children, so the
/// root stays an exact sum of the current leaves (no accumulated drift from
/// add/subtract updates). Both update and selection are O(log size).
class RateTree {
 public:
  explicit RateTree(std::size_t leaves = 0);

  std::size_t size() const { return leaves_; }
  double total() const { return nodes_.empty() ? 0.0 : nodes_[1]; }
  double leaf(std::size_t i) const { return nodes_[capacity_ + i]; }

  void set(std::size_t i, double rate);

  /// Leaf index i with prefix(i) <= target < prefix(i + 1), for target in [0, total()).
  /// Zero-rate leaves are never returned.
  std::size_t select(double target) const;

 private:
  std::size_t leaves_ = 0;
  std::size_t capacity_ = 1;
  std::vector<double> nodes_;
};

}  // namespace asep
