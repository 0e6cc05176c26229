#include "asep/rate_tree.hpp"

#include <stdexcept>

namespace asep {

RateTree::RateTree(std::size_t leaves) : leaves_(leaves) {
  while (capacity_ < leaves_) capacity_ <<= 1;
  nodes_.assign(2 * capacity_, 0.0);
}

void RateTree::set(std::size_t i, double rate) {
  std::size_t node = capacity_ + i;
  nodes_[node] = rate;
  for (node >>= 1; node >= 1; node >>= 1) nodes_[node] = nodes_[2 * node] + nodes_[2 * node + 1];
}

std::size_t RateTree::select(double target) const {
  if (!(total() > 0.0)) throw std::logic_error("RateTree::select on an empty tree");
  std::size_t node = 1;
  while (node < capacity_) {
    const std::size_t left = 2 * node;
    // Rounding can leave target >= left + right; never descend into a zero subtree.
    if (target < nodes_[left] || nodes_[left + 1] <= 0.0) {
      node = left;
    } else {
      target -= nodes_[left];
      node = left + 1;
    }
  }
  return node - capacity_;
}

}  // namespace asep
