#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rrplay/rng.hpp"

namespace rrplay {

// Binary sum tree over non-negative leaf priorities. Leaves are padded to the
// next power of two; padding leaves stay exactly 0 and are unreachable from
// sample_prefix. Internal nodes are recomputed from their children on every
// update, so repeating an update sequence reproduces the node array
// bit-for-bit.
class SumTree {
 public:
  explicit SumTree(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) {
      throw std::invalid_argument("SumTree: capacity must be positive");
    }
    leaves_ = 1;
    while (leaves_ < capacity) {
      leaves_ *= 2;
    }
    nodes_.assign(2 * leaves_, 0.0);  // 1-based, nodes_[1] is the root
  }

  std::size_t capacity() const { return capacity_; }
  std::size_t leaf_count() const { return leaves_; }
  double total() const { return nodes_[1]; }

  double leaf(std::size_t slot) const {
    check_slot(slot);
    return nodes_[leaves_ + slot];
  }

  // O(log n): rewrites the leaf and the sums along its root path.
  void set(std::size_t slot, double priority) {
    check_slot(slot);
    if (priority < 0.0) {
      throw std::invalid_argument("SumTree::set: priority must be >= 0");
    }
    std::size_t node = leaves_ + slot;
    nodes_[node] = priority;
    ++nodes_written_;
    for (node /= 2; node >= 1; node /= 2) {
      nodes_[node] = nodes_[2 * node] + nodes_[2 * node + 1];
      ++nodes_written_;
    }
  }

  // Returns the leaf whose cumulative-sum interval contains u. Ties on a
  // boundary resolve to the right child, so a zero-priority leaf is never
  // returned while u < total().
  std::size_t sample_prefix(double u) const {
    if (!(total() > 0.0)) {
      throw std::invalid_argument("SumTree::sample_prefix: total is zero");
    }
    if (!(u >= 0.0) || !(u < total())) {
      throw std::invalid_argument("SumTree::sample_prefix: u outside [0, total)");
    }
    std::size_t node = 1;
    while (node < leaves_) {
      const std::size_t left = 2 * node;
      if (u < nodes_[left]) {
        node = left;
      } else {
        u -= nodes_[left];
        node = left + 1;
      }
    }
    return node - leaves_;
  }

  // p_i / total over the capacity slots.
  std::vector<double> probabilities() const {
    const double sum = total();
    if (!(sum > 0.0)) {
      throw std::invalid_argument("SumTree::probabilities: total is zero");
    }
    std::vector<double> out(capacity_);
    for (std::size_t i = 0; i < capacity_; ++i) {
      out[i] = nodes_[leaves_ + i] / sum;
    }
    return out;
  }

  // Recomputes every internal node bottom-up, squashing accumulated drift.
  void rebuild() {
    for (std::size_t node = leaves_ - 1; node >= 1; --node) {
      nodes_[node] = nodes_[2 * node] + nodes_[2 * node + 1];
    }
  }

  // Number of node writes performed by set() so far; lets tests pin the
  // O(log n) update cost.
  std::uint64_t nodes_written() const { return nodes_written_; }

  const std::vector<double>& nodes() const { return nodes_; }

 private:
  void check_slot(std::size_t slot) const {
    if (slot >= capacity_) {
      throw std::out_of_range("SumTree: slot out of range");
    }
  }

  std::size_t capacity_;
  std::size_t leaves_ = 1;
  std::vector<double> nodes_;
  std::uint64_t nodes_written_ = 0;
};

// Stratified sampling: [0, total) is split into batch equal-width strata and
// one prefix query is drawn uniformly inside each. Duplicates across strata
// are kept.
inline std::vector<std::size_t> sample_stratified(const SumTree& tree,
                                                  std::size_t batch, Rng& rng) {
  if (batch == 0) {
    throw std::invalid_argument("sample_stratified: batch must be positive");
  }
  const double total = tree.total();
  if (!(total > 0.0)) {
    throw std::invalid_argument("sample_stratified: total is zero");
  }
  const double width = total / static_cast<double>(batch);
  std::vector<std::size_t> out;
  out.reserve(batch);
  for (std::size_t k = 0; k < batch; ++k) {
    double u = (static_cast<double>(k) + rng.next_double()) * width;
    if (u >= total) {
      u = std::nextafter(total, 0.0);
    }
    out.push_back(tree.sample_prefix(u));
  }
  return out;
}

}  // namespace rrplay
