#pragma once

#include <stdexcept>
#include <vector>

#include "rrplay/sum_tree.hpp"

namespace rrplay {

// Dual sum trees: one holding the original priorities, one holding the
// effective (masked) priorities. A masked slot keeps a 1e-8 fraction of its
// base priority rather than dropping to zero, so sampling still works even
// if every slot ends up masked. Invariant at all times:
//   masked leaf i == base leaf i * (kMaskFactor if mask[i] else 1).
class MaskedPriorityStore {
 public:
  static constexpr double kMaskFactor = 1e-8;

  explicit MaskedPriorityStore(std::size_t capacity)
      : base_(capacity), masked_(capacity), mask_(capacity, false) {}

  std::size_t capacity() const { return base_.capacity(); }
  const SumTree& base() const { return base_; }
  const SumTree& masked() const { return masked_; }
  const std::vector<bool>& mask() const { return mask_; }

  // Rewrites one priority in both trees, honoring the current mask bit.
  void set_priority(std::size_t slot, double priority) {
    base_.set(slot, priority);
    masked_.set(slot, mask_[slot] ? priority * kMaskFactor : priority);
  }

  // Applies a new mask; only slots whose bit changed touch the masked tree.
  void update_mask(const std::vector<bool>& oversampled) {
    if (oversampled.size() != mask_.size()) {
      throw std::invalid_argument(
          "MaskedPriorityStore::update_mask: mask length mismatch");
    }
    for (std::size_t i = 0; i < mask_.size(); ++i) {
      if (mask_[i] != oversampled[i]) {
        mask_[i] = oversampled[i];
        masked_.set(i, mask_[i] ? base_.leaf(i) * kMaskFactor : base_.leaf(i));
      }
    }
  }

  void rebuild() {
    base_.rebuild();
    masked_.rebuild();
  }

 private:
  SumTree base_;
  SumTree masked_;
  std::vector<bool> mask_;
};

}  // namespace rrplay
