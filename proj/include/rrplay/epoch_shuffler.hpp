#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rrplay/rng.hpp"

namespace rrplay {

// Consumable permutation of the slot indices [0, capacity). Starts empty;
// the first next() call shuffles a fresh epoch (unbiased Fisher-Yates), and
// later calls refill lazily whenever the current epoch runs out. Between two
// refills every index is emitted exactly once.
class EpochShuffler {
 public:
  explicit EpochShuffler(std::size_t capacity)
      : permutation_(capacity), cursor_(capacity) {
    if (capacity == 0) {
      throw std::invalid_argument("EpochShuffler: capacity must be positive");
    }
    std::iota(permutation_.begin(), permutation_.end(), std::size_t{0});
  }

  std::size_t capacity() const { return permutation_.size(); }
  std::size_t remaining() const { return permutation_.size() - cursor_; }
  std::uint64_t epochs_started() const { return epochs_started_; }

  // Consumes one index, starting a new epoch first if the current one is
  // exhausted.
  std::size_t next(Rng& rng) {
    if (cursor_ == permutation_.size()) {
      refill(rng);
    }
    return permutation_[cursor_++];
  }

  // Installs a specific epoch. Used by tests and the enumeration oracles;
  // normal operation refills internally.
  void load(std::vector<std::size_t> permutation) {
    if (!is_permutation_of_range(permutation)) {
      throw std::invalid_argument(
          "EpochShuffler::load: not a permutation of [0, capacity)");
    }
    permutation_ = std::move(permutation);
    cursor_ = 0;
    ++epochs_started_;
  }

 private:
  void refill(Rng& rng) {
    // Fisher-Yates, uniform over all capacity! orderings.
    for (std::size_t i = permutation_.size() - 1; i > 0; --i) {
      const std::size_t j =
          static_cast<std::size_t>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
      std::swap(permutation_[i], permutation_[j]);
    }
    cursor_ = 0;
    ++epochs_started_;
  }

  bool is_permutation_of_range(const std::vector<std::size_t>& p) const {
    if (p.size() != permutation_.size()) {
      return false;
    }
    std::vector<bool> seen(p.size(), false);
    for (std::size_t v : p) {
      if (v >= p.size() || seen[v]) {
        return false;
      }
      seen[v] = true;
    }
    return true;
  }

  std::vector<std::size_t> permutation_;
  std::size_t cursor_;
  std::uint64_t epochs_started_ = 0;
};

}  // namespace rrplay
