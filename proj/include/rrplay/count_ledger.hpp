#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace rrplay {

// Per-slot actual (integer) and expected (real) sample counts. Entries of
// unoccupied slots are 0; after every post-sample update and every eviction
// rescaling the two totals agree to within floating-point noise.
struct CountLedger {
  explicit CountLedger(std::size_t capacity)
      : actual(capacity, 0), expected(capacity, 0.0) {
    if (capacity == 0) {
      throw std::invalid_argument("CountLedger: capacity must be positive");
    }
  }

  std::size_t capacity() const { return actual.size(); }

  std::int64_t actual_total() const {
    return std::accumulate(actual.begin(), actual.end(), std::int64_t{0});
  }

  double expected_total() const {
    return std::accumulate(expected.begin(), expected.end(), 0.0);
  }

  std::vector<std::int64_t> actual;
  std::vector<double> expected;
};

// actual - expected for one slot. The caller is responsible for only asking
// about occupied slots; the ledger itself does not track occupancy.
inline double deviation(const CountLedger& ledger, std::size_t slot) {
  if (slot >= ledger.capacity()) {
    throw std::out_of_range("deviation: slot out of range");
  }
  return static_cast<double>(ledger.actual[slot]) - ledger.expected[slot];
}

}  // namespace rrplay
