#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rrplay/count_ledger.hpp"
#include "rrplay/masked_priority_store.hpp"
#include "rrplay/rng.hpp"

namespace rrplay {

// Random reshuffling by masking: one minibatch draw.
//
//   1. mask every slot whose actual count strictly exceeds its expected
//      count (equality stays unmasked),
//   2. draw batch distinct slots by masked priority: batch prefix queries,
//      dedup, temporarily mask what was drawn, redraw the shortfall,
//   3. drop the temporary masks, then credit the counts: +1 actual per drawn
//      slot, +probability*batch expected for every slot, with probabilities
//      taken from the unmasked base tree.
//
// Requires at least `batch` slots with positive base priority. The redraw
// loop normally finishes in a handful of passes; a pass can fail to add a
// new slot only through the 1e-8 mask tail, so after 100 passes we give up
// with a diagnostic.
inline std::vector<std::size_t> sample_rrm(MaskedPriorityStore& store,
                                           CountLedger& ledger,
                                           std::size_t batch, Rng& rng) {
  if (batch == 0) {
    throw std::invalid_argument("sample_rrm: batch must be positive");
  }
  if (store.capacity() != ledger.capacity()) {
    throw std::invalid_argument("sample_rrm: store/ledger capacity mismatch");
  }
  const std::size_t capacity = store.capacity();

  std::size_t weighted = 0;
  for (std::size_t i = 0; i < capacity; ++i) {
    if (store.base().leaf(i) > 0.0) {
      ++weighted;
    }
  }
  if (weighted < batch) {
    throw std::invalid_argument(
        "sample_rrm: fewer positively-weighted slots than batch");
  }

  std::vector<bool> oversampled(capacity);
  for (std::size_t i = 0; i < capacity; ++i) {
    oversampled[i] =
        static_cast<double>(ledger.actual[i]) > ledger.expected[i];
  }
  store.update_mask(oversampled);

  std::vector<bool> shadow = oversampled;
  std::vector<std::size_t> drawn;
  drawn.reserve(batch);
  constexpr int kMaxPasses = 100;
  for (int pass = 0; drawn.size() < batch; ++pass) {
    if (pass >= kMaxPasses) {
      store.update_mask(oversampled);
      throw std::runtime_error("sample_rrm: resampling pass limit exceeded");
    }
    const std::size_t need = batch - drawn.size();
    for (std::size_t j = 0; j < need; ++j) {
      const double u = rng.next_double_below(store.masked().total());
      const std::size_t idx = store.masked().sample_prefix(u);
      if (std::find(drawn.begin(), drawn.end(), idx) == drawn.end()) {
        drawn.push_back(idx);
        shadow[idx] = true;
      }
    }
    if (drawn.size() < batch) {
      store.update_mask(shadow);
    }
  }
  store.update_mask(oversampled);  // remove the temporary masks

  for (std::size_t idx : drawn) {
    ledger.actual[idx] += 1;
  }
  const std::vector<double> probs = store.base().probabilities();
  for (std::size_t i = 0; i < capacity; ++i) {
    ledger.expected[i] += probs[i] * static_cast<double>(batch);
  }
  return drawn;
}

// Eviction bookkeeping: zero the overwritten slot's counts, then scale the
// remaining expected counts so their total matches the actual total again.
// Nothing is scaled when the expected total is zero after zeroing. The slot's
// mask bit is cleared since the incoming transition is not oversampled.
inline void on_evict(CountLedger& ledger, MaskedPriorityStore& store,
                     std::size_t evicted_slot) {
  if (evicted_slot >= ledger.capacity()) {
    throw std::out_of_range("on_evict: slot out of range");
  }
  ledger.actual[evicted_slot] = 0;
  ledger.expected[evicted_slot] = 0.0;

  const double actual_sum = static_cast<double>(ledger.actual_total());
  const double expected_sum = ledger.expected_total();
  if (expected_sum > 0.0) {
    const double factor = actual_sum / expected_sum;
    for (double& e : ledger.expected) {
      e *= factor;
    }
  }

  if (store.mask()[evicted_slot]) {
    std::vector<bool> bits = store.mask();
    bits[evicted_slot] = false;
    store.update_mask(bits);
  }
}

}  // namespace rrplay
