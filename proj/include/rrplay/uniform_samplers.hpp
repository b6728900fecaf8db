#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rrplay/epoch_shuffler.hpp"
#include "rrplay/ring_buffer.hpp"
#include "rrplay/rng.hpp"

namespace rrplay {

// With-replacement sampling: batch independent uniform draws over the
// occupied slots. Duplicates allowed.
template <class Payload>
std::vector<std::size_t> sample_wr(const RingBuffer<Payload>& buffer,
                                   std::size_t batch, Rng& rng) {
  if (buffer.size() == 0) {
    throw std::invalid_argument("sample_wr: buffer is empty");
  }
  if (batch == 0) {
    throw std::invalid_argument("sample_wr: batch must be positive");
  }
  std::vector<std::size_t> out;
  out.reserve(batch);
  for (std::size_t i = 0; i < batch; ++i) {
    out.push_back(static_cast<std::size_t>(rng.next_below(buffer.size())));
  }
  return out;
}

// Within-minibatch without-replacement sampling: batch distinct occupied
// slots, uniform over all size-batch subsets, in random order.
template <class Payload>
std::vector<std::size_t> sample_wor(const RingBuffer<Payload>& buffer,
                                    std::size_t batch, Rng& rng) {
  const std::size_t len = buffer.size();
  if (batch == 0) {
    throw std::invalid_argument("sample_wor: batch must be positive");
  }
  if (batch > len) {
    throw std::invalid_argument("sample_wor: batch exceeds occupied slots");
  }
  std::vector<std::size_t> out;
  out.reserve(batch);
  if (batch * 2 <= len) {
    // Rejection: each accepted prefix of distinct draws is equally likely,
    // and with batch <= len/2 every retry succeeds with probability >= 1/2.
    while (out.size() < batch) {
      const std::size_t idx = static_cast<std::size_t>(rng.next_below(len));
      bool dup = false;
      for (std::size_t prev : out) {
        if (prev == idx) {
          dup = true;
          break;
        }
      }
      if (!dup) {
        out.push_back(idx);
      }
    }
  } else {
    // Partial Fisher-Yates over the whole occupied range.
    std::vector<std::size_t> pool(len);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < batch; ++i) {
      const std::size_t j =
          i + static_cast<std::size_t>(rng.next_below(len - i));
      std::swap(pool[i], pool[j]);
      out.push_back(pool[i]);
    }
  }
  return out;
}

// Random reshuffling over circular-buffer indices. Consumes the shuffler's
// permutation sequentially, skipping indices with no assigned transition,
// and refills mid-minibatch when an epoch runs out. A minibatch may
// therefore straddle an epoch boundary, in which case the same slot can
// appear twice; there is no dedup.
template <class Payload>
std::vector<std::size_t> sample_rrc(const RingBuffer<Payload>& buffer,
                                    std::size_t batch, EpochShuffler& shuffler,
                                    Rng& rng) {
  if (buffer.size() == 0) {
    throw std::invalid_argument("sample_rrc: buffer is empty");
  }
  if (batch == 0) {
    throw std::invalid_argument("sample_rrc: batch must be positive");
  }
  if (shuffler.capacity() != buffer.capacity()) {
    throw std::invalid_argument(
        "sample_rrc: shuffler capacity does not match buffer capacity");
  }
  std::vector<std::size_t> out;
  out.reserve(batch);
  while (out.size() < batch) {
    const std::size_t idx = shuffler.next(rng);
    if (buffer.occupied(idx)) {
      out.push_back(idx);
    }
  }
  return out;
}

}  // namespace rrplay
