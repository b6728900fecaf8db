#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace rrplay {

// Deterministic 64-bit generator with derived sub-streams.
//
// std::mt19937_64 output is fully specified by the standard, so two Rng
// instances built from the same (seed, stream) pair produce the same draw
// sequence on every platform. The std:: distributions are *not* specified,
// so all uniform draws below are derived from raw engine output instead.
//
// Streams let one simulation seed own several independent draw sequences
// (e.g. one for shuffling, one for prefix queries) so that consuming from
// one never shifts another.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : engine_(mix(seed, stream)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer in [0, n). Unbiased via rejection.
  std::uint64_t next_below(std::uint64_t n) {
    if (n == 0) {
      throw std::invalid_argument("Rng::next_below: n must be positive");
    }
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) {
        return r % n;
      }
    }
  }

  // Uniform double in [0, 1), 53 random bits.
  double next_double() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform double in [0, high); high must be positive.
  double next_double_below(double high) {
    if (!(high > 0.0)) {
      throw std::invalid_argument("Rng::next_double_below: high must be positive");
    }
    double u = next_double() * high;
    if (u >= high) {  // guard against round-up at the top of the range
      u = std::nextafter(high, 0.0);
    }
    return u;
  }

 private:
  // splitmix64 finalizer over the (seed, stream) pair.
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace rrplay
