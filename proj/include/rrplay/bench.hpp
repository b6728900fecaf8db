#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rrplay/sim.hpp"

namespace rrplay {

struct BenchConfig {
  std::vector<std::size_t> sizes;
  Sampler sampler = Sampler::kRrc;
  std::size_t batch = 32;
  double seconds_per_size = 1.0;
  std::uint64_t seed = 1234;
};

struct BenchSizeResult {
  std::size_t size = 0;
  std::uint64_t minibatches = 0;
  double elapsed_seconds = 0.0;
  double draws_per_second = 0.0;  // transitions drawn, i.e. minibatches * batch
  double mean_us = 0.0;
  double p50_us = 0.0;
  double p90_us = 0.0;
  double p99_us = 0.0;
};

struct BenchReport {
  std::vector<BenchSizeResult> results;
  // Slope of log(mean latency) against log(buffer size); near 0 for
  // constant-cost samplers, near 1 when the per-minibatch cost is linear in
  // the buffer size. Reported, never asserted.
  double loglog_slope = 0.0;
};

// Fills a buffer of each size, then times minibatch draws for roughly
// seconds_per_size per size. Throws std::invalid_argument when any size is
// smaller than the batch.
BenchReport run_bench(const BenchConfig& config);

std::string bench_json(const BenchConfig& config, const BenchReport& report);

}  // namespace rrplay
