#include "rrplay/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include <json.hpp>

#include "rrplay/count_ledger.hpp"
#include "rrplay/epoch_shuffler.hpp"
#include "rrplay/masked_priority_store.hpp"
#include "rrplay/ring_buffer.hpp"
#include "rrplay/rng.hpp"
#include "rrplay/rrm_sampler.hpp"
#include "rrplay/sum_tree.hpp"
#include "rrplay/uniform_samplers.hpp"

namespace rrplay {
namespace {

using Clock = std::chrono::steady_clock;

double percentile(std::vector<double>& sorted_us, double q) {
  if (sorted_us.empty()) {
    return 0.0;
  }
  const double pos = q * static_cast<double>(sorted_us.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted_us.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted_us[lo] * (1.0 - frac) + sorted_us[hi] * frac;
}

BenchSizeResult bench_one_size(std::size_t n, const BenchConfig& config) {
  RingBuffer<std::uint64_t> buffer(n);
  Rng fill_rng(config.seed, 3);
  std::unique_ptr<EpochShuffler> shuffler;
  std::unique_ptr<SumTree> tree;
  std::unique_ptr<MaskedPriorityStore> store;
  std::unique_ptr<CountLedger> ledger;
  switch (config.sampler) {
    case Sampler::kRrc:
      shuffler = std::make_unique<EpochShuffler>(n);
      break;
    case Sampler::kRrm:
      store = std::make_unique<MaskedPriorityStore>(n);
      ledger = std::make_unique<CountLedger>(n);
      break;
    case Sampler::kStratified:
    case Sampler::kPerWr:
      tree = std::make_unique<SumTree>(n);
      break;
    default:
      break;
  }
  for (std::uint64_t t = 0; t < n; ++t) {
    const double p = 0.5 + 1.5 * fill_rng.next_double();
    buffer.insert(t, p);
    const std::size_t slot = static_cast<std::size_t>(t);
    if (store) {
      store->set_priority(slot, p);
    } else if (tree) {
      tree->set(slot, p);
    }
  }

  Rng rng(config.seed, 1);
  std::vector<std::size_t> indices;
  const auto draw = [&] {
    switch (config.sampler) {
      case Sampler::kWr:
        indices = sample_wr(buffer, config.batch, rng);
        break;
      case Sampler::kWor:
        indices = sample_wor(buffer, config.batch, rng);
        break;
      case Sampler::kRrc:
        indices = sample_rrc(buffer, config.batch, *shuffler, rng);
        break;
      case Sampler::kStratified:
        indices = sample_stratified(*tree, config.batch, rng);
        break;
      case Sampler::kPerWr:
        indices.clear();
        for (std::size_t i = 0; i < config.batch; ++i) {
          indices.push_back(
              tree->sample_prefix(rng.next_double_below(tree->total())));
        }
        break;
      case Sampler::kRrm:
        indices = sample_rrm(*store, *ledger, config.batch, rng);
        break;
    }
  };

  for (int i = 0; i < 3; ++i) {
    draw();  // warmup
  }

  constexpr std::uint64_t kMaxMinibatches = 2'000'000;
  std::vector<double> latencies_us;
  latencies_us.reserve(1 << 16);
  const auto bench_start = Clock::now();
  double elapsed = 0.0;
  std::uint64_t minibatches = 0;
  while (elapsed < config.seconds_per_size && minibatches < kMaxMinibatches) {
    const auto t0 = Clock::now();
    draw();
    const auto t1 = Clock::now();
    latencies_us.push_back(
        std::chrono::duration<double, std::micro>(t1 - t0).count());
    ++minibatches;
    elapsed = std::chrono::duration<double>(t1 - bench_start).count();
  }

  BenchSizeResult result;
  result.size = n;
  result.minibatches = minibatches;
  result.elapsed_seconds = elapsed;
  result.draws_per_second =
      static_cast<double>(minibatches * config.batch) / elapsed;
  double sum = 0.0;
  for (double v : latencies_us) {
    sum += v;
  }
  result.mean_us = sum / static_cast<double>(latencies_us.size());
  std::sort(latencies_us.begin(), latencies_us.end());
  result.p50_us = percentile(latencies_us, 0.50);
  result.p90_us = percentile(latencies_us, 0.90);
  result.p99_us = percentile(latencies_us, 0.99);
  return result;
}

}  // namespace

BenchReport run_bench(const BenchConfig& config) {
  if (config.sizes.empty()) {
    throw std::invalid_argument("bench: at least one size required");
  }
  if (config.batch == 0) {
    throw std::invalid_argument("bench: batch must be positive");
  }
  for (std::size_t n : config.sizes) {
    if (n < config.batch) {
      throw std::invalid_argument("bench: size " + std::to_string(n) +
                                  " is smaller than batch " +
                                  std::to_string(config.batch));
    }
  }
  if (!(config.seconds_per_size > 0.0)) {
    throw std::invalid_argument("bench: seconds must be positive");
  }

  BenchReport report;
  for (std::size_t n : config.sizes) {
    report.results.push_back(bench_one_size(n, config));
  }

  if (report.results.size() >= 2) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double m = static_cast<double>(report.results.size());
    for (const BenchSizeResult& r : report.results) {
      const double x = std::log(static_cast<double>(r.size));
      const double y = std::log(r.mean_us);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    report.loglog_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  } else {
    report.loglog_slope = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

std::string bench_json(const BenchConfig& config, const BenchReport& report) {
  nlohmann::ordered_json root;
  root["sampler"] = sampler_name(config.sampler);
  root["batch"] = config.batch;
  root["seconds_per_size"] = config.seconds_per_size;
  root["results"] = nlohmann::ordered_json::array();
  for (const BenchSizeResult& r : report.results) {
    nlohmann::ordered_json entry;
    entry["size"] = r.size;
    entry["minibatches"] = r.minibatches;
    entry["elapsed_seconds"] = r.elapsed_seconds;
    entry["draws_per_second"] = r.draws_per_second;
    entry["latency_us"] = {{"mean", r.mean_us},
                           {"p50", r.p50_us},
                           {"p90", r.p90_us},
                           {"p99", r.p99_us}};
    root["results"].push_back(entry);
  }
  root["loglog_slope"] = report.loglog_slope;
  return root.dump(2) + "\n";
}

}  // namespace rrplay
