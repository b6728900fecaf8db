#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "rrplay/ring_buffer.hpp"
#include "rrplay/rng.hpp"
#include "rrplay/sim.hpp"
#include "rrplay/stats.hpp"
#include "rrplay/sum_tree.hpp"

using rrplay::aggregate;
using rrplay::compare;
using rrplay::OracleValue;
using rrplay::SampleCountMatrix;
using rrplay::SimConfig;

namespace {

SampleCountMatrix matrix_from(std::vector<std::vector<std::int64_t>> rows) {
  SampleCountMatrix matrix;
  matrix.seeds = rows.size();
  matrix.ids = rows[0].size();
  for (const auto& row : rows) {
    matrix.counts.insert(matrix.counts.end(), row.begin(), row.end());
  }
  return matrix;
}

}  // namespace

TEST_SUITE("stats") {

TEST_CASE("identical rows collapse to zero spread") {
  const auto stats = aggregate(matrix_from({{3, 5}, {3, 5}, {3, 5}}));
  for (std::size_t id = 0; id < 2; ++id) {
    CHECK(stats.stddev[id] == 0.0);
    CHECK(stats.min_count[id] == stats.max_count[id]);
    CHECK(stats.mean[id] == static_cast<double>(stats.min_count[id]));
  }
}

TEST_CASE("two-row aggregate by hand") {
  const auto stats = aggregate(matrix_from({{2}, {4}}));
  CHECK(stats.mean[0] == 3.0);
  CHECK(stats.stddev[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(stats.min_count[0] == 2);
  CHECK(stats.max_count[0] == 4);
}

TEST_CASE("a single seed leaves the stddev undefined") {
  const auto stats = aggregate(matrix_from({{7}}));
  CHECK(std::isnan(stats.stddev[0]));
  CHECK(stats.mean[0] == 7.0);
}

TEST_CASE("uer oracle closed forms") {
  SimConfig config;
  config.capacity = 20;
  config.batch = 4;
  const auto m = rrplay::uer_oracle(config, 30, 49);
  CHECK(m.mean == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(m.variance == doctest::Approx(3.8).epsilon(1e-12));

  const auto single = rrplay::uer_oracle(config, 25, 25);  // k == i
  CHECK(single.mean == doctest::Approx(4.0 / 20.0).epsilon(1e-12));

  SimConfig tiny;
  tiny.capacity = 2;
  tiny.batch = 1;
  // Both draws while resident are independent Bernoulli(1/2): enumerating
  // the four outcomes gives E = 1, Var = 1/2.
  const auto pair = rrplay::uer_oracle(tiny, 5, 6);
  CHECK(pair.mean == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pair.variance == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(rrplay::uer_oracle(config, 19, 30), std::invalid_argument);
  CHECK_THROWS_AS(rrplay::uer_oracle(config, 30, 29), std::invalid_argument);
}

TEST_CASE("per variance oracle") {
  CHECK(rrplay::per_var_oracle(0.0, 3, 10) == 0.0);
  CHECK(rrplay::per_var_oracle(1.0, 3, 10) == 0.0);
  CHECK(rrplay::per_var_oracle(0.6, 5, 6) == doctest::Approx(0.48).epsilon(1e-12));
  CHECK(rrplay::per_var_oracle(0.5, 1, 100) == doctest::Approx(25.0).epsilon(1e-12));
  CHECK_THROWS_AS(rrplay::per_var_oracle(1.5, 0, 1), std::invalid_argument);
}

TEST_CASE("per variance oracle matches prioritized with-replacement draws") {
  // Fixed buffer, single-sample prefix draws on priorities [0.6, 0.4]: the
  // count of slot 0 over 50 draws is Binomial(50, 0.6).
  rrplay::SumTree tree(2);
  tree.set(0, 0.6);
  tree.set(1, 0.4);
  const int seeds = 4000;
  const int draws = 50;
  double sum = 0.0;
  double sumsq = 0.0;
  for (int s = 0; s < seeds; ++s) {
    rrplay::Rng rng(5000 + s);
    int hits = 0;
    for (int d = 0; d < draws; ++d) {
      hits += tree.sample_prefix(rng.next_double_below(tree.total())) == 0;
    }
    sum += hits;
    sumsq += static_cast<double>(hits) * hits;
  }
  const double mean = sum / seeds;
  const double var = (sumsq - sum * mean) / (seeds - 1.0);
  const double oracle = rrplay::per_var_oracle(0.6, 0, draws - 1);
  const double band = 3.0 * oracle * std::sqrt(2.0 / (seeds - 1.0));
  CHECK(std::abs(var - oracle) <= band);
  CHECK(std::abs(mean - 0.6 * draws) <=
        3.0 * std::sqrt(var / static_cast<double>(seeds)));
}

TEST_CASE("steady range excludes both ramps") {
  const SimConfig fig3 = rrplay::preset_config("fig3");
  const auto [lo, hi] = rrplay::steady_range(fig3);
  CHECK(lo == 20);
  CHECK(hi == 80);

  SimConfig cramped = fig3;
  cramped.timesteps = 39;
  const auto [lo2, hi2] = rrplay::steady_range(cramped);
  CHECK(lo2 > hi2);  // empty
}

TEST_CASE("oracle self-test: with-replacement simulation matches the mean") {
  SimConfig config;
  config.timesteps = 30;
  config.capacity = 5;
  config.replay_start = 2;
  config.batch = 2;
  config.sampler = rrplay::Sampler::kWr;
  config.seeds = 100'000;
  config.base_seed = 99;
  const auto stats = aggregate(rrplay::run_ensemble(config));
  const auto [lo, hi] = rrplay::steady_range(config);
  std::vector<OracleValue> oracle;
  for (std::uint64_t id = lo; id <= hi; ++id) {
    const auto m = rrplay::uer_oracle(config, id, id + config.capacity - 1);
    oracle.push_back({id, m.mean, m.variance, true});
  }
  const auto report = compare(stats, oracle);
  CHECK(report.mean_failures == 0);
}

TEST_CASE("negative control: a sampler pinned to slot zero fails the mean") {
  // Degenerate "sampler": every minibatch is B copies of slot 0.
  SimConfig config = rrplay::preset_config("fig3");
  SampleCountMatrix matrix;
  matrix.seeds = 100;
  matrix.ids = config.timesteps;
  matrix.counts.assign(matrix.seeds * matrix.ids, 0);
  for (std::uint64_t s = 0; s < matrix.seeds; ++s) {
    rrplay::RingBuffer<std::uint64_t> buffer(config.capacity);
    for (std::uint64_t t = 0; t < config.timesteps; ++t) {
      buffer.insert(t, 1.0);
      if (buffer.size() < config.replay_start) {
        continue;
      }
      matrix.counts[s * matrix.ids + buffer.id_at(0)] +=
          static_cast<std::int64_t>(config.batch);
    }
  }
  const auto stats = aggregate(matrix);
  const auto [lo, hi] = rrplay::steady_range(config);
  std::vector<OracleValue> oracle;
  for (std::uint64_t id = lo; id <= hi; ++id) {
    oracle.push_back(
        {id, rrplay::uer_oracle(config, id, id + config.capacity - 1).mean,
         0.0, false});
  }
  const auto report = compare(stats, oracle);
  CHECK(report.mean_failures > oracle.size() / 2);
}

TEST_CASE("compare rejects misaligned id ranges") {
  const auto stats = aggregate(matrix_from({{1, 2}, {3, 4}}));
  CHECK_THROWS_AS(compare(stats, {{5, 1.0, 0.0, false}}),
                  std::invalid_argument);
}

TEST_CASE("aggregate is permutation-invariant over seed rows") {
  const auto a = aggregate(matrix_from({{1, 9}, {4, 6}, {2, 2}}));
  const auto b = aggregate(matrix_from({{2, 2}, {1, 9}, {4, 6}}));
  CHECK(a.mean == b.mean);
  CHECK(a.stddev == b.stddev);
  CHECK(a.min_count == b.min_count);
  CHECK(a.max_count == b.max_count);
}

}  // TEST_SUITE
