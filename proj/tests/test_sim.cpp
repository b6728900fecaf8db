#include <doctest.h>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "rrplay/sim.hpp"

using rrplay::preset_config;
using rrplay::run_ensemble;
using rrplay::run_sim;
using rrplay::Sampler;
using rrplay::SimConfig;

namespace {

std::int64_t total(const std::vector<std::int64_t>& counts) {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("every sampler conserves the total draw count") {
  for (Sampler sampler :
       {Sampler::kWr, Sampler::kWor, Sampler::kStratified, Sampler::kRrc,
        Sampler::kRrm, Sampler::kPerWr}) {
    SimConfig config = preset_config("fig3");
    config.sampler = sampler;
    const auto counts = run_sim(config, 7);
    // Replay starts once the buffer holds 10 transitions, i.e. at t=9, so
    // 91 minibatches of 4 are drawn over 100 timesteps.
    CHECK(total(counts) == 4 * 91);
  }
}

TEST_CASE("a single-seed ensemble equals run_sim") {
  SimConfig config = preset_config("fig3");
  config.sampler = Sampler::kRrc;
  config.seeds = 1;
  const auto matrix = run_ensemble(config);
  const auto row = run_sim(config, config.base_seed);
  CHECK(matrix.seeds == 1);
  CHECK(matrix.counts == row);
}

TEST_CASE("ensembles are reproducible") {
  SimConfig config = preset_config("fig3");
  config.sampler = Sampler::kRrm;
  config.seeds = 25;
  const auto a = run_ensemble(config);
  const auto b = run_ensemble(config);
  CHECK(a.counts == b.counts);
}

TEST_CASE("boundary transitions are sampled less than steady-state ones") {
  SimConfig config = preset_config("fig3");
  config.sampler = Sampler::kWr;
  config.seeds = 200;
  const auto matrix = run_ensemble(config);
  double ramp = 0.0;
  double steady = 0.0;
  int ramp_n = 0;
  int steady_n = 0;
  for (std::uint64_t id = 0; id < matrix.ids; ++id) {
    double mean = 0.0;
    for (std::uint64_t s = 0; s < matrix.seeds; ++s) {
      mean += static_cast<double>(matrix.at(s, id));
    }
    mean /= static_cast<double>(matrix.seeds);
    if (id < 10 || id >= 95) {
      ramp += mean;
      ++ramp_n;
    } else if (id >= 20 && id <= 80) {
      steady += mean;
      ++steady_n;
    }
  }
  CHECK(ramp / ramp_n < steady / steady_n);
}

TEST_CASE("presets match their captions") {
  const SimConfig fig3 = preset_config("fig3");
  CHECK(fig3.timesteps == 100);
  CHECK(fig3.capacity == 20);
  CHECK(fig3.replay_start == 10);
  CHECK(fig3.batch == 4);
  CHECK(fig3.priority_modulus == 25);
  CHECK(fig3.priority_offset == 5.0);
  CHECK(fig3.priority_decay == 0.8);
  CHECK(fig3.seeds == 1000);

  CHECK(preset_config("fig5").batch == 8);

  const SimConfig fig6 = preset_config("fig6");
  CHECK(fig6.timesteps == 1000);
  CHECK(fig6.capacity == 200);
  CHECK(fig6.replay_start == 100);
  CHECK(fig6.batch == 4);
  CHECK(fig6.priority_modulus == 250);
  CHECK(fig6.priority_offset == 50.0);

  CHECK(preset_config("fig7").batch == 8);
  CHECK_THROWS_AS(preset_config("fig8"), std::invalid_argument);
}

TEST_CASE("invalid configs are rejected before any work") {
  SimConfig config = preset_config("fig3");
  config.batch = 11;  // > replay_start
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);

  config = preset_config("fig3");
  config.replay_start = 21;  // > capacity
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);

  config = preset_config("fig3");
  config.capacity = 101;  // > timesteps
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);

  config = preset_config("fig3");
  config.priority_decay = 0.0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config.priority_decay = 1.5;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);

  config = preset_config("fig3");
  config.seeds = 0;
  CHECK_THROWS_AS(run_ensemble(config), std::invalid_argument);
}

TEST_CASE("fig5 and fig6 run under every relevant sampler") {
  for (const char* name : {"fig5", "fig6"}) {
    for (Sampler sampler : {Sampler::kRrc, Sampler::kRrm}) {
      SimConfig config = preset_config(name);
      config.sampler = sampler;
      config.seeds = 2;
      const auto matrix = run_ensemble(config);
      const std::int64_t expect =
          static_cast<std::int64_t>(config.batch) *
          static_cast<std::int64_t>(config.timesteps - config.replay_start + 1);
      for (std::uint64_t s = 0; s < matrix.seeds; ++s) {
        std::int64_t sum = 0;
        for (std::uint64_t id = 0; id < matrix.ids; ++id) {
          sum += matrix.at(s, id);
        }
        CHECK(sum == expect);
      }
    }
  }
}

}  // TEST_SUITE
