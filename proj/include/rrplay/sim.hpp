#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rrplay {

enum class Sampler { kWr, kWor, kStratified, kRrc, kRrm, kPerWr };
enum class PriorityScheme { kUniform, kModular };

std::string sampler_name(Sampler sampler);
Sampler sampler_from_name(std::string_view name);
std::string scheme_name(PriorityScheme scheme);
PriorityScheme scheme_from_name(std::string_view name);

// One replay simulation: at each timestep a transition is stored (with a
// priority from the configured scheme) and, once the buffer holds at least
// replay_start transitions, a minibatch is drawn and per-transition sample
// counts are recorded.
struct SimConfig {
  std::uint64_t timesteps = 100;
  std::size_t capacity = 20;      // C
  std::size_t replay_start = 10;  // R
  std::size_t batch = 4;          // B
  Sampler sampler = Sampler::kWr;
  PriorityScheme scheme = PriorityScheme::kUniform;
  std::uint64_t priority_modulus = 25;  // modular scheme: p_t = (t % m) + a
  double priority_offset = 5.0;
  double priority_decay = 1.0;  // gamma in (0, 1], applied per sampled appearance
  std::uint64_t seeds = 1000;
  std::uint64_t base_seed = 12345;

  // Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

// Named configurations used throughout: fig3 (100 steps, C=20, R=10, B=4,
// m=25, a=5), fig5 (fig3 with B=8), fig6 (1000/200/100/4, m=250, a=50),
// fig7 (fig6 with B=8). All use decay 0.8 and 1000 seeds; the sampler is
// chosen separately.
SimConfig preset_config(std::string_view name);
const std::vector<std::string>& preset_names();

// Final sample counts, one row per seed, one column per transition id.
struct SampleCountMatrix {
  std::uint64_t seeds = 0;
  std::uint64_t ids = 0;
  std::vector<std::int64_t> counts;  // row-major

  std::int64_t at(std::uint64_t seed_row, std::uint64_t id) const {
    return counts[seed_row * ids + id];
  }
};

// Runs one simulation; deterministic given (config, seed).
std::vector<std::int64_t> run_sim(const SimConfig& config, std::uint64_t seed);

// Rows for base_seed + 0 .. base_seed + seeds - 1.
SampleCountMatrix run_ensemble(const SimConfig& config);

}  // namespace rrplay
