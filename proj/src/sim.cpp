#include "rrplay/sim.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>

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

// Derived draw streams per simulation seed. Slot shuffling and prefix
// queries never share a stream, so switching sampler families does not
// shift the other family's draws.
constexpr std::uint64_t kShuffleStream = 1;
constexpr std::uint64_t kPrefixStream = 2;

// Full rebuild of the priority trees after this many priority writes keeps
// the internal sums honest on long runs.
constexpr std::uint64_t kRebuildInterval = 10'000;

bool uses_priorities(Sampler sampler) {
  return sampler == Sampler::kStratified || sampler == Sampler::kRrm ||
         sampler == Sampler::kPerWr;
}

double scheme_priority(const SimConfig& config, std::uint64_t t) {
  if (config.scheme == PriorityScheme::kUniform) {
    return 1.0;
  }
  return static_cast<double>(t % config.priority_modulus) +
         config.priority_offset;
}

}  // namespace

std::string sampler_name(Sampler sampler) {
  switch (sampler) {
    case Sampler::kWr:
      return "wr";
    case Sampler::kWor:
      return "wor";
    case Sampler::kStratified:
      return "stratified";
    case Sampler::kRrc:
      return "rrc";
    case Sampler::kRrm:
      return "rrm";
    case Sampler::kPerWr:
      return "per_wr";
  }
  throw std::invalid_argument("sampler_name: unknown sampler");
}

Sampler sampler_from_name(std::string_view name) {
  if (name == "wr") return Sampler::kWr;
  if (name == "wor") return Sampler::kWor;
  if (name == "stratified") return Sampler::kStratified;
  if (name == "rrc") return Sampler::kRrc;
  if (name == "rrm") return Sampler::kRrm;
  if (name == "per_wr") return Sampler::kPerWr;
  throw std::invalid_argument("unknown sampler '" + std::string(name) +
                              "' (expected wr|wor|stratified|rrc|rrm|per_wr)");
}

std::string scheme_name(PriorityScheme scheme) {
  return scheme == PriorityScheme::kUniform ? "uniform" : "modular";
}

PriorityScheme scheme_from_name(std::string_view name) {
  if (name == "uniform") return PriorityScheme::kUniform;
  if (name == "modular") return PriorityScheme::kModular;
  throw std::invalid_argument("unknown priority scheme '" + std::string(name) +
                              "' (expected uniform|modular)");
}

void SimConfig::validate() const {
  if (timesteps == 0) {
    throw std::invalid_argument("config: timesteps must be positive");
  }
  if (capacity == 0) {
    throw std::invalid_argument("config: capacity must be positive");
  }
  if (batch == 0) {
    throw std::invalid_argument("config: batch must be positive");
  }
  if (batch > replay_start) {
    throw std::invalid_argument("config: batch must be <= replay_start");
  }
  if (replay_start > capacity) {
    throw std::invalid_argument("config: replay_start must be <= capacity");
  }
  if (capacity > timesteps) {
    throw std::invalid_argument("config: capacity must be <= timesteps");
  }
  if (!(priority_decay > 0.0) || priority_decay > 1.0) {
    throw std::invalid_argument("config: priority_decay must be in (0, 1]");
  }
  if (scheme == PriorityScheme::kModular) {
    if (priority_modulus == 0) {
      throw std::invalid_argument("config: priority_modulus must be positive");
    }
    if (priority_offset < 0.0) {
      throw std::invalid_argument("config: priority_offset must be >= 0");
    }
  }
  if (seeds == 0) {
    throw std::invalid_argument("config: seeds must be positive");
  }
}

SimConfig preset_config(std::string_view name) {
  SimConfig config;
  config.scheme = PriorityScheme::kModular;
  config.priority_decay = 0.8;
  config.seeds = 1000;
  if (name == "fig3") {
    config.timesteps = 100;
    config.capacity = 20;
    config.replay_start = 10;
    config.batch = 4;
    config.priority_modulus = 25;
    config.priority_offset = 5.0;
  } else if (name == "fig5") {
    config = preset_config("fig3");
    config.batch = 8;
  } else if (name == "fig6") {
    config.timesteps = 1000;
    config.capacity = 200;
    config.replay_start = 100;
    config.batch = 4;
    config.priority_modulus = 250;
    config.priority_offset = 50.0;
  } else if (name == "fig7") {
    config = preset_config("fig6");
    config.batch = 8;
  } else {
    throw std::invalid_argument("unknown preset '" + std::string(name) +
                                "' (expected fig3|fig5|fig6|fig7)");
  }
  return config;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"fig3", "fig5", "fig6",
                                                 "fig7"};
  return names;
}

std::vector<std::int64_t> run_sim(const SimConfig& config, std::uint64_t seed) {
  config.validate();

  RingBuffer<std::uint64_t> buffer(config.capacity);
  Rng shuffle_rng(seed, kShuffleStream);
  Rng prefix_rng(seed, kPrefixStream);

  std::unique_ptr<EpochShuffler> shuffler;
  std::unique_ptr<SumTree> tree;  // stratified / per_wr
  std::unique_ptr<MaskedPriorityStore> store;
  std::unique_ptr<CountLedger> ledger;
  if (config.sampler == Sampler::kRrc) {
    shuffler = std::make_unique<EpochShuffler>(config.capacity);
  } else if (config.sampler == Sampler::kRrm) {
    store = std::make_unique<MaskedPriorityStore>(config.capacity);
    ledger = std::make_unique<CountLedger>(config.capacity);
  } else if (uses_priorities(config.sampler)) {
    tree = std::make_unique<SumTree>(config.capacity);
  }

  std::vector<std::int64_t> counts(config.timesteps, 0);
  std::uint64_t priority_writes = 0;
  std::vector<std::size_t> indices;

  for (std::uint64_t t = 0; t < config.timesteps; ++t) {
    const double priority = scheme_priority(config, t);
    const auto evicted = buffer.insert(t, priority);
    const std::size_t slot = static_cast<std::size_t>(t % config.capacity);
    if (config.sampler == Sampler::kRrm) {
      if (evicted.has_value()) {
        on_evict(*ledger, *store, slot);
      }
      store->set_priority(slot, priority);
      ++priority_writes;
    } else if (tree) {
      tree->set(slot, priority);
      ++priority_writes;
    }

    if (buffer.size() < config.replay_start) {
      continue;
    }

    switch (config.sampler) {
      case Sampler::kWr:
        indices = sample_wr(buffer, config.batch, shuffle_rng);
        break;
      case Sampler::kWor:
        indices = sample_wor(buffer, config.batch, shuffle_rng);
        break;
      case Sampler::kRrc:
        indices = sample_rrc(buffer, config.batch, *shuffler, shuffle_rng);
        break;
      case Sampler::kStratified:
        indices = sample_stratified(*tree, config.batch, prefix_rng);
        break;
      case Sampler::kPerWr: {
        indices.clear();
        for (std::size_t i = 0; i < config.batch; ++i) {
          const double u = prefix_rng.next_double_below(tree->total());
          indices.push_back(tree->sample_prefix(u));
        }
        break;
      }
      case Sampler::kRrm:
        indices = sample_rrm(*store, *ledger, config.batch, prefix_rng);
        break;
    }

    for (std::size_t idx : indices) {
      counts[buffer.id_at(idx)] += 1;
    }

    // Priority decay is an experiment-level scheme: every appearance in the
    // minibatch decays that transition's live priority once.
    if (config.priority_decay < 1.0 && uses_priorities(config.sampler)) {
      for (std::size_t idx : indices) {
        if (config.sampler == Sampler::kRrm) {
          store->set_priority(idx, store->base().leaf(idx) * config.priority_decay);
        } else {
          tree->set(idx, tree->leaf(idx) * config.priority_decay);
        }
        ++priority_writes;
      }
    }

    if (priority_writes >= kRebuildInterval) {
      if (store) {
        store->rebuild();
      }
      if (tree) {
        tree->rebuild();
      }
      priority_writes = 0;
    }
  }
  return counts;
}

SampleCountMatrix run_ensemble(const SimConfig& config) {
  config.validate();
  SampleCountMatrix matrix;
  matrix.seeds = config.seeds;
  matrix.ids = config.timesteps;
  matrix.counts.resize(config.seeds * config.timesteps);
  for (std::uint64_t s = 0; s < config.seeds; ++s) {
    const std::vector<std::int64_t> row = run_sim(config, config.base_seed + s);
    std::copy(row.begin(), row.end(),
              matrix.counts.begin() + static_cast<std::ptrdiff_t>(s * matrix.ids));
  }
  return matrix;
}

}  // namespace rrplay
