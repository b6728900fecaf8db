#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rrplay/bench.hpp"
#include "rrplay/config.hpp"
#include "rrplay/sim.hpp"
#include "rrplay/stats.hpp"
#include "rrplay/verify.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

// Exit codes are a stable contract: 0 pass, 1 verification failure,
// 2 usage/config error, 3 IO error.
constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct SimulateOptions {
  std::string config_path;
  std::string preset;
  std::string sampler;
  std::uint64_t seeds = 0;
  bool raw = false;
  std::string out_dir;
};

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw rrplay::IoError("cannot open '" + path.string() + "' for writing");
  }
  out << body;
  out.flush();
  if (!out) {
    throw rrplay::IoError("failed writing '" + path.string() + "'");
  }
}

std::string digest_hex(std::uint64_t digest) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(digest));
  return buf;
}

int cmd_simulate(const SimulateOptions& options) {
  rrplay::SimConfig config;
  if (!options.preset.empty()) {
    rrplay::apply_config_key(config, "preset", options.preset);
  }
  if (!options.config_path.empty()) {
    config = rrplay::parse_config_file(options.config_path, config);
  }
  if (!options.sampler.empty()) {
    config.sampler = rrplay::sampler_from_name(options.sampler);
  }
  if (options.seeds > 0) {
    config.seeds = options.seeds;
  }
  config.validate();

  const std::filesystem::path out_dir(options.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw rrplay::IoError("cannot create output directory '" +
                          out_dir.string() + "': " + ec.message());
  }

  const auto start = std::chrono::steady_clock::now();
  const rrplay::SampleCountMatrix matrix = rrplay::run_ensemble(config);
  const rrplay::SampleCountStats stats = rrplay::aggregate(matrix);

  // Closed-form oracle columns apply to the uniform-marginal samplers in
  // steady state; the variance formula is exact only for plain
  // with-replacement draws.
  rrplay::CompareReport report;
  bool have_report = false;
  const bool uniform_marginal = config.sampler == rrplay::Sampler::kWr ||
                                config.sampler == rrplay::Sampler::kWor ||
                                config.sampler == rrplay::Sampler::kRrc;
  const auto [steady_lo, steady_hi] = rrplay::steady_range(config);
  if (uniform_marginal && config.seeds >= 2 && steady_lo <= steady_hi) {
    std::vector<rrplay::OracleValue> oracle;
    for (std::uint64_t id = steady_lo; id <= steady_hi; ++id) {
      const rrplay::UerMoments m =
          rrplay::uer_oracle(config, id, id + config.capacity - 1);
      oracle.push_back(
          {id, m.mean, m.variance, config.sampler == rrplay::Sampler::kWr});
    }
    report = rrplay::compare(stats, oracle);
    have_report = true;
  }

  std::ostringstream stats_csv;
  rrplay::write_stats_csv(stats_csv, stats, have_report ? &report : nullptr);
  write_file(out_dir / "stats.csv", stats_csv.str());
  std::vector<std::string> outputs = {"stats.csv"};

  if (options.raw) {
    std::ostringstream matrix_csv;
    rrplay::write_matrix_csv(matrix_csv, matrix, config.base_seed);
    write_file(out_dir / "matrix.csv", matrix_csv.str());
    outputs.push_back("matrix.csv");
  }

  write_file(out_dir / "summary.json",
             rrplay::summary_json(rrplay::sampler_name(config.sampler), config,
                                  stats, have_report ? &report : nullptr));
  outputs.push_back("summary.json");

  const double duration =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  outputs.push_back("manifest.json");
  nlohmann::ordered_json manifest;
  manifest["config_digest"] = digest_hex(rrplay::config_digest(config));
  manifest["tool_version"] = kVersion;
  manifest["duration_seconds"] = duration;
  manifest["outputs"] = outputs;
  {
    nlohmann::ordered_json resolved;
    std::istringstream lines(rrplay::canonical_config(config));
    std::string line;
    while (std::getline(lines, line)) {
      const auto eq = line.find('=');
      resolved[line.substr(0, eq)] = line.substr(eq + 1);
    }
    manifest["config"] = resolved;
  }
  write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");

  std::cout << "wrote";
  for (const std::string& name : outputs) {
    std::cout << ' ' << (out_dir / name).string();
  }
  std::cout << '\n';
  return kExitOk;
}

int cmd_verify(const std::string& suite, std::uint64_t seeds) {
  const bool pass = rrplay::verify::run_suite(suite, seeds, std::cout);
  return pass ? kExitOk : kExitVerifyFail;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) {
      comma = text.size();
    }
    const std::string item = text.substr(pos, comma - pos);
    pos = comma + 1;
    if (item.empty()) {
      continue;
    }
    std::size_t consumed = 0;
    double value = 0.0;
    try {
      value = std::stod(item, &consumed);
    } catch (const std::exception&) {
      throw rrplay::ConfigError("bench: bad size '" + item + "'");
    }
    if (consumed != item.size() || !(value >= 1.0) ||
        value != std::floor(value)) {
      throw rrplay::ConfigError("bench: bad size '" + item + "'");
    }
    sizes.push_back(static_cast<std::size_t>(value));
    if (comma == text.size()) {
      break;
    }
  }
  return sizes;
}

int cmd_bench(const std::string& sizes_text, const std::string& sampler,
              std::size_t batch, double seconds) {
  rrplay::BenchConfig config;
  config.sizes = parse_sizes(sizes_text);
  config.sampler = rrplay::sampler_from_name(sampler);
  config.batch = batch;
  config.seconds_per_size = seconds;
  const rrplay::BenchReport report = rrplay::run_bench(config);
  std::cout << rrplay::bench_json(config, report);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Replay-buffer sampling simulations, verification suites, and "
               "sampler benchmarks"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  SimulateOptions sim_options;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Run a multi-seed replay simulation and "
                                     "write sample-count statistics");
  simulate->add_option("--config", sim_options.config_path,
                       "key=value config file");
  simulate->add_option("--preset", sim_options.preset,
                       "named preset: fig3|fig5|fig6|fig7");
  simulate->add_option("--sampler", sim_options.sampler,
                       "wr|wor|stratified|rrc|rrm|per_wr");
  simulate->add_option("--seeds", sim_options.seeds, "number of seeds");
  simulate->add_flag("--raw", sim_options.raw,
                     "also write the per-seed count matrix");
  simulate->add_option("--out", sim_options.out_dir, "output directory")
      ->required();

  std::string verify_suite;
  std::uint64_t verify_seeds = 0;
  CLI::App* verify =
      app.add_subcommand("verify", "Run a named verification suite");
  std::string suite_help = "one of:";
  for (const std::string& name : rrplay::verify::suite_names()) {
    suite_help += " " + name;
  }
  verify->add_option("suite", verify_suite, suite_help)->required();
  verify->add_option("--seeds", verify_seeds,
                     "override the suite's default seed count");

  std::string bench_sizes = "1000,10000,100000,1000000";
  std::string bench_sampler = "rrc";
  std::size_t bench_batch = 32;
  double bench_seconds = 1.0;
  CLI::App* bench =
      app.add_subcommand("bench", "Measure sampler throughput and latency");
  bench->add_option("--sizes", bench_sizes,
                    "comma-separated buffer sizes (1e6 style accepted)");
  bench->add_option("--sampler", bench_sampler,
                    "wr|wor|stratified|rrc|rrm|per_wr");
  bench->add_option("--batch", bench_batch, "minibatch size");
  bench->add_option("--secs", bench_seconds, "seconds per size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) {
      return cmd_simulate(sim_options);
    }
    if (verify->parsed()) {
      return cmd_verify(verify_suite, verify_seeds);
    }
    if (bench->parsed()) {
      return cmd_bench(bench_sizes, bench_sampler, bench_batch, bench_seconds);
    }
  } catch (const rrplay::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const rrplay::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
