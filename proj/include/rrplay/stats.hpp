#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rrplay/sim.hpp"

namespace rrplay {

// Per-transition statistics of final sample counts across seeds. stddev uses
// the n-1 divisor and is NaN when fewer than two seeds were run.
struct SampleCountStats {
  std::uint64_t seeds = 0;
  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<std::int64_t> min_count;
  std::vector<std::int64_t> max_count;
};

SampleCountStats aggregate(const SampleCountMatrix& matrix);

// Ids whose closed-form steady-state moments apply: the buffer was full for
// the transition's whole residence and the run did not end early. Empty when
// timesteps < 2 * capacity.
std::pair<std::uint64_t, std::uint64_t> steady_range(const SimConfig& config);

struct UerMoments {
  double mean = 0.0;
  double variance = 0.0;
};

// Closed-form moments of the with-replacement sample count of transition id
// up to timestep k, valid in steady state (id >= capacity): the number of
// draws while resident is S = B * min(k - id + 1, C), each hitting the
// transition independently with probability 1/C.
UerMoments uer_oracle(const SimConfig& config, std::uint64_t id,
                      std::uint64_t k);

// Variance of a fixed-priority with-replacement count over k - id + 1
// single-sample timesteps: (k - id + 1) * p * (1 - p).
double per_var_oracle(double p, std::uint64_t id, std::uint64_t k);

struct OracleValue {
  std::uint64_t id = 0;
  double mean = 0.0;
  double variance = 0.0;
  bool check_variance = false;
};

struct ComparePolicy {
  double mean_sigmas = 3.0;
  double var_sigmas = 3.0;
};

struct CompareRow {
  std::uint64_t id = 0;
  double mean = 0.0;
  double oracle_mean = 0.0;
  double mean_stderr = 0.0;
  bool mean_pass = false;
  double variance = 0.0;
  double oracle_variance = 0.0;
  double var_stderr = 0.0;
  bool var_checked = false;
  bool var_pass = false;
};

struct CompareReport {
  std::vector<CompareRow> rows;
  std::size_t mean_failures = 0;
  std::size_t var_failures = 0;
  bool all_pass = true;
};

// Per-id verdicts: the mean is tested against a mean_sigmas standard-error
// band, the variance (when requested) against a var_sigmas band using the
// normal approximation of the sample-variance estimator.
CompareReport compare(const SampleCountStats& stats,
                      const std::vector<OracleValue>& oracle,
                      const ComparePolicy& policy = {});

// Real formatting shared by every emitter: 9 significant digits.
std::string format_real(double value);

// CSV emission. Header row, comma separators, LF line endings. Oracle
// columns are NaN and the verdict "na" for ids without an oracle row.
void write_stats_csv(std::ostream& out, const SampleCountStats& stats,
                     const CompareReport* report);
void write_matrix_csv(std::ostream& out, const SampleCountMatrix& matrix,
                      std::uint64_t base_seed);

// JSON summary keyed by sampler name: totals plus oracle pass/fail counts.
std::string summary_json(const std::string& sampler, const SimConfig& config,
                         const SampleCountStats& stats,
                         const CompareReport* report);

}  // namespace rrplay
