#include "rrplay/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace rrplay {

SampleCountStats aggregate(const SampleCountMatrix& matrix) {
  if (matrix.seeds == 0 || matrix.ids == 0) {
    throw std::invalid_argument("aggregate: empty matrix");
  }
  SampleCountStats stats;
  stats.seeds = matrix.seeds;
  stats.mean.resize(matrix.ids);
  stats.stddev.resize(matrix.ids);
  stats.min_count.resize(matrix.ids);
  stats.max_count.resize(matrix.ids);

  // Counts are integers, so the sums are accumulated exactly; the result is
  // identical under any permutation of the seed rows.
  const double n = static_cast<double>(matrix.seeds);
  for (std::uint64_t id = 0; id < matrix.ids; ++id) {
    std::int64_t sum = 0;
    std::int64_t sumsq = 0;
    std::int64_t lo = std::numeric_limits<std::int64_t>::max();
    std::int64_t hi = std::numeric_limits<std::int64_t>::min();
    for (std::uint64_t s = 0; s < matrix.seeds; ++s) {
      const std::int64_t c = matrix.at(s, id);
      sum += c;
      sumsq += c * c;
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    const double mean = static_cast<double>(sum) / n;
    const double ssd =
        std::max(0.0, static_cast<double>(sumsq) -
                          static_cast<double>(sum) * static_cast<double>(sum) / n);
    stats.mean[id] = mean;
    stats.stddev[id] = matrix.seeds >= 2
                           ? std::sqrt(ssd / (n - 1.0))
                           : std::numeric_limits<double>::quiet_NaN();
    stats.min_count[id] = lo;
    stats.max_count[id] = hi;
  }
  return stats;
}

std::pair<std::uint64_t, std::uint64_t> steady_range(const SimConfig& config) {
  const std::uint64_t c = config.capacity;
  if (config.timesteps < 2 * c) {
    return {1, 0};  // empty
  }
  return {c, config.timesteps - c};
}

UerMoments uer_oracle(const SimConfig& config, std::uint64_t id,
                      std::uint64_t k) {
  if (id < config.capacity) {
    throw std::invalid_argument(
        "uer_oracle: only valid in steady state (id >= capacity)");
  }
  if (k < id) {
    throw std::invalid_argument("uer_oracle: k must be >= id");
  }
  const double c = static_cast<double>(config.capacity);
  const double draws = static_cast<double>(
      std::min<std::uint64_t>(k - id + 1, config.capacity));
  const double s = static_cast<double>(config.batch) * draws;
  return {s / c, s * (1.0 / c) * (1.0 - 1.0 / c)};
}

double per_var_oracle(double p, std::uint64_t id, std::uint64_t k) {
  if (p < 0.0 || p > 1.0) {
    throw std::invalid_argument("per_var_oracle: p must be in [0, 1]");
  }
  if (k < id) {
    throw std::invalid_argument("per_var_oracle: k must be >= id");
  }
  return static_cast<double>(k - id + 1) * p * (1.0 - p);
}

CompareReport compare(const SampleCountStats& stats,
                      const std::vector<OracleValue>& oracle,
                      const ComparePolicy& policy) {
  if (stats.seeds < 2) {
    throw std::invalid_argument("compare: need at least two seeds");
  }
  CompareReport report;
  report.rows.reserve(oracle.size());
  const double n = static_cast<double>(stats.seeds);
  for (const OracleValue& value : oracle) {
    if (value.id >= stats.mean.size()) {
      throw std::invalid_argument("compare: oracle id outside the stats range");
    }
    CompareRow row;
    row.id = value.id;
    row.mean = stats.mean[value.id];
    row.oracle_mean = value.mean;
    row.mean_stderr = stats.stddev[value.id] / std::sqrt(n);
    row.mean_pass = std::abs(row.mean - row.oracle_mean) <=
                    policy.mean_sigmas * row.mean_stderr;

    const double sd = stats.stddev[value.id];
    row.variance = sd * sd;
    row.oracle_variance = value.variance;
    row.var_stderr = row.variance * std::sqrt(2.0 / (n - 1.0));
    row.var_checked = value.check_variance;
    row.var_pass = !value.check_variance ||
                   std::abs(row.variance - row.oracle_variance) <=
                       policy.var_sigmas * row.var_stderr;

    if (!row.mean_pass) {
      ++report.mean_failures;
    }
    if (row.var_checked && !row.var_pass) {
      ++report.var_failures;
    }
    report.rows.push_back(row);
  }
  report.all_pass = report.mean_failures == 0 && report.var_failures == 0;
  return report;
}

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

void write_stats_csv(std::ostream& out, const SampleCountStats& stats,
                     const CompareReport* report) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out << "id,mean,std,min,max,oracle_mean,oracle_var,verdict\n";
  for (std::uint64_t id = 0; id < stats.mean.size(); ++id) {
    const CompareRow* row = nullptr;
    if (report != nullptr) {
      for (const CompareRow& r : report->rows) {
        if (r.id == id) {
          row = &r;
          break;
        }
      }
    }
    out << id << ',' << format_real(stats.mean[id]) << ','
        << format_real(stats.stddev[id]) << ',' << stats.min_count[id] << ','
        << stats.max_count[id] << ',';
    if (row != nullptr) {
      const bool pass = row->mean_pass && (!row->var_checked || row->var_pass);
      out << format_real(row->oracle_mean) << ','
          << format_real(row->var_checked ? row->oracle_variance : nan) << ','
          << (pass ? "pass" : "fail");
    } else {
      out << format_real(nan) << ',' << format_real(nan) << ",na";
    }
    out << '\n';
  }
}

void write_matrix_csv(std::ostream& out, const SampleCountMatrix& matrix,
                      std::uint64_t base_seed) {
  out << "seed";
  for (std::uint64_t id = 0; id < matrix.ids; ++id) {
    out << ',' << id;
  }
  out << '\n';
  for (std::uint64_t s = 0; s < matrix.seeds; ++s) {
    out << (base_seed + s);
    for (std::uint64_t id = 0; id < matrix.ids; ++id) {
      out << ',' << matrix.at(s, id);
    }
    out << '\n';
  }
}

std::string summary_json(const std::string& sampler, const SimConfig& config,
                         const SampleCountStats& stats,
                         const CompareReport* report) {
  std::int64_t total = 0;
  std::int64_t max_count = 0;
  for (std::uint64_t id = 0; id < stats.mean.size(); ++id) {
    total += static_cast<std::int64_t>(
        std::llround(stats.mean[id] * static_cast<double>(stats.seeds)));
    max_count = std::max(max_count, stats.max_count[id]);
  }

  nlohmann::ordered_json body;
  body["seeds"] = stats.seeds;
  body["ids"] = stats.mean.size();
  body["total_count_per_seed"] =
      static_cast<double>(total) / static_cast<double>(stats.seeds);
  body["max_count"] = max_count;
  body["priority_scheme"] = scheme_name(config.scheme);
  if (report != nullptr) {
    nlohmann::ordered_json checks;
    checks["ids_checked"] = report->rows.size();
    checks["mean_pass"] = report->rows.size() - report->mean_failures;
    checks["mean_fail"] = report->mean_failures;
    std::size_t var_checked = 0;
    for (const CompareRow& row : report->rows) {
      if (row.var_checked) {
        ++var_checked;
      }
    }
    checks["var_checked"] = var_checked;
    checks["var_pass"] = var_checked - report->var_failures;
    checks["var_fail"] = report->var_failures;
    body["oracle_checks"] = checks;
  }

  nlohmann::ordered_json root;
  root[sampler] = body;
  return root.dump(2) + "\n";
}

}  // namespace rrplay
