#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rrplay::verify {

// Exact expectations for the B=R=1, C=2 two-step example, obtained by
// walking every permutation choice with its exact path probability while
// driving the real RR-C consumption code.
struct RrcBiasEnumeration {
  double rrc_expected = 0.0;
  double uer_expected = 0.0;
};
RrcBiasEnumeration enumerate_rrc_bias_example();

// Band-style result shared by the ensemble checks: how many ids were tested,
// how many fell outside their band, and the worst standardized deviation.
struct BandCheck {
  std::size_t ids_checked = 0;
  std::size_t failures = 0;
  double worst_z = 0.0;
  std::uint64_t worst_id = 0;
  bool pass() const { return failures == 0; }
};

// fig3 RR-C ensemble vs the closed-form steady-state mean.
BandCheck check_rrc_unbiased(std::uint64_t seeds);

// fig3: empirical Var[RR-C] <= empirical Var[WR] per steady id, one-sided
// with a combined 3-SE allowance.
BandCheck check_rrc_variance(std::uint64_t seeds);

// B=1, R=2, C=3, p=[0.6, 0.4, 0]: Monte Carlo mean of the first transition's
// sample count vs the deterministic value 1 and the with-replacement value 1.2.
struct RrmBiasCheck {
  double mc_mean = 0.0;
  double mc_stderr = 0.0;
  double expected = 1.0;
  double per_mean = 1.2;
  bool pass = false;
};
RrmBiasCheck check_rrm_bias_example(std::uint64_t seeds);

// Fixed priorities [1, 0.5, 2], seven single-sample draws: final actual
// counts must be exactly [2, 1, 4] in every run, and the expected counts
// accrue in exact sevenths.
struct Table3Check {
  std::uint64_t seeds = 0;
  bool counts_ok = false;
  bool expected_ok = false;
  bool pass() const { return counts_ok && expected_ok; }
};
Table3Check check_rrm_table3(std::uint64_t seeds);

// Simplified setting (no insertions, B=1, fixed priorities): every per-step
// deviation must stay strictly inside (1-C, 1), and the across-seed sample
// variance of final counts must stay below C^2/4. Also counts how many draws
// landed on a slot that was oversampled at mask time, which can only happen
// through the 1e-8 mask tail.
struct SimplifiedRunCheck {
  std::size_t capacity = 0;
  std::uint64_t total_draws = 0;
  std::uint64_t oversampled_draws = 0;
  double min_deviation = 0.0;
  double max_deviation = 0.0;
  bool deviations_ok = false;
  double max_variance = 0.0;
  double variance_bound = 0.0;
  bool variance_ok = false;
};
SimplifiedRunCheck check_rrm_simplified(std::size_t capacity,
                                        std::uint64_t steps,
                                        std::uint64_t seeds);

// Prefix-sampling law on priorities [1, 0.5, 2] plus node consistency after
// a long stream of random priority rewrites.
struct SumTreeLawCheck {
  double worst_z = 0.0;
  bool frequencies_ok = false;
  double worst_rel_err = 0.0;
  bool consistency_ok = false;
  bool pass() const { return frequencies_ok && consistency_ok; }
};
SumTreeLawCheck check_sumtree_law(std::uint64_t draws, std::uint64_t updates);

// Uniform fixed priorities: every aligned window of C single-sample RR-M
// draws must be a permutation of the C slots.
struct ReducibilityCheck {
  std::uint64_t windows_checked = 0;
  bool pass = false;
};
ReducibilityCheck check_rrm_reducibility(std::size_t capacity,
                                         std::uint64_t epochs,
                                         std::uint64_t seeds);

const std::vector<std::string>& suite_names();

// Runs one named suite, printing observed-vs-expected lines to `out`.
// Returns whether it passed; throws std::invalid_argument for unknown names.
// seeds_override = 0 keeps each suite's default.
bool run_suite(const std::string& name, std::uint64_t seeds_override,
               std::ostream& out);

}  // namespace rrplay::verify
