#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bootcopula/bootstrap.hpp"
#include "bootcopula/rng.hpp"

namespace bootcopula {

/// Exact (Clopper-Pearson) binomial interval for `successes` out of `trials`.
Interval clopper_pearson(std::uint64_t successes, std::uint64_t trials, double level = 0.95);

/// Binomial(trials, p) variate as a sum of Bernoulli draws; consumes
/// `trials` stream positions.
std::uint64_t binomial_draw(std::uint64_t trials, double p, RngStream& rng);

/// A simulation study of interval coverage. Each parameter is estimated in a
/// fresh binomial experiment, its Clopper-Pearson interval is turned into a
/// beta marginal, and the combined interval is checked against the truth.
struct CoverageScenario {
  std::vector<double> true_params;
  std::vector<std::uint64_t> experiment_sizes;
  Combiner combiner = Combiner::builtin(BuiltinCombiner::product, 2);
  CorrelationMatrix sigma = CorrelationMatrix::identity(2);
  BootstrapConfig config;  ///< per-trial bootstrap settings
  std::size_t trials = 1000;
  double input_level = 0.95;  ///< level of the simulated experiments' intervals

  double true_combined() const { return combiner(true_params); }

  /// Throws InvalidArgument on inconsistent sizes, parameters outside
  /// (0, 1), zero experiment sizes, or zero trials.
  void validate() const;
};

struct CoverageResult {
  double coverage;
  double mean_width;
  double mc_std_err;  ///< sqrt(coverage (1 - coverage) / trials used)
  std::size_t trials_used;
  std::size_t excluded_trials;  ///< trials whose marginal fit failed
};

/// Fraction of trials whose combined interval contains true_combined().
///
/// Trial t derives its seed from (master_seed, t), so trials can run in any
/// order on any number of `threads` with identical results. Trials whose
/// fits fail are excluded and counted; more than 1% exclusions throws.
CoverageResult run_coverage(const CoverageScenario& scenario, std::uint64_t master_seed,
                            unsigned threads = 1);

}  // namespace bootcopula
