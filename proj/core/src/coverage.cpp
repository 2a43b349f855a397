#include "bootcopula/coverage.hpp"

#include <cmath>
#include <sstream>

#include "bootcopula/error.hpp"
#include "bootcopula/parallel.hpp"

namespace bootcopula {
namespace {

constexpr double kMaxExcludedFraction = 0.01;

struct TrialOutcome {
  bool excluded = false;
  bool covered = false;
  double width = 0.0;
};

}  // namespace

Interval clopper_pearson(std::uint64_t successes, std::uint64_t trials, double level) {
  if (trials == 0 || successes > trials) throw InvalidArgument("invalid binomial counts");
  if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("level must lie in (0, 1)");
  const double tail = 0.5 * (1.0 - level);
  const double x = static_cast<double>(successes);
  const double n = static_cast<double>(trials);
  const double low = successes == 0 ? 0.0 : quantile(DistributionSpec::beta(x, n - x + 1.0), tail);
  const double upp =
      successes == trials ? 1.0 : quantile(DistributionSpec::beta(x + 1.0, n - x), 1.0 - tail);
  return {low, upp};
}

std::uint64_t binomial_draw(std::uint64_t trials, double p, RngStream& rng) {
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < trials; ++i) hits += rng.next_uniform() < p ? 1 : 0;
  return hits;
}

void CoverageScenario::validate() const {
  const std::size_t d = true_params.size();
  if (d == 0) throw InvalidArgument("scenario needs at least one parameter");
  if (experiment_sizes.size() != d) {
    throw InvalidArgument("experiment_sizes must have one entry per parameter");
  }
  for (double p : true_params) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("true parameters must lie in (0, 1)");
  }
  for (auto n : experiment_sizes) {
    if (n == 0) throw InvalidArgument("experiment sizes must be >= 1");
  }
  if (combiner.arity() != d) throw InvalidArgument("combiner arity does not match parameter count");
  if (sigma.dimension() != d) throw InvalidArgument("correlation dimension does not match parameter count");
  if (trials == 0) throw InvalidArgument("trials must be >= 1");
  if (!(input_level > 0.0 && input_level < 1.0)) throw InvalidArgument("input level must lie in (0, 1)");
  config.validate();
}

CoverageResult run_coverage(const CoverageScenario& scenario, std::uint64_t master_seed,
                            unsigned threads) {
  scenario.validate();
  const std::size_t d = scenario.true_params.size();
  const double truth = scenario.true_combined();
  const double tail = 0.5 * (1.0 - scenario.input_level);
  std::vector<TrialOutcome> outcomes(scenario.trials);

  parallel_chunks(scenario.trials, 1, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      const std::uint64_t trial_seed = derive_seed(master_seed, t);
      RngStream data_rng(trial_seed, 1, 0);
      std::vector<FittedDistribution> marginals;
      try {
        for (std::size_t j = 0; j < d; ++j) {
          const auto n = scenario.experiment_sizes[j];
          const auto x = binomial_draw(n, scenario.true_params[j], data_rng);
          const Interval ci = clopper_pearson(x, n, scenario.input_level);
          marginals.push_back(fit_from_quantiles(
              Family::beta, QuantileConstraint{ci.low, ci.upp, tail, 1.0 - tail}));
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::fit_failure && e.kind() != ErrorKind::domain &&
            e.kind() != ErrorKind::invalid_argument) {
          throw;
        }
        outcomes[t].excluded = true;
        continue;
      }
      BootstrapConfig config = scenario.config;
      config.seed = trial_seed;
      config.stream = 0;
      config.threads = 1;
      config.return_boot_values = false;
      const BootResult r = boot_comb(marginals, scenario.sigma, scenario.combiner, config);
      outcomes[t].covered = r.estimate.interval.contains(truth);
      outcomes[t].width = r.estimate.interval.width();
    }
  });

  std::size_t used = 0, covered = 0, excluded = 0;
  double width_sum = 0.0;
  for (const auto& o : outcomes) {
    if (o.excluded) {
      ++excluded;
      continue;
    }
    ++used;
    covered += o.covered ? 1 : 0;
    width_sum += o.width;
  }
  if (static_cast<double>(excluded) > kMaxExcludedFraction * static_cast<double>(scenario.trials)) {
    std::ostringstream msg;
    msg << excluded << " of " << scenario.trials << " trials excluded after fit failures (limit 1%)";
    throw FitError(msg.str(), 0.0);
  }
  if (used == 0) throw FitError("every coverage trial failed", 0.0);
  const double coverage = static_cast<double>(covered) / static_cast<double>(used);
  return {coverage, width_sum / static_cast<double>(used),
          std::sqrt(coverage * (1.0 - coverage) / static_cast<double>(used)), used, excluded};
}

}  // namespace bootcopula
