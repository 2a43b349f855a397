#pragma once

#include <string>
#include <vector>

#include "bootcopula/distributions.hpp"

namespace bootcopula {

/// A reported confidence interval read as two quantile constraints:
/// F(q_low) = alpha_low and F(q_upp) = alpha_upp.
struct QuantileConstraint {
  double q_low;
  double q_upp;
  double alpha_low = 0.025;
  double alpha_upp = 0.975;

  /// Throws InvalidArgument on q_low >= q_upp, non-finite values or bad alphas.
  void validate() const;
};

struct FittedDistribution {
  DistributionSpec spec;
  QuantileConstraint constraint;
  double residual;                    ///< fit_residual(spec, constraint)
  std::vector<std::string> warnings;  ///< e.g. an imperfect one-parameter fit
};

/// sqrt((F(q_low) - alpha_low)^2 + (F(q_upp) - alpha_upp)^2).
double fit_residual(const DistributionSpec& spec, const QuantileConstraint& constraint);

/// Residual above which a two-parameter fit is reported as a failure.
inline constexpr double kMaxFitResidual = 1e-6;
/// Residual above which a one-parameter least-squares fit carries a warning.
inline constexpr double kExponentialWarnResidual = 1e-3;

/// Finds the member of `family` whose CDF matches both quantile constraints.
///
/// Normal fits are closed form. The other families minimize fit_residual by
/// Nelder-Mead over log-transformed parameters, restarting up to five times
/// from perturbed points. Throws DomainError when the quantiles fall outside
/// the family's support and FitError when no two-parameter fit reaches
/// kMaxFitResidual. Exponential fits are least-squares and never fail.
FittedDistribution fit_from_quantiles(Family family, const QuantileConstraint& constraint);

}  // namespace bootcopula
