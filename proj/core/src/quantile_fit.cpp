#include "bootcopula/quantile_fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "bootcopula/error.hpp"
#include "bootcopula/nelder_mead.hpp"

namespace bootcopula {
namespace {

constexpr int kMaxRestarts = 5;
// Residual at which restarts stop early; far below kMaxFitResidual.
constexpr double kRestartTarget = 1e-12;

void check_support(Family family, const QuantileConstraint& c) {
  switch (family) {
    case Family::beta:
      if (!(c.q_low > 0.0 && c.q_upp < 1.0)) {
        throw DomainError("beta fit requires 0 < qLow < qUpp < 1");
      }
      break;
    case Family::gamma:
    case Family::exponential:
      if (!(c.q_low > 0.0)) {
        throw DomainError(std::string(to_string(family)) + " fit requires qLow > 0");
      }
      break;
    case Family::normal:
      break;
  }
}

// Maps unconstrained coordinates to a spec; positive parameters are log-scaled.
DistributionSpec from_unconstrained(Family family, const std::vector<double>& theta) {
  switch (family) {
    case Family::beta:
      return DistributionSpec::beta(std::exp(theta[0]), std::exp(theta[1]));
    case Family::gamma:
      return DistributionSpec::gamma(std::exp(theta[0]), std::exp(theta[1]));
    case Family::exponential:
      return DistributionSpec::exponential(std::exp(theta[0]));
    case Family::normal:
      return DistributionSpec::normal(theta[0], std::exp(theta[1]));
  }
  throw InvalidArgument("unknown family");
}

std::vector<double> to_unconstrained(const DistributionSpec& spec) {
  switch (spec.family()) {
    case Family::normal:
      return {spec.param(0), std::log(spec.param(1))};
    case Family::exponential:
      return {std::log(spec.param(0))};
    default:
      return {std::log(spec.param(0)), std::log(spec.param(1))};
  }
}

DistributionSpec initial_guess(Family family, const QuantileConstraint& c) {
  const double z_low = std_normal_quantile(c.alpha_low);
  const double z_upp = std_normal_quantile(c.alpha_upp);
  const double sd = (c.q_upp - c.q_low) / (z_upp - z_low);
  const double mid = 0.5 * (c.q_low + c.q_upp);
  switch (family) {
    case Family::normal:
      return DistributionSpec::normal(c.q_low - sd * z_low, sd);
    case Family::beta: {
      const double common = mid * (1.0 - mid) / (sd * sd) - 1.0;
      if (!(common > 0.0)) return DistributionSpec::beta(1.0, 1.0);
      return DistributionSpec::beta(mid * common, (1.0 - mid) * common);
    }
    case Family::gamma:
      return DistributionSpec::gamma((mid / sd) * (mid / sd), mid / (sd * sd));
    case Family::exponential:
      return DistributionSpec::exponential(std::log(1.0 / (1.0 - c.alpha_upp)) / c.q_upp);
  }
  throw InvalidArgument("unknown family");
}

double objective(Family family, const QuantileConstraint& c, const std::vector<double>& theta) {
  for (double t : theta) {
    if (!std::isfinite(t) || std::fabs(t) > 700.0) return HUGE_VAL;
  }
  try {
    return fit_residual(from_unconstrained(family, theta), c);
  } catch (const Error&) {
    return HUGE_VAL;
  }
}

}  // namespace

void QuantileConstraint::validate() const {
  if (!std::isfinite(q_low) || !std::isfinite(q_upp)) {
    throw InvalidArgument("quantile bounds must be finite");
  }
  if (!(q_low < q_upp)) throw InvalidArgument("qLow must be < qUpp");
  if (!(alpha_low > 0.0 && alpha_low < alpha_upp && alpha_upp < 1.0)) {
    throw InvalidArgument("quantile levels must satisfy 0 < alphaLow < alphaUpp < 1");
  }
}

double fit_residual(const DistributionSpec& spec, const QuantileConstraint& constraint) {
  const double lo = cdf(spec, constraint.q_low) - constraint.alpha_low;
  const double hi = cdf(spec, constraint.q_upp) - constraint.alpha_upp;
  return std::sqrt(lo * lo + hi * hi);
}

FittedDistribution fit_from_quantiles(Family family, const QuantileConstraint& constraint) {
  constraint.validate();
  check_support(family, constraint);

  DistributionSpec best = initial_guess(family, constraint);
  double best_residual = fit_residual(best, constraint);

  if (family != Family::normal || best_residual > kMaxFitResidual) {
    std::vector<double> start = to_unconstrained(best);
    const auto f = [&](const std::vector<double>& theta) {
      return objective(family, constraint, theta);
    };
    for (int attempt = 0; attempt <= kMaxRestarts && best_residual > kRestartTarget; ++attempt) {
      if (attempt > 0) {
        // Deterministic perturbation of the best point so far.
        start = to_unconstrained(best);
        const double scale = 0.05 * attempt;
        for (std::size_t k = 0; k < start.size(); ++k) {
          start[k] += (k % 2 == 0 ? scale : -scale);
        }
      }
      const NelderMeadResult result = nelder_mead(f, start);
      if (result.value < best_residual) {
        best = from_unconstrained(family, result.point);
        best_residual = fit_residual(best, constraint);
      }
    }
  }

  FittedDistribution fitted{best, constraint, best_residual, {}};
  if (family == Family::exponential) {
    if (best_residual > kExponentialWarnResidual) {
      std::ostringstream msg;
      msg << "exponential least-squares fit leaves residual " << best_residual
          << "; one parameter cannot match both quantiles";
      fitted.warnings.push_back(msg.str());
    }
    return fitted;
  }
  if (best_residual > kMaxFitResidual) {
    std::ostringstream msg;
    msg << to_string(family) << " fit to (" << constraint.q_low << ", " << constraint.q_upp
        << ") did not converge: best residual " << best_residual;
    throw FitError(msg.str(), best_residual);
  }
  return fitted;
}

}  // namespace bootcopula
