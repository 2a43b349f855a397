#include "bootcopula/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "bootcopula/error.hpp"
#include "bootcopula/special_functions.hpp"

namespace bootcopula {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_positive(double value, const char* name) {
  if (!std::isfinite(value) || !(value > 0.0)) {
    std::ostringstream msg;
    msg << name << " must be finite and > 0 (got " << value << ")";
    throw InvalidArgument(msg.str());
  }
}

void require_finite_argument(double x) {
  if (!std::isfinite(x)) throw DomainError("distribution argument must be finite");
}

void require_open_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    std::ostringstream msg;
    msg << "probability must lie strictly inside (0, 1) (got " << p << ")";
    throw DomainError(msg.str());
  }
}

struct Evaluation {
  double cdf;
  double density;
  double log_density_slope;  ///< d/dx log f(x)
};

// Halley iteration for F(x) = p, safeguarded by the bracket (lo, hi). Steps
// leaving the bracket, or taken where the density vanishes, fall back to a
// bisection step (geometric when the bracket spans orders of magnitude).
// Stops once the correction is below 1e-10 relative: with cubic (or at
// worst quadratic) convergence the corrected iterate is then exact to
// rounding.
template <class Eval>
double solve_quantile(double p, double x, double lo, double hi, Eval&& eval) {
  for (int iter = 0; iter < 1000; ++iter) {
    const Evaluation e = eval(x);
    const double f = e.cdf - p;
    if (f == 0.0) return x;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    double next = std::numeric_limits<double>::quiet_NaN();
    if (e.density > 0.0 && std::isfinite(e.density)) {
      const double newton = f / e.density;
      const double correction = 0.5 * newton * e.log_density_slope;
      const double step = std::fabs(correction) < 0.5 ? newton / (1.0 - correction) : newton;
      next = x - step;
      if (next > lo && next < hi && std::fabs(step) <= 1e-10 * std::fabs(x)) return next;
    }
    if (!(next > lo && next < hi)) {
      if (std::isinf(hi)) {
        next = 2.0 * lo + 1.0;
      } else if (lo <= 0.0) {
        next = lo + (hi - lo) / 16.0;
      } else if (hi / lo > 16.0) {
        next = std::sqrt(lo) * std::sqrt(hi);
      } else {
        next = 0.5 * (lo + hi);
      }
    }
    if (std::fabs(next - x) <= 2.0 * kEps * std::fabs(x)) return next;
    if (!std::isinf(hi) && hi - lo <= 2.0 * kEps * std::fabs(hi)) return next;
    x = next;
  }
  return x;
}

double beta_quantile(const DistributionSpec& spec, double p) {
  const double a = spec.param(0);
  const double b = spec.param(1);
  const double log_b = spec.log_normalizer();
  double x;
  if (p < 1e-8) {
    x = std::exp((std::log(p) + std::log(a) + log_b) / a);
  } else if (1.0 - p < 1e-8) {
    x = -std::expm1((std::log1p(-p) + std::log(b) + log_b) / b);
  } else if (a >= 1.0 && b >= 1.0) {
    // Normal approximation to the beta quantile (Abramowitz & Stegun 26.5.22).
    const double y = -std_normal_quantile(p);
    const double lambda = (y * y - 3.0) / 6.0;
    const double h = 2.0 / (1.0 / (2.0 * a - 1.0) + 1.0 / (2.0 * b - 1.0));
    const double w = y * std::sqrt(h + lambda) / h -
                     (1.0 / (2.0 * b - 1.0) - 1.0 / (2.0 * a - 1.0)) *
                         (lambda + 5.0 / 6.0 - 2.0 / (3.0 * h));
    x = a / (a + b * std::exp(2.0 * w));
  } else {
    const double lna = std::log(a / (a + b));
    const double lnb = std::log(b / (a + b));
    const double t = std::exp(a * lna) / a;
    const double u = std::exp(b * lnb) / b;
    const double w = t + u;
    x = p < t / w ? std::pow(a * w * p, 1.0 / a) : 1.0 - std::pow(b * w * (1.0 - p), 1.0 / b);
  }
  if (!(x > 0.0 && x < 1.0)) x = a / (a + b);
  return solve_quantile(p, x, 0.0, 1.0, [&](double v) {
    double front;
    const double c = special::incomplete_beta(a, b, v, log_b, front);
    return Evaluation{c, front / (v * (1.0 - v)), (a - 1.0) / v - (b - 1.0) / (1.0 - v)};
  });
}

double gamma_quantile(const DistributionSpec& spec, double p) {
  const double shape = spec.param(0);
  const double rate = spec.param(1);
  const double lg = spec.log_normalizer();
  double x;  // on the unit-rate scale
  if (p < 1e-8) {
    x = std::exp((std::log(p) + std::lgamma(shape + 1.0)) / shape);
  } else if (shape > 1.0) {
    // Wilson-Hilferty cube-root approximation.
    const double z = std_normal_quantile(p);
    const double c = 1.0 - 1.0 / (9.0 * shape) + z / (3.0 * std::sqrt(shape));
    x = std::max(1e-3, shape * c * c * c);
  } else {
    const double t = 1.0 - shape * (0.253 + shape * 0.12);
    x = p < t ? std::pow(p / t, 1.0 / shape) : 1.0 - std::log1p(-(p - t) / (1.0 - t));
  }
  if (!(x > 0.0) || !std::isfinite(x)) x = shape;
  const double unit = solve_quantile(p, x, 0.0, kInf, [&](double v) {
    double front;
    const double c = special::incomplete_gamma_lower(shape, v, lg, front);
    return Evaluation{c, front / v, (shape - 1.0) / v - 1.0};
  });
  return unit / rate;
}

}  // namespace

std::string_view to_string(Family family) noexcept {
  switch (family) {
    case Family::beta:
      return "beta";
    case Family::normal:
      return "normal";
    case Family::gamma:
      return "gamma";
    case Family::exponential:
      return "exponential";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "beta") return Family::beta;
  if (name == "normal") return Family::normal;
  if (name == "gamma") return Family::gamma;
  if (name == "exponential") return Family::exponential;
  throw InvalidArgument("unknown distribution family '" + std::string(name) +
                        "' (expected beta, normal, gamma or exponential)");
}

std::size_t parameter_count(Family family) noexcept {
  return family == Family::exponential ? 1 : 2;
}

DistributionSpec::DistributionSpec(Family family, std::array<double, 2> params, std::size_t count)
    : family_(family), params_(params), count_(count) {
  switch (family_) {
    case Family::beta:
      log_norm_ = special::log_beta(params_[0], params_[1]);
      break;
    case Family::gamma:
      log_norm_ = std::lgamma(params_[0]);
      break;
    default:
      break;
  }
}

DistributionSpec DistributionSpec::beta(double alpha, double beta) {
  require_positive(alpha, "beta alpha");
  require_positive(beta, "beta beta");
  return {Family::beta, {alpha, beta}, 2};
}

DistributionSpec DistributionSpec::normal(double mu, double sigma) {
  if (!std::isfinite(mu)) throw InvalidArgument("normal mu must be finite");
  require_positive(sigma, "normal sigma");
  return {Family::normal, {mu, sigma}, 2};
}

DistributionSpec DistributionSpec::gamma(double shape, double rate) {
  require_positive(shape, "gamma shape");
  require_positive(rate, "gamma rate");
  return {Family::gamma, {shape, rate}, 2};
}

DistributionSpec DistributionSpec::exponential(double rate) {
  require_positive(rate, "exponential rate");
  return {Family::exponential, {rate, 0.0}, 1};
}

DistributionSpec DistributionSpec::make(Family family, std::span<const double> params) {
  if (params.size() != parameter_count(family)) {
    std::ostringstream msg;
    msg << to_string(family) << " takes " << parameter_count(family) << " parameter(s), got "
        << params.size();
    throw InvalidArgument(msg.str());
  }
  switch (family) {
    case Family::beta:
      return beta(params[0], params[1]);
    case Family::normal:
      return normal(params[0], params[1]);
    case Family::gamma:
      return gamma(params[0], params[1]);
    case Family::exponential:
      return exponential(params[0]);
  }
  throw InvalidArgument("unknown family");
}

Support DistributionSpec::support() const noexcept {
  switch (family_) {
    case Family::beta:
      return {0.0, 1.0};
    case Family::normal:
      return {-kInf, kInf};
    case Family::gamma:
    case Family::exponential:
      return {0.0, kInf};
  }
  return {-kInf, kInf};
}

std::string DistributionSpec::describe() const {
  std::ostringstream out;
  out.precision(17);
  out << to_string(family_) << '(';
  for (std::size_t i = 0; i < count_; ++i) {
    if (i) out << ", ";
    out << params_[i];
  }
  out << ')';
  return out.str();
}

double std_normal_cdf(double z) {
  if (std::isnan(z)) throw DomainError("standard normal cdf of NaN");
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double std_normal_pdf(double z) noexcept {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double std_normal_quantile(double p) {
  require_open_probability(p);
  // Acklam's rational approximation (relative error < 1.2e-9).
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Halley refinement; the residual is taken in the smaller tail to keep precision.
  const double e = x < 0.0 ? 0.5 * std::erfc(-x / std::numbers::sqrt2) - p
                           : (1.0 - p) - 0.5 * std::erfc(x / std::numbers::sqrt2);
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

double cdf(const DistributionSpec& spec, double x) {
  require_finite_argument(x);
  switch (spec.family()) {
    case Family::normal:
      return std_normal_cdf((x - spec.param(0)) / spec.param(1));
    case Family::exponential:
      return x <= 0.0 ? 0.0 : -std::expm1(-spec.param(0) * x);
    case Family::beta:
      return special::incomplete_beta(spec.param(0), spec.param(1), x, spec.log_normalizer());
    case Family::gamma:
      return special::incomplete_gamma_lower(spec.param(0), spec.param(1) * x,
                                             spec.log_normalizer());
  }
  return 0.0;
}

double pdf(const DistributionSpec& spec, double x) {
  require_finite_argument(x);
  switch (spec.family()) {
    case Family::normal: {
      const double sigma = spec.param(1);
      return std_normal_pdf((x - spec.param(0)) / sigma) / sigma;
    }
    case Family::exponential: {
      const double rate = spec.param(0);
      return x < 0.0 ? 0.0 : rate * std::exp(-rate * x);
    }
    case Family::beta: {
      const double a = spec.param(0);
      const double b = spec.param(1);
      if (x < 0.0 || x > 1.0) return 0.0;
      if (x == 0.0) return a < 1.0 ? kInf : (a == 1.0 ? std::exp(-spec.log_normalizer()) : 0.0);
      if (x == 1.0) return b < 1.0 ? kInf : (b == 1.0 ? std::exp(-spec.log_normalizer()) : 0.0);
      return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) -
                      spec.log_normalizer());
    }
    case Family::gamma: {
      const double shape = spec.param(0);
      const double rate = spec.param(1);
      if (x < 0.0) return 0.0;
      if (x == 0.0) return shape < 1.0 ? kInf : (shape == 1.0 ? rate : 0.0);
      return std::exp(shape * std::log(rate) + (shape - 1.0) * std::log(x) - rate * x -
                      spec.log_normalizer());
    }
  }
  return 0.0;
}

double quantile(const DistributionSpec& spec, double p) {
  require_open_probability(p);
  switch (spec.family()) {
    case Family::normal:
      return spec.param(0) + spec.param(1) * std_normal_quantile(p);
    case Family::exponential:
      return -std::log1p(-p) / spec.param(0);
    case Family::beta:
      return beta_quantile(spec, p);
    case Family::gamma:
      return gamma_quantile(spec, p);
  }
  return 0.0;
}

}  // namespace bootcopula
