#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>

namespace bootcopula {

/// Supported continuous marginal families.
enum class Family { beta, normal, gamma, exponential };

std::string_view to_string(Family family) noexcept;

/// Parses "beta", "normal", "gamma" or "exponential"; throws InvalidArgument otherwise.
Family parse_family(std::string_view name);

/// Number of parameters taken by a family (2, except exponential).
std::size_t parameter_count(Family family) noexcept;

struct Support {
  double lower;
  double upper;

  bool contains_interior(double x) const noexcept { return x > lower && x < upper; }
};

/// A fully parameterized continuous distribution.
///
/// Parameters use the natural parameterization: beta(alpha, beta),
/// normal(mu, sigma), gamma(shape, rate), exponential(rate). Construction
/// rejects non-finite or non-positive scale/shape parameters with
/// InvalidArgument, so a DistributionSpec value is always valid.
class DistributionSpec {
 public:
  static DistributionSpec beta(double alpha, double beta);
  static DistributionSpec normal(double mu, double sigma);
  static DistributionSpec gamma(double shape, double rate);
  static DistributionSpec exponential(double rate);
  static DistributionSpec make(Family family, std::span<const double> params);

  Family family() const noexcept { return family_; }
  std::span<const double> params() const noexcept { return {params_.data(), count_}; }
  double param(std::size_t i) const noexcept { return params_[i]; }
  Support support() const noexcept;

  /// Cached log normalizing constant: log B(a, b) for beta, lgamma(shape) for gamma.
  double log_normalizer() const noexcept { return log_norm_; }

  std::string describe() const;

  friend bool operator==(const DistributionSpec& a, const DistributionSpec& b) noexcept {
    return a.family_ == b.family_ && a.count_ == b.count_ && a.params_ == b.params_;
  }

 private:
  DistributionSpec(Family family, std::array<double, 2> params, std::size_t count);

  Family family_;
  std::array<double, 2> params_;
  std::size_t count_;
  double log_norm_ = 0.0;
};

/// F(x); 0 below the support and 1 above it. Throws DomainError for non-finite x.
double cdf(const DistributionSpec& spec, double x);

/// Density f(x) >= 0; zero outside the support. Throws DomainError for non-finite x.
double pdf(const DistributionSpec& spec, double x);

/// Inverse CDF for p in the open interval (0, 1); throws DomainError otherwise.
/// Normal and exponential use closed forms; beta and gamma run a bracketed
/// Newton iteration from an analytic starting point.
double quantile(const DistributionSpec& spec, double p);

double std_normal_cdf(double z);
double std_normal_pdf(double z) noexcept;

/// Phi^{-1}(p) for p in (0, 1): rational starting approximation plus one
/// Halley correction against erfc, accurate to about 1e-15 relative.
double std_normal_quantile(double p);

}  // namespace bootcopula
