#pragma once

namespace bootcopula::special {

/// log B(a, b) = lgamma(a) + lgamma(b) - lgamma(a + b).
double log_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
/// `log_beta_ab` must equal log_beta(a, b); callers that evaluate the same
/// (a, b) repeatedly pass the cached value.
double incomplete_beta(double a, double b, double x, double log_beta_ab);

/// As above, also storing x^a (1-x)^b / B(a, b) in `front` (density = front / (x (1 - x))).
double incomplete_beta(double a, double b, double x, double log_beta_ab, double& front);
double incomplete_beta(double a, double b, double x);

/// Regularized lower incomplete gamma P(a, x) for a > 0 and x >= 0.
double incomplete_gamma_lower(double a, double x, double lgamma_a);

/// As above, also storing x^a e^{-x} / Gamma(a) in `front` (density = front / x).
double incomplete_gamma_lower(double a, double x, double lgamma_a, double& front);
double incomplete_gamma_lower(double a, double x);

}  // namespace bootcopula::special
