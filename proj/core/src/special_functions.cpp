#include "bootcopula/special_functions.hpp"

#include <cmath>
#include <limits>

namespace bootcopula::special {
namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxIterations = 10000;

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= kEps) break;
  }
  return h;
}

double gamma_series_sum(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int n = 0; n < kMaxIterations; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) <= std::fabs(sum) * kEps) break;
  }
  return sum;
}

// Upper tail Q(a, x) by Lentz continued fraction; valid for x >= a + 1.
double gamma_continued_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= kEps) break;
  }
  return h;
}

constexpr double kHalfLog2Pi = 0.91893853320467274178;
// Below this the Stirling series is not accurate enough and lgamma is used directly.
constexpr double kStirlingMin = 15.0;

// lgamma(z) - [(z - 1/2) log z - z + log(2 pi) / 2] for z >= kStirlingMin.
double stirling_delta(double z) {
  const double r = 1.0 / z;
  const double r2 = r * r;
  return r * (1.0 / 12 - r2 * (1.0 / 360 - r2 * (1.0 / 1260 - r2 * (1.0 / 1680 - r2 * (1.0 / 1188 -
             r2 * (691.0 / 360360))))));
}

// log of x^a (1-x)^b / B(a, b) without forming the large, nearly cancelling
// logs of each factor separately.
double log_beta_front_large(double a, double b, double x) {
  const double s = a + b;
  const double x0 = a / s;
  const double y0 = b / s;
  const double dx = x - x0;
  return a * std::log1p(dx / x0) + b * std::log1p(-dx / y0) + 0.5 * std::log(a * b / s) - kHalfLog2Pi -
         stirling_delta(a) - stirling_delta(b) + stirling_delta(s);
}

}  // namespace

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double incomplete_beta(double a, double b, double x, double log_beta_ab, double& front) {
  front = 0.0;
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (a >= kStirlingMin && b >= kStirlingMin) {
    front = std::exp(log_beta_front_large(a, b, x));
  } else {
    front = std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta_ab);
  }
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double incomplete_beta(double a, double b, double x, double log_beta_ab) {
  double front;
  return incomplete_beta(a, b, x, log_beta_ab, front);
}

double incomplete_beta(double a, double b, double x) {
  return incomplete_beta(a, b, x, log_beta(a, b));
}

double incomplete_gamma_lower(double a, double x, double lgamma_a, double& front) {
  front = 0.0;
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (a >= kStirlingMin) {
    const double t = (x - a) / a;
    front = std::exp(a * (std::log1p(t) - t) + 0.5 * std::log(a) - kHalfLog2Pi - stirling_delta(a));
  } else {
    front = std::exp(-x + a * std::log(x) - lgamma_a);
  }
  if (x < a + 1.0) return front * gamma_series_sum(a, x);
  return 1.0 - front * gamma_continued_fraction(a, x);
}

double incomplete_gamma_lower(double a, double x, double lgamma_a) {
  double front;
  return incomplete_gamma_lower(a, x, lgamma_a, front);
}

double incomplete_gamma_lower(double a, double x) {
  return incomplete_gamma_lower(a, x, std::lgamma(a));
}

}  // namespace bootcopula::special
