#include "bootcopula/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bootcopula/error.hpp"

namespace bootcopula {
namespace {

void check_sample(std::size_t n, double level) {
  if (n < 2) throw InvalidArgument("interval estimation needs at least two values");
  if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("level must lie in (0, 1)");
}

std::vector<double> sorted_copy(std::span<const double> values) {
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

std::string_view to_string(IntervalMethod method) noexcept {
  return method == IntervalMethod::hdi ? "hdi" : "percentile";
}

IntervalMethod parse_interval_method(std::string_view name) {
  if (name == "percentile") return IntervalMethod::percentile;
  if (name == "hdi") return IntervalMethod::hdi;
  throw InvalidArgument("unknown interval method '" + std::string(name) +
                        "' (expected percentile or hdi)");
}

double empirical_quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw InvalidArgument("empirical quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("quantile probability must lie in [0, 1]");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

Interval percentile_interval_sorted(std::span<const double> sorted, double level) {
  check_sample(sorted.size(), level);
  const double tail = 0.5 * (1.0 - level);
  return {empirical_quantile_sorted(sorted, tail), empirical_quantile_sorted(sorted, 1.0 - tail)};
}

Interval percentile_interval(std::span<const double> values, double level) {
  const auto sorted = sorted_copy(values);
  return percentile_interval_sorted(sorted, level);
}

std::size_t hdi_window_size(std::size_t n, double level) {
  const double target = level * static_cast<double>(n);
  const double nearest = std::round(target);
  // level * N may land an ulp above an integer (0.95 * 1e6); treat it as exact.
  const double m = std::fabs(target - nearest) <= 1e-9 * std::max(1.0, target) ? nearest
                                                                               : std::ceil(target);
  return std::clamp<std::size_t>(static_cast<std::size_t>(m), 1, n);
}

Interval hdi_interval_sorted(std::span<const double> sorted, double level) {
  check_sample(sorted.size(), level);
  const std::size_t n = sorted.size();
  const std::size_t m = hdi_window_size(n, level);
  std::size_t best = 0;
  double best_width = sorted[m - 1] - sorted[0];
  for (std::size_t i = 1; i + m <= n; ++i) {
    const double width = sorted[i + m - 1] - sorted[i];
    if (width < best_width) {
      best_width = width;
      best = i;
    }
  }
  return {sorted[best], sorted[best + m - 1]};
}

Interval hdi_interval(std::span<const double> values, double level) {
  const auto sorted = sorted_copy(values);
  return hdi_interval_sorted(sorted, level);
}

Interval compute_interval(std::span<const double> sorted, double level, IntervalMethod method) {
  return method == IntervalMethod::hdi ? hdi_interval_sorted(sorted, level)
                                       : percentile_interval_sorted(sorted, level);
}

}  // namespace bootcopula
