#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace bootcopula {

enum class IntervalMethod { percentile, hdi };

std::string_view to_string(IntervalMethod method) noexcept;
IntervalMethod parse_interval_method(std::string_view name);

struct Interval {
  double low;
  double upp;

  double width() const noexcept { return upp - low; }
  bool contains(double v) const noexcept { return v >= low && v <= upp; }
};

/// Empirical quantile of ascending `sorted` at probability p in [0, 1],
/// interpolating linearly between order statistics at h = (N - 1) p.
double empirical_quantile_sorted(std::span<const double> sorted, double p);

/// (q((1 - level)/2), q(1 - (1 - level)/2)) by empirical_quantile_sorted.
Interval percentile_interval_sorted(std::span<const double> sorted, double level);
Interval percentile_interval(std::span<const double> values, double level);

/// Number of samples an HDI window must contain: ceil(level * N), at least 1.
std::size_t hdi_window_size(std::size_t n, double level);

/// Shortest window (x_i, x_{i+m-1}) over the sorted sample with m from
/// hdi_window_size; ties go to the smallest i.
Interval hdi_interval_sorted(std::span<const double> sorted, double level);
Interval hdi_interval(std::span<const double> values, double level);

Interval compute_interval(std::span<const double> sorted, double level, IntervalMethod method);

}  // namespace bootcopula
