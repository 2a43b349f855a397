#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bootcopula/combiner.hpp"
#include "bootcopula/correlation.hpp"
#include "bootcopula/intervals.hpp"
#include "bootcopula/matrix.hpp"
#include "bootcopula/quantile_fit.hpp"

namespace bootcopula {

/// Smallest draw count for which an interval is reported.
inline constexpr std::size_t kMinBootstrapDraws = 1000;

struct BootstrapConfig {
  std::size_t n = 1'000'000;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;  ///< RNG stream id; sweeps use one stream per row
  IntervalMethod method = IntervalMethod::percentile;
  double level = 0.95;
  bool return_boot_values = false;
  std::size_t chunk_size = 65536;
  unsigned threads = 1;  ///< 0 = all hardware threads; never changes results
  /// Combined values outside this closed range are left out of the interval
  /// and counted in Diagnostics::excluded_draws. Unset keeps every draw.
  std::optional<Interval> accept_range;

  /// Throws InvalidArgument if n < kMinBootstrapDraws, level is outside
  /// (0, 1) or chunk_size is zero.
  void validate() const;
};

struct EmpiricalSample {
  std::vector<double> values;         ///< combined value of draw i, in draw order (all draws)
  std::optional<Matrix> input_draws;  ///< n x d parameter draws
};

struct CorrelationSummary {
  std::size_t dimension = 0;
  std::size_t rank = 0;
  double min_eigenvalue = 1.0;
  double max_eigenvalue = 1.0;
  double factor_error = 0.0;  ///< max |L L^T - sigma|
  bool identity = true;
};

struct Diagnostics {
  std::vector<double> fit_residuals;
  CorrelationSummary correlation;
  std::size_t draws = 0;
  std::size_t excluded_draws = 0;  ///< draws outside BootstrapConfig::accept_range
  std::vector<std::string> warnings;
};

enum class PointSource { supplied, median };

struct CombinedEstimate {
  Interval interval;
  IntervalMethod method;
  double level;
  std::size_t n;
  double point;  ///< combiner at supplied point estimates, else sample median
  PointSource point_source;
  Diagnostics diagnostics;
};

struct BootResult {
  CombinedEstimate estimate;
  std::optional<EmpiricalSample> sample;  ///< present when return_boot_values is set
};

/// Parametric bootstrap combination under a Gaussian copula.
///
/// Draws config.n joint samples from the marginals coupled by `sigma`,
/// applies `combiner` to each, and summarizes by percentile or HDI interval.
/// Draw i always uses the same stream positions, so results are identical
/// for any thread count. A non-finite combined value aborts the run with
/// NonFiniteDrawError naming the lowest failing draw; draws with
/// sensitivity + specificity <= 1 in a Rogan-Gladen combiner are counted
/// and reported together as UninformativeTestError.
BootResult boot_comb(std::span<const FittedDistribution> marginals, const CorrelationMatrix& sigma,
                     const Combiner& combiner, const BootstrapConfig& config,
                     std::optional<std::vector<double>> point_estimates = std::nullopt);

CorrelationSummary summarize_correlation(const CorrelationMatrix& sigma);

}  // namespace bootcopula
