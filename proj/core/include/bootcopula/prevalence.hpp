#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bootcopula/bootstrap.hpp"

namespace bootcopula {

struct ProbabilityInterval {
  double low;
  double upp;
};

/// Treatment of bootstrap draws whose adjusted prevalence falls outside [0, 1].
enum class OutOfRangePolicy {
  discard,   ///< leave them out of the interval (count reported in diagnostics)
  truncate,  ///< clamp them to 0 or 1 and keep them
};

std::string_view to_string(OutOfRangePolicy policy) noexcept;
OutOfRangePolicy parse_out_of_range_policy(std::string_view name);

/// Inputs for adjusting an apparent prevalence for test sensitivity and
/// specificity. Parameter order everywhere is (prevalence, sensitivity, specificity).
struct PrevAdjustRequest {
  ProbabilityInterval prev_ci;
  ProbabilityInterval sens_ci;
  ProbabilityInterval spec_ci;
  std::optional<std::array<double, 3>> point_estimates;
  CorrelationMatrix sigma = CorrelationMatrix::identity(3);
  BootstrapConfig config;
  OutOfRangePolicy out_of_range = OutOfRangePolicy::discard;

  /// Throws InvalidArgument unless every bound lies in (0, 1) with low < upp.
  void validate() const;
};

/// 3 x 3 correlation with `rho` between sensitivity and specificity only.
CorrelationMatrix sens_spec_correlation(double rho);

/// Beta marginals fitted to the three intervals, in parameter order.
std::vector<FittedDistribution> fit_prevalence_marginals(const PrevAdjustRequest& request);

struct AdjustedPrevalence {
  CombinedEstimate estimate;
  std::vector<FittedDistribution> marginals;
  std::optional<EmpiricalSample> sample;
};

/// Combiner and bootstrap settings adjust_prevalence uses for `request`.
Combiner prevalence_combiner(OutOfRangePolicy policy);
BootstrapConfig prevalence_config(const PrevAdjustRequest& request);

/// Fits beta marginals and bootstraps the Rogan-Gladen estimator. The point
/// estimate (when supplied) is always the truncated Rogan-Gladen value.
AdjustedPrevalence adjust_prevalence(const PrevAdjustRequest& request);

struct RhoSweepRow {
  double rho;
  double low;
  double upp;
  double width;
};

/// One adjust_prevalence run per grid value with sigma = sens_spec_correlation(rho).
/// Row k uses RNG stream request.config.stream + k, so every row is
/// reproducible on its own and row 0 matches a direct adjust_prevalence call.
std::vector<RhoSweepRow> rho_sweep(const PrevAdjustRequest& request, std::span<const double> rho_grid);

/// m x 2 matrix of (sensitivity, specificity) draws coupled at `rho`, taken
/// from the same three-parameter sampling layout adjust_prevalence uses.
/// Only the sensitivity and specificity intervals of `request` are used.
Matrix scatter_draws(const PrevAdjustRequest& request, double rho, std::size_t m);

}  // namespace bootcopula
