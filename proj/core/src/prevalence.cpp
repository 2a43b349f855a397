#include "bootcopula/prevalence.hpp"

#include <cmath>
#include <string>

#include "bootcopula/copula.hpp"
#include "bootcopula/error.hpp"

namespace bootcopula {
namespace {

void check_interval(const ProbabilityInterval& ci, const char* name) {
  if (!(ci.low > 0.0 && ci.upp < 1.0 && ci.low < ci.upp)) {
    throw InvalidArgument(std::string(name) + " interval must satisfy 0 < low < upp < 1");
  }
}

}  // namespace

std::string_view to_string(OutOfRangePolicy policy) noexcept {
  return policy == OutOfRangePolicy::truncate ? "truncate" : "discard";
}

OutOfRangePolicy parse_out_of_range_policy(std::string_view name) {
  if (name == "discard") return OutOfRangePolicy::discard;
  if (name == "truncate") return OutOfRangePolicy::truncate;
  throw InvalidArgument("unknown out-of-range policy '" + std::string(name) +
                        "' (expected discard or truncate)");
}

Combiner prevalence_combiner(OutOfRangePolicy policy) {
  return Combiner::builtin(policy == OutOfRangePolicy::truncate ? BuiltinCombiner::rogan_gladen
                                                                : BuiltinCombiner::rogan_gladen_raw,
                           3);
}

BootstrapConfig prevalence_config(const PrevAdjustRequest& request) {
  BootstrapConfig config = request.config;
  if (request.out_of_range == OutOfRangePolicy::discard) {
    config.accept_range = Interval{0.0, 1.0};
  } else {
    config.accept_range.reset();
  }
  return config;
}

void PrevAdjustRequest::validate() const {
  check_interval(prev_ci, "prevalence");
  check_interval(sens_ci, "sensitivity");
  check_interval(spec_ci, "specificity");
  if (sigma.dimension() != 3) throw InvalidArgument("prevalence adjustment needs a 3x3 correlation");
}

CorrelationMatrix sens_spec_correlation(double rho) {
  Matrix m = Matrix::identity(3);
  m(1, 2) = rho;
  m(2, 1) = rho;
  return CorrelationMatrix::validate(m);
}

std::vector<FittedDistribution> fit_prevalence_marginals(const PrevAdjustRequest& request) {
  request.validate();
  std::vector<FittedDistribution> fits;
  for (const auto& ci : {request.prev_ci, request.sens_ci, request.spec_ci}) {
    fits.push_back(fit_from_quantiles(Family::beta, QuantileConstraint{ci.low, ci.upp}));
  }
  return fits;
}

AdjustedPrevalence adjust_prevalence(const PrevAdjustRequest& request) {
  auto marginals = fit_prevalence_marginals(request);
  BootResult boot = boot_comb(marginals, request.sigma, prevalence_combiner(request.out_of_range),
                              prevalence_config(request));
  if (request.point_estimates) {
    const auto& pe = *request.point_estimates;
    boot.estimate.point = rogan_gladen(pe[0], pe[1], pe[2]);
    boot.estimate.point_source = PointSource::supplied;
  }
  return {std::move(boot.estimate), std::move(marginals), std::move(boot.sample)};
}

std::vector<RhoSweepRow> rho_sweep(const PrevAdjustRequest& request, std::span<const double> rho_grid) {
  std::vector<RhoSweepRow> rows;
  rows.reserve(rho_grid.size());
  for (std::size_t k = 0; k < rho_grid.size(); ++k) {
    const double rho = rho_grid[k];
    if (!(rho >= -1.0 && rho <= 1.0)) {
      throw InvalidArgument("sweep correlation " + std::to_string(rho) + " outside [-1, 1]");
    }
    PrevAdjustRequest row_request = request;
    row_request.sigma = sens_spec_correlation(rho);
    row_request.config.stream = request.config.stream + k;
    row_request.config.return_boot_values = false;
    const AdjustedPrevalence result = adjust_prevalence(row_request);
    const Interval& iv = result.estimate.interval;
    rows.push_back({rho, iv.low, iv.upp, iv.width()});
  }
  return rows;
}

Matrix scatter_draws(const PrevAdjustRequest& request, double rho, std::size_t m) {
  if (m == 0) throw InvalidArgument("scatter sample size must be >= 1");
  check_interval(request.sens_ci, "sensitivity");
  check_interval(request.spec_ci, "specificity");
  // The prevalence column is dropped and its marginal never influences the
  // other two, so a placeholder stands in for it; draws keep the same stream
  // positions as adjust_prevalence.
  const std::vector<DistributionSpec> marginals{
      DistributionSpec::beta(1.0, 1.0),
      fit_from_quantiles(Family::beta, {request.sens_ci.low, request.sens_ci.upp}).spec,
      fit_from_quantiles(Family::beta, {request.spec_ci.low, request.spec_ci.upp}).spec};
  const RngStream rng(request.config.seed, request.config.stream, 0);
  const Matrix draws = draw_dependent_samples(std::span<const DistributionSpec>(marginals),
                                              sens_spec_correlation(rho), m, rng,
                                              {request.config.threads, request.config.chunk_size});
  Matrix out(m, 2);
  for (std::size_t i = 0; i < m; ++i) {
    out(i, 0) = draws(i, 1);
    out(i, 1) = draws(i, 2);
  }
  return out;
}

}  // namespace bootcopula
