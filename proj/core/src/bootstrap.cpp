#include "bootcopula/bootstrap.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>

#include "bootcopula/copula.hpp"
#include "bootcopula/error.hpp"
#include "bootcopula/parallel.hpp"

namespace bootcopula {
namespace {

std::string format_inputs(std::span<const double> x) {
  std::ostringstream out;
  out.precision(17);
  out << '(';
  for (std::size_t i = 0; i < x.size(); ++i) out << (i ? ", " : "") << x[i];
  out << ')';
  return out.str();
}

}  // namespace

void BootstrapConfig::validate() const {
  if (n < kMinBootstrapDraws) {
    throw InvalidArgument("bootstrap draw count must be >= " + std::to_string(kMinBootstrapDraws) +
                          " (got " + std::to_string(n) + ")");
  }
  if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("level must lie in (0, 1)");
  if (chunk_size == 0) throw InvalidArgument("chunk size must be >= 1");
  if (accept_range && !(accept_range->low <= accept_range->upp)) {
    throw InvalidArgument("accept range must satisfy low <= upp");
  }
}

CorrelationSummary summarize_correlation(const CorrelationMatrix& sigma) {
  CorrelationSummary s;
  s.dimension = sigma.dimension();
  s.identity = sigma.is_identity();
  s.min_eigenvalue = sigma.min_eigenvalue();
  s.max_eigenvalue = sigma.max_eigenvalue();
  const CorrelationFactor factor = factor_correlation(sigma);
  s.rank = factor.rank;
  s.factor_error = reconstruction_error(factor, sigma);
  return s;
}

BootResult boot_comb(std::span<const FittedDistribution> marginals, const CorrelationMatrix& sigma,
                     const Combiner& combiner, const BootstrapConfig& config,
                     std::optional<std::vector<double>> point_estimates) {
  config.validate();
  const std::size_t d = marginals.size();
  if (d == 0) throw InvalidArgument("at least one marginal is required");
  if (sigma.dimension() != d || combiner.arity() != d) {
    std::ostringstream msg;
    msg << "dimension mismatch: " << d << " marginals, correlation dimension "
        << sigma.dimension() << ", combiner arity " << combiner.arity();
    throw InvalidArgument(msg.str());
  }
  if (point_estimates && point_estimates->size() != d) {
    throw InvalidArgument("point estimate count does not match number of marginals");
  }

  const std::vector<DistributionSpec> specs = specs_of(marginals);
  std::optional<CorrelationFactor> factor;
  if (!sigma.is_identity()) factor = factor_correlation(sigma);
  const CorrelationFactor* f = factor ? &*factor : nullptr;
  const RngStream rng(config.seed, config.stream, 0);

  const std::size_t n = config.n;
  std::vector<double> values(n);
  std::optional<Matrix> inputs;
  if (config.return_boot_values) inputs.emplace(n, d);

  std::atomic<std::size_t> uninformative{0};
  std::atomic<std::size_t> first_uninformative{n};

  parallel_chunks(n, config.chunk_size, config.threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> g(d), z(d), x(d);
    std::size_t local_count = 0;
    std::size_t local_first = n;
    for (std::size_t i = begin; i < end; ++i) {
      draw_one(specs, f, rng, i, g, z, x);
      if (inputs) std::copy(x.begin(), x.end(), inputs->row(i).begin());
      double v;
      try {
        v = combiner(x);
      } catch (const UninformativeTestError&) {
        if (local_count++ == 0) local_first = i;
        values[i] = std::numeric_limits<double>::quiet_NaN();
        continue;
      } catch (const EvaluationError& e) {
        throw NonFiniteDrawError("draw " + std::to_string(i) + " with inputs " + format_inputs(x) +
                                     ": " + e.what(),
                                 i, x);
      }
      if (!std::isfinite(v)) {
        throw NonFiniteDrawError("draw " + std::to_string(i) + " with inputs " + format_inputs(x) +
                                     " produced a non-finite combined value",
                                 i, x);
      }
      values[i] = v;
    }
    if (local_count) {
      uninformative += local_count;
      std::size_t cur = first_uninformative.load();
      while (local_first < cur && !first_uninformative.compare_exchange_weak(cur, local_first)) {
      }
    }
  });

  if (const std::size_t count = uninformative.load(); count > 0) {
    std::ostringstream msg;
    msg << "uninformative test: " << count << " of " << n
        << " draws have sensitivity + specificity <= 1 (first at draw " << first_uninformative.load()
        << ")";
    throw UninformativeTestError(msg.str(), count);
  }

  std::vector<double> sorted;
  std::size_t excluded = 0;
  if (config.accept_range) {
    sorted.reserve(n);
    for (double v : values) {
      if (config.accept_range->contains(v)) {
        sorted.push_back(v);
      } else {
        ++excluded;
      }
    }
    if (sorted.size() < 2) {
      throw InvalidArgument("fewer than two draws fall inside the accepted range");
    }
  } else if (config.return_boot_values) {
    sorted = values;
  } else {
    sorted = std::move(values);
  }
  std::sort(sorted.begin(), sorted.end());

  CombinedEstimate estimate{compute_interval(sorted, config.level, config.method),
                            config.method,
                            config.level,
                            n,
                            0.0,
                            PointSource::median,
                            {}};
  if (point_estimates) {
    estimate.point = combiner(*point_estimates);
    estimate.point_source = PointSource::supplied;
  } else {
    estimate.point = empirical_quantile_sorted(sorted, 0.5);
  }

  Diagnostics& diag = estimate.diagnostics;
  diag.draws = n;
  diag.excluded_draws = excluded;
  for (const auto& m : marginals) {
    diag.fit_residuals.push_back(m.residual);
    diag.warnings.insert(diag.warnings.end(), m.warnings.begin(), m.warnings.end());
  }
  diag.correlation.dimension = d;
  diag.correlation.identity = f == nullptr;
  diag.correlation.min_eigenvalue = sigma.min_eigenvalue();
  diag.correlation.max_eigenvalue = sigma.max_eigenvalue();
  diag.correlation.rank = f ? f->rank : d;
  diag.correlation.factor_error = f ? reconstruction_error(*f, sigma) : 0.0;

  BootResult result{std::move(estimate), std::nullopt};
  if (config.return_boot_values) result.sample = EmpiricalSample{std::move(values), std::move(inputs)};
  return result;
}

}  // namespace bootcopula
