#include "bootcopula/copula.hpp"

#include <algorithm>
#include <optional>

#include "bootcopula/error.hpp"
#include "bootcopula/parallel.hpp"

namespace bootcopula {
namespace {

double clamp_uniform(double u) { return std::clamp(u, kMinUniform, kMaxUniform); }

void check_dimensions(std::size_t marginals, const CorrelationMatrix& sigma) {
  if (marginals != sigma.dimension()) {
    throw InvalidArgument("number of marginals (" + std::to_string(marginals) +
                          ") does not match correlation dimension (" +
                          std::to_string(sigma.dimension()) + ")");
  }
}

}  // namespace

std::vector<DistributionSpec> specs_of(std::span<const FittedDistribution> marginals) {
  std::vector<DistributionSpec> specs;
  specs.reserve(marginals.size());
  for (const auto& m : marginals) specs.push_back(m.spec);
  return specs;
}

std::vector<double> sample_latent(const CorrelationFactor& factor, RngStream& rng) {
  const std::size_t d = factor.lower.rows();
  std::vector<double> g(d);
  for (auto& v : g) v = std_normal_quantile(rng.next_uniform());
  std::vector<double> z(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j <= i; ++j) s += factor.lower(i, j) * g[j];
    z[i] = s;
  }
  return z;
}

CopulaDraw copula_transform(std::span<const double> z, std::span<const DistributionSpec> marginals) {
  if (z.size() != marginals.size()) {
    throw InvalidArgument("latent vector length does not match number of marginals");
  }
  CopulaDraw draw{{z.begin(), z.end()}, std::vector<double>(z.size()), std::vector<double>(z.size())};
  for (std::size_t i = 0; i < z.size(); ++i) {
    draw.u[i] = std_normal_cdf(z[i]);
    draw.x[i] = quantile(marginals[i], clamp_uniform(draw.u[i]));
  }
  return draw;
}

CopulaDraw copula_transform(std::span<const double> z, std::span<const FittedDistribution> marginals) {
  const auto specs = specs_of(marginals);
  return copula_transform(z, specs);
}

void draw_one(std::span<const DistributionSpec> marginals, const CorrelationFactor* factor,
              const RngStream& rng, std::uint64_t index, std::span<double> g, std::span<double> z,
              std::span<double> x) {
  const std::size_t d = marginals.size();
  RngStream stream = rng.at(rng.counter() + index * d);
  if (factor == nullptr) {
    for (std::size_t j = 0; j < d; ++j) x[j] = quantile(marginals[j], stream.next_uniform());
    return;
  }
  for (std::size_t j = 0; j < d; ++j) g[j] = std_normal_quantile(stream.next_uniform());
  for (std::size_t i = 0; i < d; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j <= i; ++j) s += factor->lower(i, j) * g[j];
    z[i] = s;
  }
  for (std::size_t j = 0; j < d; ++j) {
    x[j] = quantile(marginals[j], clamp_uniform(std_normal_cdf(z[j])));
  }
}

Matrix draw_dependent_samples(std::span<const DistributionSpec> marginals,
                              const CorrelationMatrix& sigma, std::size_t n, const RngStream& rng,
                              const SamplingOptions& options) {
  check_dimensions(marginals.size(), sigma);
  if (n == 0) throw InvalidArgument("sample count must be >= 1");
  const std::size_t d = marginals.size();
  std::optional<CorrelationFactor> factor;
  if (!sigma.is_identity()) factor = factor_correlation(sigma);
  const CorrelationFactor* f = factor ? &*factor : nullptr;

  Matrix out(n, d);
  parallel_chunks(n, options.chunk_size, options.threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> g(d), z(d);
    for (std::size_t i = begin; i < end; ++i) draw_one(marginals, f, rng, i, g, z, out.row(i));
  });
  return out;
}

Matrix draw_dependent_samples(std::span<const FittedDistribution> marginals,
                              const CorrelationMatrix& sigma, std::size_t n, const RngStream& rng,
                              const SamplingOptions& options) {
  const auto specs = specs_of(marginals);
  return draw_dependent_samples(specs, sigma, n, rng, options);
}

Matrix draw_independent_samples(std::span<const DistributionSpec> marginals, std::size_t n,
                                const RngStream& rng) {
  const std::size_t d = marginals.size();
  Matrix out(n, d);
  RngStream stream = rng;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) out(i, j) = quantile(marginals[j], stream.next_uniform());
  }
  return out;
}

Matrix draw_latent_samples(const CorrelationMatrix& sigma, std::size_t n, const RngStream& rng,
                           const SamplingOptions& options) {
  const std::size_t d = sigma.dimension();
  const CorrelationFactor factor = factor_correlation(sigma);
  Matrix out(n, d);
  parallel_chunks(n, options.chunk_size, options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      RngStream stream = rng.at(rng.counter() + i * d);
      const auto z = sample_latent(factor, stream);
      std::copy(z.begin(), z.end(), out.row(i).begin());
    }
  });
  return out;
}

}  // namespace bootcopula
