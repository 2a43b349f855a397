#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bootcopula/correlation.hpp"
#include "bootcopula/distributions.hpp"
#include "bootcopula/matrix.hpp"
#include "bootcopula/quantile_fit.hpp"
#include "bootcopula/rng.hpp"

namespace bootcopula {

/// Uniforms are clamped to this range before marginal inversion.
inline constexpr double kMinUniform = 1e-300;
inline constexpr double kMaxUniform = 1.0 - 1e-16;

/// One joint draw: latent normals z, uniforms u = Phi(z), values x = F^{-1}(u).
struct CopulaDraw {
  std::vector<double> z;
  std::vector<double> u;
  std::vector<double> x;
};

/// z = L g with g_i = Phi^{-1}(U_i), consuming one stream position per dimension.
std::vector<double> sample_latent(const CorrelationFactor& factor, RngStream& rng);

CopulaDraw copula_transform(std::span<const double> z, std::span<const DistributionSpec> marginals);
CopulaDraw copula_transform(std::span<const double> z, std::span<const FittedDistribution> marginals);

std::vector<DistributionSpec> specs_of(std::span<const FittedDistribution> marginals);

struct SamplingOptions {
  unsigned threads = 1;  ///< 0 = all hardware threads
  std::size_t chunk_size = 65536;
};

/// n x d matrix of dependent draws.
///
/// Draw i reads stream positions [c + i*d, c + (i+1)*d) where c is
/// rng.counter(), so the output does not depend on the worker count. When
/// sigma is the identity the latent normal step is skipped and each
/// marginal is inverted at the raw uniform, which reproduces
/// draw_independent_samples bit for bit.
Matrix draw_dependent_samples(std::span<const DistributionSpec> marginals,
                              const CorrelationMatrix& sigma, std::size_t n, const RngStream& rng,
                              const SamplingOptions& options = {});
Matrix draw_dependent_samples(std::span<const FittedDistribution> marginals,
                              const CorrelationMatrix& sigma, std::size_t n, const RngStream& rng,
                              const SamplingOptions& options = {});

/// Classic independent inverse-transform sampling: x_ij = F_j^{-1}(U_{i*d+j}).
Matrix draw_independent_samples(std::span<const DistributionSpec> marginals, std::size_t n,
                                const RngStream& rng);

/// Latent-normal matrix (n x d) for the same stream layout; used for diagnostics.
Matrix draw_latent_samples(const CorrelationMatrix& sigma, std::size_t n, const RngStream& rng,
                           const SamplingOptions& options = {});

/// Fills `x` (length d) with draw `index` of the layout above. `factor` is
/// null for the identity shortcut. `g` and `z` are scratch of length d.
void draw_one(std::span<const DistributionSpec> marginals, const CorrelationFactor* factor,
              const RngStream& rng, std::uint64_t index, std::span<double> g, std::span<double> z,
              std::span<double> x);

}  // namespace bootcopula
