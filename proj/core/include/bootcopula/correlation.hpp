#pragma once

#include <cstddef>

#include "bootcopula/matrix.hpp"

namespace bootcopula {

/// Negative eigenvalues down to this value are treated as rounding noise.
inline constexpr double kPsdTolerance = 1e-10;

/// A validated Gaussian-copula correlation matrix: symmetric, unit diagonal,
/// entries in [-1, 1], positive semi-definite.
class CorrelationMatrix {
 public:
  /// Validates `raw`, throwing CorrelationError naming the first violated
  /// invariant (shape, non-finite, asymmetric, diagonal, range, PSD).
  /// With `symmetrize`, the matrix is replaced by (A + A^T) / 2 first.
  static CorrelationMatrix validate(const Matrix& raw, bool symmetrize = false);

  static CorrelationMatrix identity(std::size_t d);

  /// Two-dimensional matrix with off-diagonal `rho`.
  static CorrelationMatrix bivariate(double rho);

  std::size_t dimension() const noexcept { return entries_.rows(); }
  const Matrix& entries() const noexcept { return entries_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return entries_(i, j); }

  double min_eigenvalue() const noexcept { return min_eigenvalue_; }
  double max_eigenvalue() const noexcept { return max_eigenvalue_; }
  bool is_identity() const noexcept;

 private:
  CorrelationMatrix(Matrix entries, double min_eig, double max_eig)
      : entries_(std::move(entries)), min_eigenvalue_(min_eig), max_eigenvalue_(max_eig) {}

  Matrix entries_;
  double min_eigenvalue_;
  double max_eigenvalue_;
};

/// Lower-triangular L with L * L^T equal to the correlation matrix.
struct CorrelationFactor {
  Matrix lower;
  std::size_t rank;
};

/// Cholesky factorization. When the matrix is singular (for example perfect
/// correlation) the eigenvalues are clamped at zero, the matrix rebuilt, and
/// a semi-definite Cholesky run that zeroes columns with vanishing pivots.
CorrelationFactor factor_correlation(const CorrelationMatrix& sigma);

/// max_ij |(L L^T)_ij - sigma_ij|.
double reconstruction_error(const CorrelationFactor& factor, const CorrelationMatrix& sigma);

}  // namespace bootcopula
