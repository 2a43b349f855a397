#include "bootcopula/correlation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "bootcopula/error.hpp"

namespace bootcopula {
namespace {

using Violation = CorrelationError::Violation;

// Pivots at or below this are treated as exact zeros in the semi-definite Cholesky.
constexpr double kPivotTolerance = 1e-14;
// The direct Cholesky result is kept only when it reproduces sigma this closely.
constexpr double kDirectCholeskyTolerance = 1e-10;
constexpr double kFactorTolerance = 1e-8;

Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  }
  return out;
}

std::string at(std::size_t i, std::size_t j) {
  std::ostringstream out;
  out << "(" << i + 1 << "," << j + 1 << ")";
  return out.str();
}

// Cholesky that tolerates positive semi-definite input by zeroing columns
// whose pivot vanishes. Returns the rank found.
std::size_t semidefinite_cholesky(const Matrix& a, Matrix& lower) {
  const std::size_t d = a.rows();
  lower = Matrix(d, d);
  std::size_t rank = 0;
  for (std::size_t j = 0; j < d; ++j) {
    double pivot = a(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= lower(j, k) * lower(j, k);
    if (pivot <= kPivotTolerance) continue;
    const double root = std::sqrt(pivot);
    lower(j, j) = root;
    ++rank;
    for (std::size_t i = j + 1; i < d; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= lower(i, k) * lower(j, k);
      lower(i, j) = s / root;
    }
  }
  return rank;
}

double max_abs_diff_llt(const Matrix& lower, const Matrix& target) {
  const std::size_t d = target.rows();
  double worst = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s += lower(i, k) * lower(j, k);
      worst = std::max(worst, std::fabs(s - target(i, j)));
    }
  }
  return worst;
}

}  // namespace

CorrelationMatrix CorrelationMatrix::validate(const Matrix& raw, bool symmetrize) {
  if (!raw.square() || raw.rows() == 0) {
    throw CorrelationError(Violation::shape, "correlation matrix must be square and non-empty");
  }
  const std::size_t d = raw.rows();
  Matrix m = raw;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (!std::isfinite(m(i, j))) {
        throw CorrelationError(Violation::non_finite, "non-finite correlation entry at " + at(i, j));
      }
    }
  }
  if (symmetrize) {
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i + 1; j < d; ++j) {
        const double avg = 0.5 * (m(i, j) + m(j, i));
        m(i, j) = avg;
        m(j, i) = avg;
      }
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      if (m(i, j) != m(j, i)) {
        throw CorrelationError(Violation::asymmetric,
                               "correlation matrix not symmetric at " + at(i, j));
      }
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (m(i, i) != 1.0) {
      throw CorrelationError(Violation::diagonal_not_unit,
                             "correlation matrix diagonal not unit at " + at(i, i));
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (std::fabs(m(i, j)) > 1.0) {
        throw CorrelationError(Violation::out_of_range,
                               "correlation entry outside [-1, 1] at " + at(i, j));
      }
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_eigen(m),
                                                              Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  const double max_eig = solver.eigenvalues().maxCoeff();
  if (min_eig < -kPsdTolerance) {
    std::ostringstream msg;
    msg << "correlation matrix not positive semi-definite (min eigenvalue " << min_eig << ")";
    throw CorrelationError(Violation::not_psd, msg.str());
  }
  return CorrelationMatrix(std::move(m), min_eig, max_eig);
}

CorrelationMatrix CorrelationMatrix::identity(std::size_t d) {
  return CorrelationMatrix(Matrix::identity(d), 1.0, 1.0);
}

CorrelationMatrix CorrelationMatrix::bivariate(double rho) {
  Matrix m = Matrix::identity(2);
  m(0, 1) = rho;
  m(1, 0) = rho;
  return validate(m);
}

bool CorrelationMatrix::is_identity() const noexcept {
  return entries_ == Matrix::identity(dimension());
}

CorrelationFactor factor_correlation(const CorrelationMatrix& sigma) {
  const Matrix& a = sigma.entries();
  Matrix lower;
  const std::size_t rank = semidefinite_cholesky(a, lower);
  if (max_abs_diff_llt(lower, a) <= kDirectCholeskyTolerance) return {std::move(lower), rank};

  // Near-singular input: clamp the spectrum, take a symmetric square root,
  // and triangularize it with QR so that L = R^T.
  const std::size_t d = a.rows();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_eigen(a));
  const Eigen::VectorXd clamped = solver.eigenvalues().cwiseMax(0.0);
  const Eigen::MatrixXd root = solver.eigenvectors() * clamped.cwiseSqrt().asDiagonal();
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(root.transpose());
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  std::size_t eig_rank = 0;
  for (Eigen::Index k = 0; k < clamped.size(); ++k) {
    if (clamped(k) > kPsdTolerance) ++eig_rank;
  }
  lower = Matrix(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    const double sign = r(i, i) < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = i; j < d; ++j) lower(j, i) = sign * r(i, j);
  }
  const double err = max_abs_diff_llt(lower, a);
  if (err > kFactorTolerance) {
    std::ostringstream msg;
    msg << "correlation factorization error " << err << " exceeds " << kFactorTolerance;
    throw CorrelationError(Violation::not_psd, msg.str());
  }
  return {std::move(lower), eig_rank};
}

double reconstruction_error(const CorrelationFactor& factor, const CorrelationMatrix& sigma) {
  return max_abs_diff_llt(factor.lower, sigma.entries());
}

}  // namespace bootcopula
