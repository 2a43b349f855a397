#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace bootcopula {

struct NelderMeadOptions {
  double diameter_tolerance = 1e-12;
  std::size_t max_iterations = 500;
  double initial_step = 0.1;
};

struct NelderMeadResult {
  std::vector<double> point;
  double value;
  std::size_t iterations;
  bool converged;  ///< simplex diameter fell below tolerance
};

/// Derivative-free simplex minimization of `objective` from `start`.
/// Non-finite objective values are treated as +infinity.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             std::vector<double> start, const NelderMeadOptions& options = {});

}  // namespace bootcopula
