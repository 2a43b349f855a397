#include "bootcopula/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bootcopula {
namespace {

double safe_eval(const std::function<double(const std::vector<double>&)>& f,
                 const std::vector<double>& x) {
  const double v = f(x);
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

double diameter(const std::vector<std::vector<double>>& simplex) {
  double d = 0.0;
  for (std::size_t i = 1; i < simplex.size(); ++i) {
    for (std::size_t k = 0; k < simplex[0].size(); ++k) {
      d = std::max(d, std::fabs(simplex[i][k] - simplex[0][k]));
    }
  }
  return d;
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             std::vector<double> start, const NelderMeadOptions& options) {
  const std::size_t n = start.size();
  std::vector<std::vector<double>> simplex(n + 1, start);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += options.initial_step;
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i <= n; ++i) values[i] = safe_eval(objective, simplex[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);
  std::size_t iter = 0;
  bool converged = false;
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<std::vector<double>> s(n + 1);
    std::vector<double> v(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      s[i] = std::move(simplex[order[i]]);
      v[i] = values[order[i]];
    }
    simplex = std::move(s);
    values = std::move(v);
  };

  sort_simplex();
  for (; iter < options.max_iterations; ++iter) {
    if (diameter(simplex) < options.diameter_tolerance) {
      converged = true;
      break;
    }
    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / static_cast<double>(n);
    }
    const auto& worst = simplex[n];
    for (std::size_t k = 0; k < n; ++k) trial[k] = centroid[k] + (centroid[k] - worst[k]);
    const double reflected = safe_eval(objective, trial);

    if (reflected < values[0]) {
      for (std::size_t k = 0; k < n; ++k) trial2[k] = centroid[k] + 2.0 * (centroid[k] - worst[k]);
      const double expanded = safe_eval(objective, trial2);
      if (expanded < reflected) {
        simplex[n] = trial2;
        values[n] = expanded;
      } else {
        simplex[n] = trial;
        values[n] = reflected;
      }
    } else if (reflected < values[n - 1]) {
      simplex[n] = trial;
      values[n] = reflected;
    } else {
      const bool outside = reflected < values[n];
      for (std::size_t k = 0; k < n; ++k) {
        trial2[k] = outside ? centroid[k] + 0.5 * (trial[k] - centroid[k])
                            : centroid[k] + 0.5 * (worst[k] - centroid[k]);
      }
      const double contracted = safe_eval(objective, trial2);
      if (contracted < std::min(reflected, values[n])) {
        simplex[n] = trial2;
        values[n] = contracted;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t k = 0; k < n; ++k) {
            simplex[i][k] = simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k]);
          }
          values[i] = safe_eval(objective, simplex[i]);
        }
      }
    }
    sort_simplex();
  }
  return {simplex[0], values[0], iter, converged};
}

}  // namespace bootcopula
