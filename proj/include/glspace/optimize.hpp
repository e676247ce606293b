#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace glspace {

struct SupOptions {
  /// Golden-section polish of the best grid bracket. Off = plain grid maximum.
  bool refine = true;
  double rel_tol = 1e-10;
  int max_iter = 200;
};

struct SupResult {
  double value;   ///< supremum of the objective (log scale for log objectives)
  double argmax;  ///< abscissa where it was attained
  std::size_t grid_index;
};

/// Maximizes `objective` over the sorted `points`, then (optionally) runs a
/// golden-section search on the bracket [x_{i-1}, x_{i+1}] around the best
/// grid point i. The result is never below the grid maximum. Points where the
/// objective is -inf or NaN are ignored; at least one finite value is required.
SupResult maximize_on_grid(std::span<const double> points, const std::function<double(double)>& objective,
                           const SupOptions& opts = {});

/// Golden-section search for the maximum of a unimodal function on [lo, hi].
SupResult golden_section_max(const std::function<double(double)>& objective, double lo, double hi,
                             double rel_tol = 1e-10, int max_iter = 200);

struct Integral {
  double value;
  bool converged;
};

/// Adaptive Simpson quadrature with Richardson correction.
Integral adaptive_simpson(const std::function<double(double)>& f, double lo, double hi, double rel_tol = 1e-12,
                          int max_depth = 40);

}  // namespace glspace
