#pragma once

#include <functional>
#include <utility>

#include "stablab/metric.hpp"

namespace stablab {

struct Box {
  double x_lo, x_hi, y_lo, y_hi;
};

struct MinimizeResult {
  double x = 0.0;
  double y = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

/// Minimizes f over the box: a regular grid, then Nelder-Mead from the best
/// grid points and from seeded random points, iterates clamped to the box.
/// Deterministic for a fixed seed.
MinimizeResult minimize_box(const std::function<double(double, double)>& f, const Box& box,
                            const OptimizeOptions& options);

}  // namespace stablab
