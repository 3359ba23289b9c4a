#include "stablab/optimize.hpp"

#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <memory>
#include <random>
#include <vector>

#include "stablab/error.hpp"

namespace stablab {

namespace {

struct Objective {
  const std::function<double(double, double)>* f;
  Box box;
  int evaluations = 0;

  std::pair<double, double> clamp(double x, double y) const {
    return {std::clamp(x, box.x_lo, box.x_hi), std::clamp(y, box.y_lo, box.y_hi)};
  }
  double operator()(double x, double y) {
    ++evaluations;
    auto [cx, cy] = clamp(x, y);
    return (*f)(cx, cy);
  }
};

double gsl_objective(const gsl_vector* v, void* params) {
  auto* obj = static_cast<Objective*>(params);
  return (*obj)(gsl_vector_get(v, 0), gsl_vector_get(v, 1));
}

struct Point {
  double x, y, f;
};

using MinimizerPtr = std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)>;
using VectorPtr = std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)>;

Point simplex(Objective& obj, Point start, double step, double tol, int max_iter) {
  gsl_multimin_function fn{&gsl_objective, 2, &obj};
  MinimizerPtr m(gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2), &gsl_multimin_fminimizer_free);
  VectorPtr x(gsl_vector_alloc(2), &gsl_vector_free);
  VectorPtr s(gsl_vector_alloc(2), &gsl_vector_free);
  if (!m || !x || !s) throw Error(ErrorKind::Diagnostic, "optimizer allocation failed");
  gsl_vector_set(x.get(), 0, start.x);
  gsl_vector_set(x.get(), 1, start.y);
  gsl_vector_set_all(s.get(), step);
  gsl_multimin_fminimizer_set(m.get(), &fn, x.get(), s.get());
  for (int it = 0; it < max_iter; ++it) {
    if (gsl_multimin_fminimizer_iterate(m.get()) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m.get()), tol) == GSL_SUCCESS) break;
  }
  auto [cx, cy] = obj.clamp(gsl_vector_get(m->x, 0), gsl_vector_get(m->x, 1));
  return {cx, cy, gsl_multimin_fminimizer_minimum(m.get())};
}

}  // namespace

MinimizeResult minimize_box(const std::function<double(double, double)>& f, const Box& box,
                            const OptimizeOptions& options) {
  Objective obj{&f, box};
  const int n = std::max(2, options.grid);
  const double dx = (box.x_hi - box.x_lo) / (n - 1);
  const double dy = (box.y_hi - box.y_lo) / (n - 1);
  std::vector<Point> grid;
  grid.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = box.x_lo + i * dx, y = box.y_lo + j * dy;
      grid.push_back({x, y, obj(x, y)});
    }
  std::stable_sort(grid.begin(), grid.end(), [](const Point& a, const Point& b) { return a.f < b.f; });

  std::vector<Point> starts(grid.begin(), grid.begin() + std::min<std::size_t>(3, grid.size()));
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> ux(box.x_lo, box.x_hi), uy(box.y_lo, box.y_hi);
  for (int i = 0; i < options.random_starts; ++i) {
    const double x = ux(rng), y = uy(rng);
    starts.push_back({x, y, obj(x, y)});
  }

  const double step = std::max({dx, dy, 1e-3});
  // polish well below the reported tolerance
  const double inner_tol = options.tolerance * 1e-3;
  Point best = grid.front();
  for (const auto& s : starts) {
    Point p = simplex(obj, s, step, inner_tol, options.max_iterations);
    // restart from the result: a collapsed simplex can stall on a kink
    p = simplex(obj, p, step / 8, inner_tol, options.max_iterations);
    if (p.f < best.f) best = p;
  }
  return {best.x, best.y, best.f, obj.evaluations};
}

}  // namespace stablab
