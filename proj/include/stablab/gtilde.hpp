#pragma once

#include <array>
#include <complex>

#include "stablab/metric.hpp"
#include "stablab/stability.hpp"

namespace stablab {

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Element (T, theta) of the universal cover of GL2+(R). theta is the lift
/// of the circle map of T with theta(0) in [0, 2) + 2 * lift.
class GroupElement {
 public:
  GroupElement() : GroupElement(Matrix2{{{1.0, 0.0}, {0.0, 1.0}}}, 0) {}
  GroupElement(Matrix2 t, long lift);

  static GroupElement identity() { return {}; }
  /// Rotation by pi * c with theta(t) = t + c.
  static GroupElement rotation(double c);
  static GroupElement diagonal(double a, double d, long lift = 0);

  const Matrix2& matrix() const { return t_; }
  long lift() const { return lift_; }
  double det() const { return t_[0][0] * t_[1][1] - t_[0][1] * t_[1][0]; }

  double theta(double t) const;

 private:
  Matrix2 t_;
  long lift_;
  double theta0_;  // theta(0)
  double arg0_;    // arg(T e_1) in [0, 2 pi)
};

double theta_eval(const GroupElement& g, double t);
GroupElement g_compose(const GroupElement& g, const GroupElement& h);
GroupElement g_inverse(const GroupElement& g);

/// max of sup |theta - id| on [0, 1), log of the largest singular value and
/// minus log of the smallest.
double delta(const GroupElement& g);
double dG(const GroupElement& g, const GroupElement& h);

/// Largest |arg(T e^{i pi t}) - pi theta(t)| (mod 2 pi) over a grid, plus
/// monotonicity and periodicity defects.
double theta_residual(const GroupElement& g, int grid = 1024);

/// C-subgroup element matching c_act: T = exp(-pi im) R(pi re), theta = t + re.
GroupElement c_embed(std::complex<double> lambda);

/// Charge T^{-1} Z, slicing P(theta(.)).
StabilityCondition g_act(const StabilityCondition& s, const GroupElement& g);

/// (a i + b) / (c i + d)
std::complex<double> mobius_project(const GroupElement& g);
double hyp_distance(std::complex<double> z, std::complex<double> w);

struct GQuotientResult {
  double value = 0.0;
  std::complex<double> lambda;
};

/// inf over lambda of dG(h c_embed(lambda), g), grid plus Nelder-Mead.
GQuotientResult quotient_distance_G(const GroupElement& g, const GroupElement& h, const OptimizeOptions& options = {});

}  // namespace stablab
