#include "stablab/gtilde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stablab/error.hpp"
#include "stablab/optimize.hpp"

namespace stablab {

namespace {

constexpr double kPi = std::numbers::pi;

double arg_2pi(double x, double y) {
  double a = std::atan2(y, x);
  return a < 0 ? a + 2 * kPi : a;
}

double arg0_of(const Matrix2& t) { return arg_2pi(t[0][0], t[1][0]); }

/// The element with matrix t whose theta(0) is the lift closest to theta0.
GroupElement with_theta0(const Matrix2& t, double theta0) {
  return GroupElement(t, std::lround((theta0 - arg0_of(t) / kPi) / 2.0));
}

Matrix2 multiply(const Matrix2& a, const Matrix2& b) {
  Matrix2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

Matrix2 inverse(const Matrix2& a) {
  const double d = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  return {{{a[1][1] / d, -a[0][1] / d}, {-a[1][0] / d, a[0][0] / d}}};
}

std::pair<double, double> singular_values(const Matrix2& a) {
  const double s = a[0][0] * a[0][0] + a[0][1] * a[0][1] + a[1][0] * a[1][0] + a[1][1] * a[1][1];
  const double d = std::abs(a[0][0] * a[1][1] - a[0][1] * a[1][0]);
  const double r = std::sqrt(std::max(0.0, s * s - 4 * d * d));
  const double big = std::sqrt((s + r) / 2);
  return {big, d / big};
}

}  // namespace

GroupElement::GroupElement(Matrix2 t, long lift) : t_(t), lift_(lift) {
  if (!(det() > 0.0)) throw Error(ErrorKind::Domain, "group element matrix must have positive determinant");
  arg0_ = arg0_of(t_);
  theta0_ = arg0_ / kPi + 2.0 * static_cast<double>(lift_);
}

GroupElement GroupElement::rotation(double c) {
  Matrix2 r{{{std::cos(kPi * c), -std::sin(kPi * c)}, {std::sin(kPi * c), std::cos(kPi * c)}}};
  return with_theta0(r, c);
}

GroupElement GroupElement::diagonal(double a, double d, long lift) { return GroupElement(Matrix2{{{a, 0.0}, {0.0, d}}}, lift); }

double GroupElement::theta(double t) const {
  const double n = std::floor(t);
  const double s = t - n;
  const double x = std::cos(kPi * s), y = std::sin(kPi * s);
  double diff = arg_2pi(t_[0][0] * x + t_[0][1] * y, t_[1][0] * x + t_[1][1] * y) - arg0_;
  if (diff < 0) diff += 2 * kPi;
  // s in [0, 1) sweeps an angle in [0, pi); a value near 2 pi is rounding below 0
  if (diff > 1.5 * kPi) diff -= 2 * kPi;
  return n + theta0_ + diff / kPi;
}

double theta_eval(const GroupElement& g, double t) { return g.theta(t); }

GroupElement g_compose(const GroupElement& g, const GroupElement& h) {
  return with_theta0(multiply(g.matrix(), h.matrix()), g.theta(h.theta(0.0)));
}

GroupElement g_inverse(const GroupElement& g) {
  // theta(t) - t lies within 1 of theta(0), so the root of theta is within
  // this bracket
  const double t0 = g.theta(0.0);
  double lo = -t0 - 2.0, hi = -t0 + 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++i) {
    double mid = (lo + hi) / 2;
    (g.theta(mid) < 0.0 ? lo : hi) = mid;
  }
  return with_theta0(inverse(g.matrix()), (lo + hi) / 2);
}

double delta(const GroupElement& g) {
  const Matrix2& t = g.matrix();
  if (g.lift() == 0 && t[0][0] == 1.0 && t[1][1] == 1.0 && t[0][1] == 0.0 && t[1][0] == 0.0) return 0.0;

  constexpr int n = 4096;
  auto dev = [&](double x) { return std::abs(g.theta(x) - x); };
  int best = 0;
  double top = -1.0;
  for (int i = 0; i < n; ++i) {
    double v = dev(static_cast<double>(i) / n);
    if (v > top) {
      top = v;
      best = i;
    }
  }
  // golden-section refinement around the grid maximum (theta - id has period 1)
  const double phi = (std::sqrt(5.0) - 1) / 2;
  double a = (best - 1.0) / n, b = (best + 1.0) / n;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = dev(c), fd = dev(d);
  while (b - a > 1e-9) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = dev(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = dev(d);
    }
  }
  const double sup = std::max({top, fc, fd});
  auto [big, small] = singular_values(t);
  return std::max({sup, std::log(big), -std::log(small)});
}

double dG(const GroupElement& g, const GroupElement& h) { return delta(g_compose(g_inverse(h), g)); }

double theta_residual(const GroupElement& g, int grid) {
  double worst = 0.0;
  double prev = g.theta(-1.0 / grid);
  for (int i = 0; i < 2 * grid; ++i) {
    const double t = static_cast<double>(i) / grid;
    const double th = g.theta(t);
    const auto& m = g.matrix();
    const double x = std::cos(kPi * t), y = std::sin(kPi * t);
    const double a = std::atan2(m[1][0] * x + m[1][1] * y, m[0][0] * x + m[0][1] * y);
    worst = std::max(worst, std::abs(std::remainder(a - kPi * th, 2 * kPi)));
    worst = std::max(worst, std::abs(g.theta(t + 1.0) - th - 1.0));
    if (!(th > prev)) worst = std::max(worst, prev - th + 1.0);
    prev = th;
  }
  return worst;
}

GroupElement c_embed(std::complex<double> lambda) {
  const double s = std::exp(-kPi * lambda.imag());
  const double a = kPi * lambda.real();
  Matrix2 t{{{s * std::cos(a), -s * std::sin(a)}, {s * std::sin(a), s * std::cos(a)}}};
  return with_theta0(t, lambda.real());
}

StabilityCondition g_act(const StabilityCondition& s, const GroupElement& g) {
  s.require_valid();
  const Matrix2 inv = inverse(g.matrix());
  CentralCharge z;
  for (const auto& v : s.charge().values) {
    const double x = v.real(), y = v.imag();
    z.values.push_back(ComplexValue(std::complex<double>(inv[0][0] * x + inv[0][1] * y, inv[1][0] * x + inv[1][1] * y)));
  }
  return StabilityCondition(s.model(), slice_heart(s, g.theta(0.0)), std::move(z));
}

std::complex<double> mobius_project(const GroupElement& g) {
  const auto& m = g.matrix();
  const std::complex<double> i(0.0, 1.0);
  return (m[0][0] * i + m[0][1]) / (m[1][0] * i + m[1][1]);
}

double hyp_distance(std::complex<double> z, std::complex<double> w) {
  if (!(z.imag() > 0.0) || !(w.imag() > 0.0))
    throw Error(ErrorKind::Domain, "hyperbolic distance needs points of the open upper half-plane");
  return 2.0 * std::asinh(std::abs(z - w) / (2.0 * std::sqrt(z.imag() * w.imag())));
}

GQuotientResult quotient_distance_G(const GroupElement& g, const GroupElement& h, const OptimizeOptions& options) {
  const double d = dG(g, h);
  if (d == 0.0) return {0.0, {0.0, 0.0}};
  // dG(h c(l), g) = delta(c(-l) h^{-1} g)
  const GroupElement k = g_compose(g_inverse(h), g);
  auto objective = [&](double x, double y) { return delta(g_compose(c_embed({-x, -y}), k)); };
  double lo = 1e300, hi = -1e300;
  for (int i = 0; i < 256; ++i) {
    const double t = i / 256.0;
    lo = std::min(lo, k.theta(t) - t);
    hi = std::max(hi, k.theta(t) - t);
  }
  const double centre = std::round((lo + hi) / 2);
  const double ybound = d / kPi;
  MinimizeResult r = minimize_box(objective, {centre - 1.0, centre + 1.0, -ybound, ybound}, options);
  return {r.value, {r.x, r.y}};
}

}  // namespace stablab
