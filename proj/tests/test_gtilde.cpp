#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stablab/acceptance.hpp"
#include "stablab/error.hpp"
#include "stablab/gtilde.hpp"
#include "stablab/io.hpp"

using namespace stablab;

namespace {

const std::string kModels = STABLAB_MODELS_DIR;
constexpr double kPi = std::numbers::pi;

double matrix_gap(const GroupElement& a, const GroupElement& b) {
  double m = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m = std::max(m, std::abs(a.matrix()[i][j] - b.matrix()[i][j]));
  return m;
}

double theta_gap(const GroupElement& a, const GroupElement& b) {
  double m = 0.0;
  for (int i = 0; i <= 64; ++i) m = std::max(m, std::abs(a.theta(i / 64.0) - b.theta(i / 64.0)));
  return m;
}

// Displacement by brute force: dense sampling of theta and singular values
// from the eigenvalues of T^t T.
double delta_oracle(const GroupElement& g) {
  const auto& t = g.matrix();
  double sup = 0.0;
  for (int i = 0; i < 20000; ++i) {
    double s = i / 20000.0;
    sup = std::max(sup, std::abs(g.theta(s) - s));
  }
  double a = t[0][0] * t[0][0] + t[1][0] * t[1][0];
  double b = t[0][0] * t[0][1] + t[1][0] * t[1][1];
  double d = t[0][1] * t[0][1] + t[1][1] * t[1][1];
  double tr = a + d, disc = std::sqrt((a - d) * (a - d) + 4 * b * b);
  double l1 = (tr + disc) / 2, l2 = (tr - disc) / 2;
  return std::max({sup, 0.5 * std::log(l1), -0.5 * std::log(l2)});
}

}  // namespace

TEST_CASE("theta of identity and diagonal elements") {
  GroupElement e = GroupElement::identity();
  for (double t : {-1.3, 0.0, 0.25, 0.9, 2.5}) CHECK(theta_eval(e, t) == doctest::Approx(t));
  GroupElement d = GroupElement::diagonal(2.0, 0.5);
  CHECK(theta_eval(d, 0.25) == doctest::Approx(std::atan(0.25) / kPi));
  CHECK(theta_eval(d, 0.5) == doctest::Approx(0.5));
  CHECK(theta_eval(GroupElement::diagonal(7.0, 0.1), 0.5) == doctest::Approx(0.5));
  CHECK(theta_eval(d, 1.25) == doctest::Approx(1.0 + std::atan(0.25) / kPi));
  CHECK(theta_eval(GroupElement::diagonal(2.0, 0.5, 1), 0.0) == doctest::Approx(2.0));
}

TEST_CASE("composition and inverses") {
  GroupElement e = GroupElement::identity();
  GroupElement r = GroupElement::rotation(1.0 / 3);
  GroupElement d = GroupElement::diagonal(2.0, 0.5);
  CHECK(matrix_gap(g_compose(e, d), d) <= 1e-15);
  CHECK(theta_gap(g_compose(e, d), d) <= 1e-12);
  GroupElement rr = g_compose(r, r);
  for (double t : {0.0, 0.3, 0.8}) CHECK(rr.theta(t) == doctest::Approx(t + 2.0 / 3));

  CHECK(theta_gap(g_inverse(e), e) <= 1e-12);
  GroupElement ri = g_inverse(r);
  for (double t : {0.0, 0.3, 0.8}) CHECK(ri.theta(t) == doctest::Approx(t - 1.0 / 3));

  GroupElement di = g_inverse(d);
  for (double t : {-0.45, -0.2, 0.0, 0.1, 0.4}) CHECK(di.theta(t) == doctest::Approx(std::atan(4 * std::tan(kPi * t)) / kPi));

  Rng rng(4);
  for (int k = 0; k < 20; ++k) {
    GroupElement g = random_group_element(rng);
    GroupElement gi = g_compose(g, g_inverse(g));
    CHECK(matrix_gap(gi, e) <= 1e-12);
    CHECK(theta_gap(gi, e) <= 1e-12);
    CHECK(theta_residual(g) <= 1e-9);
  }
}

TEST_CASE("displacement") {
  CHECK(delta(GroupElement::identity()) == 0.0);
  CHECK(delta(GroupElement::rotation(1.0 / 3)) == doctest::Approx(1.0 / 3));
  for (std::complex<double> l : {std::complex<double>(0.3, 0.0), {-0.2, 0.1}, {0.05, -0.2}, {1.5, 0.0}})
    CHECK(delta(c_embed(l)) == doctest::Approx(std::max(std::abs(l.real()), kPi * std::abs(l.imag()))));
  Rng rng(6);
  for (int k = 0; k < 20; ++k) {
    GroupElement g = random_group_element(rng);
    CHECK(delta(g) == doctest::Approx(delta_oracle(g)).epsilon(1e-6));
  }
}

TEST_CASE("dG is a left-invariant metric") {
  GroupElement e = GroupElement::identity();
  CHECK(dG(e, e) == 0.0);
  CHECK(dG(e, GroupElement::rotation(1.0 / 3)) == doctest::Approx(1.0 / 3));
  Rng rng(7);
  for (int k = 0; k < 20; ++k) {
    GroupElement f = random_group_element(rng), g = random_group_element(rng), h = random_group_element(rng);
    CHECK(dG(g, g) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(dG(g_compose(f, g), g_compose(f, h)) - dG(g, h)) <= 1e-9);
    CHECK(std::abs(dG(g, h) - dG(h, g)) <= 1e-9);
    CHECK(dG(g, h) <= dG(g, f) + dG(f, h) + 1e-9);
  }
}

TEST_CASE("projection to the upper half-plane") {
  CHECK(std::abs(mobius_project(GroupElement::identity()) - std::complex<double>(0, 1)) <= 1e-15);
  CHECK(std::abs(mobius_project(GroupElement::diagonal(2.0, 0.5)) - std::complex<double>(0, 4)) <= 1e-12);
  Rng rng(8);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 20; ++k) {
    GroupElement g = random_group_element(rng);
    GroupElement gl = g_compose(g, c_embed({u(rng), u(rng)}));
    CHECK(std::abs(mobius_project(gl) - mobius_project(g)) <= 1e-12 * std::abs(mobius_project(g)) + 1e-12);
  }
}

TEST_CASE("hyperbolic distance") {
  std::complex<double> i(0, 1);
  CHECK(hyp_distance(i, i) == 0.0);
  for (double a : {2.0, 4.0, 10.0}) CHECK(hyp_distance(i, a * i) == doctest::Approx(std::log(a)));
  Rng rng(10);
  std::uniform_real_distribution<double> u(-2, 2), v(0.2, 3);
  for (int k = 0; k < 20; ++k) {
    std::complex<double> z(u(rng), v(rng)), w(u(rng), v(rng));
    double a = u(rng), b = u(rng), c = u(rng);
    if (std::abs(a) < 0.1) continue;
    double d = (1 + b * c) / a;  // ad - bc = 1
    auto mob = [&](std::complex<double> x) { return (a * x + b) / (c * x + d); };
    CHECK(std::abs(hyp_distance(mob(z), mob(w)) - hyp_distance(z, w)) <= 1e-12 * (1 + hyp_distance(z, w)) * 10);
  }
  CHECK_THROWS_AS(hyp_distance(i, std::complex<double>(1, 0)), Error);
}

TEST_CASE("quotient metric on the cover") {
  GroupElement e = GroupElement::identity();
  CHECK(quotient_distance_G(e, e).value == 0.0);
  GroupElement h = GroupElement::diagonal(2.0, 0.5);
  CHECK(std::abs(quotient_distance_G(e, h).value - 0.5 * std::log(4.0)) <= 1e-3);
  Rng rng(12);
  for (int k = 0; k < 3; ++k) {
    GroupElement g = random_group_element(rng), f = random_group_element(rng);
    double half = 0.5 * hyp_distance(mobius_project(g), mobius_project(f));
    CHECK(std::abs(quotient_distance_G(g, f).value - half) <= 1e-2);
  }
}

TEST_CASE("action on stability conditions") {
  auto m = io::load_model(kModels + "/a2.json");
  StabilityCondition s = io::load_stability(m, kModels + "/sigma_a2.json");
  StabilityCondition same = g_act(s, GroupElement::identity());
  CHECK(same.heart() == s.heart());
  CHECK(distance(s, same).value() <= 1e-12);

  for (std::complex<double> l : {std::complex<double>(0.3, 0.1), {-0.4, -0.2}, {1.2, 0.0}}) {
    StabilityCondition a = g_act(s, c_embed(l)), b = c_act(s, l);
    CHECK(a.heart() == b.heart());
    CHECK(distance(a, b).value() <= 1e-9);
  }

  Rng rng(13);
  for (int k = 0; k < 20; ++k) {
    StabilityCondition t = random_stability(m, rng);
    GroupElement g = random_group_element(rng);
    StabilityCondition gt = g_act(t, g);
    for (int b = 0; b < 3; ++b) {
      ObjectExpr c = IndecomposableRef{b, 0};
      CHECK(semistable_phase(t, c).has_value() == semistable_phase(gt, c).has_value());
    }
  }
}

TEST_CASE("matrices need positive determinant") {
  CHECK_THROWS_AS(GroupElement(Matrix2{{{1.0, 0.0}, {0.0, -1.0}}}, 0), Error);
  CHECK_THROWS_AS(GroupElement(Matrix2{{{1.0, 2.0}, {0.5, 1.0}}}, 0), Error);
}
