#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stablab/acceptance.hpp"
#include "stablab/error.hpp"
#include "stablab/gtilde.hpp"
#include "stablab/io.hpp"
#include "stablab/metric.hpp"
#include "stablab/oracle.hpp"

using namespace stablab;

namespace {

const std::string kModels = STABLAB_MODELS_DIR;
constexpr double kPi = std::numbers::pi;

ComplexValue cv(std::int64_t re, std::int64_t im) { return ComplexValue(Rational(re), Rational(im)); }

StabilityCondition tenth_turn(const ModelPtr& m) {
  Heart h = standard_heart(*m);
  return StabilityCondition(m, h, charge_from_simples(*m, h, {cv(0, 1), ComplexValue(std::polar(1.0, kPi / 10))}));
}

// sup over every object of dimension <= (2,2) and shifts -1..1, by brute force
double distance_over_objects(const StabilityCondition& s, const StabilityCondition& t) {
  const auto& m = s.category();
  double best = 0.0;
  for (const auto& rep : oracle::all_representations(*m.quiver, 2)) {
    ObjectExpr c = oracle::decompose(m, rep);
    for (int k = -1; k <= 1; ++k) {
      PhaseData a = phase_data(s, c.shifted(k)), b = phase_data(t, c.shifted(k));
      best = std::max({best, std::abs(a.phi_minus - b.phi_minus), std::abs(a.phi_plus - b.phi_plus),
                       std::abs(std::log(a.mass / b.mass))});
    }
  }
  return best;
}

}  // namespace

TEST_CASE("distance to itself is zero") {
  auto m = io::load_model(kModels + "/a2.json");
  StabilityCondition s = io::load_stability(m, kModels + "/sigma_a2.json");
  CHECK(distance(s, s).value() == 0.0);
  CHECK(MetricValue::infinity().infinite());
  CHECK(MetricValue::infinity().str() == "inf");
  CHECK_THROWS_AS(MetricValue(-1.0), Error);
}

TEST_CASE("orbit formula on the worked examples") {
  auto m = io::load_model(kModels + "/a2.json");
  StabilityCondition s = tenth_turn(m);
  CHECK(distance(s, c_act(s, 0.2)).value() == doctest::Approx(0.2).epsilon(1e-12));
  DistanceResult d = distance_with_witness(s, c_act(s, {0.1, 0.3}));
  CHECK(d.value.value() == doctest::Approx(0.3 * kPi).epsilon(1e-12));
  CHECK(d.term == "log-mass");
  CHECK(distance_with_witness(s, c_act(s, 0.2)).term.rfind("phi", 0) == 0);
}

TEST_CASE("distance agrees with the sup over all small objects") {
  auto m = io::load_model(kModels + "/a2.json");
  Rng rng(3);
  for (int k = 0; k < 15; ++k) {
    StabilityCondition s = random_stability(m, rng), t = random_stability(m, rng);
    CHECK(distance(s, t).value() == doctest::Approx(distance_over_objects(s, t)).epsilon(1e-12));
  }
}

TEST_CASE("C action: identity, shift and rescaling") {
  auto m = io::load_model(kModels + "/a2.json");
  StabilityCondition s = io::load_stability(m, kModels + "/sigma_a2.json");
  StabilityCondition z = c_act(s, 0.0);
  CHECK(z.heart() == s.heart());
  CHECK(z.charge().values == s.charge().values);

  StabilityCondition one = c_act(s, 1.0);
  CHECK(one.exact());
  CHECK(one.heart() == s.heart().shifted(1));
  for (std::size_t i = 0; i < s.charge().values.size(); ++i) CHECK(one.charge().values[i] == -s.charge().values[i]);
  CHECK(distance(s, one).value() == doctest::Approx(1.0));

  StabilityCondition r = c_act(s, {0.0, 1.0});
  CHECK(r.heart() == s.heart());
  for (std::size_t i = 0; i < s.charge().values.size(); ++i) {
    auto a = r.charge().values[i].approx(), b = s.charge().values[i].approx();
    CHECK(std::abs(a - std::exp(kPi) * b) <= 1e-9 * std::abs(a));
  }
}

TEST_CASE("slices of the fixture") {
  auto m = io::load_model(kModels + "/a2.json");
  StabilityCondition s = io::load_stability(m, kModels + "/sigma_a2.json");
  CHECK(slice_heart(s, 0.0) == s.heart());
  CHECK(slice_heart(s, 1.0) == s.heart().shifted(1));
  CHECK(slice_heart(s, -2.0) == s.heart().shifted(-2));
  // S2 (phase 1/4) leaves first
  Heart h = slice_heart(s, 0.3);
  CHECK(h.contains(m->parse_ref("S2[1]")));
  CHECK(h.contains(m->parse_ref("S1")));
}

TEST_CASE("window references") {
  auto m = io::load_model(kModels + "/a2.json");
  CHECK(window_refs(*m, 0).size() == 3);
  CHECK(window_refs(*m, 2).size() == 15);
}

TEST_CASE("different models are a mismatch") {
  auto a1 = io::load_model(kModels + "/a1.json");
  auto a2 = io::load_model(kModels + "/a2.json");
  StabilityCondition s = io::load_stability(a2, kModels + "/sigma_a2.json");
  Heart h = standard_heart(*a1);
  StabilityCondition t(a1, h, CentralCharge{{cv(0, 1)}});
  try {
    distance(s, t);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ModelMismatch);
  }
}

TEST_CASE("quotient distance vanishes on one orbit") {
  auto m = io::load_model(kModels + "/a2.json");
  StabilityCondition s = tenth_turn(m);
  QuotientResult same = quotient_distance_stab(s, s);
  CHECK(same.value.value() == 0.0);
  CHECK(same.lambda == std::complex<double>(0.0, 0.0));
  QuotientResult q = quotient_distance_stab(s, c_act(s, {0.35, -0.2}));
  CHECK(q.value.value() <= 1e-4);
  CHECK(q.lambda.real() == doctest::Approx(-0.35).epsilon(1e-3));
  CHECK(q.lambda.imag() == doctest::Approx(0.2).epsilon(1e-3));
}

TEST_CASE("quotient distance is at most the distance and the cover bound") {
  auto m = io::load_model(kModels + "/a2.json");
  StabilityCondition s = tenth_turn(m);
  Rng rng(9);
  for (int k = 0; k < 5; ++k) {
    StabilityCondition t = random_stability(m, rng);
    CHECK(quotient_distance_stab(s, t).value.value() <= distance(s, t).value() + 1e-12);
  }
  GroupElement g = GroupElement::diagonal(std::sqrt(2.0), 1.0 / std::sqrt(2.0));
  StabilityCondition t = g_act(s, g);
  CHECK(quotient_distance_stab(s, t).value.value() <= quotient_distance_G(GroupElement::identity(), g).value + 1e-3);
}
