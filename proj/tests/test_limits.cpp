#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stablab/acceptance.hpp"
#include "stablab/error.hpp"
#include "stablab/io.hpp"
#include "stablab/limits.hpp"
#include "stablab/metric.hpp"
#include "stablab/tilting.hpp"

using namespace stablab;

namespace {

const std::string kModels = STABLAB_MODELS_DIR;
constexpr double kPi = std::numbers::pi;

ComplexValue cv(std::int64_t re, std::int64_t im) { return ComplexValue(Rational(re), Rational(im)); }

StabilitySequence constant_sequence(const StabilityCondition& s, int count) {
  std::vector<SequenceSample> samples;
  for (int n = 1; n <= count; ++n) samples.push_back({n, s});
  return make_sequence(s.model(), samples, s.charge(), {{1, 0.0}});
}

// c_act(s, -1/n): phases drift down onto those of s from above
StabilitySequence rotating_sequence(const StabilityCondition& s) {
  std::vector<SequenceSample> samples;
  std::vector<EpsilonStep> eps;
  for (int n = 2; n <= 400; ++n) {
    samples.push_back({n, c_act(s, -1.0 / n)});
    eps.push_back({n, 1.0 / n + 1e-12});
  }
  return make_sequence(s.model(), samples, s.charge(), eps);
}

Heart heart_of(const CategoryModel& m, std::vector<std::string> names) {
  std::vector<IndecomposableRef> r;
  for (const auto& n : names) r.push_back(m.parse_ref(n));
  return make_heart(m, r);
}

}  // namespace

TEST_CASE("limiting phases of the fixture sequence") {
  auto m = io::load_model(kModels + "/a2.json");
  StabilitySequence seq = a2_completeness_sequence(m, 1000);
  CHECK(seq.validate().ok());

  LimitingPhase s2 = limiting_phase(seq, m->parse_object("S2"));
  CHECK_FALSE(s2.split);
  CHECK(s2.theta == doctest::Approx(0.0).epsilon(1e-12));

  LimitingPhase x = limiting_phase(seq, m->parse_object("X"));
  CHECK_FALSE(x.split);
  CHECK(x.theta == doctest::Approx(0.25));
  // phi_n(X) = arg(1 + i(1 + 1/n))/pi stays within 2/n of 1/4 from the start
  CHECK(x.stable_from == 1);

  CHECK(limiting_phase(seq, m->parse_object("S1+S2")).split);
  CHECK(limiting_phase(seq, m->parse_object("S2[2]")).theta == doctest::Approx(2.0));
}

TEST_CASE("limiting filtrations") {
  auto m = io::load_model(kModels + "/a2.json");
  StabilitySequence seq = a2_completeness_sequence(m, 1000);
  LimitingFiltration x = limit_hn(seq, m->parse_object("X"));
  REQUIRE(x.factors.size() == 1);
  CHECK(m->expr_name(x.factors[0].object) == "X");
  CHECK(x.factors[0].theta == doctest::Approx(0.25));

  LimitingFiltration sum = limit_hn(seq, m->parse_object("S1+S2"));
  REQUIRE(sum.factors.size() == 2);
  CHECK(m->expr_name(sum.factors[0].object) == "S1");
  CHECK(sum.factors[0].theta == doctest::Approx(0.5));
  CHECK(m->expr_name(sum.factors[1].object) == "S2");
  CHECK(sum.factors[1].theta == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("constant sequences have the obvious limits") {
  auto m = io::load_model(kModels + "/a2.json");
  StabilityCondition s = io::load_stability(m, kModels + "/sigma_a2_unstable.json");
  StabilitySequence seq = constant_sequence(s, 5);
  for (const char* obj : {"X", "S1+S2", "X[1]+S2"}) {
    HNFiltration hn = hn_filtration(s, m->parse_object(obj));
    LimitingFiltration lf = limit_hn(seq, m->parse_object(obj));
    REQUIRE(lf.factors.size() == hn.factors.size());
    for (std::size_t i = 0; i < lf.factors.size(); ++i) {
      CHECK(lf.factors[i].object == hn.factors[i].object);
      CHECK(lf.factors[i].theta == doctest::Approx(hn.factors[i].phase.value()));
    }
  }
  StabilityCondition lim = limit_stability(seq);
  CHECK(lim.heart() == s.heart());
  CHECK(distance(lim, s).value() <= 1e-12);
  TorsionPair tp = limiting_torsion_pair(seq);
  CHECK(tp.torsion == s.heart().members);
  CHECK(right_tilt(*m, s.heart(), tp) == s.heart());
}

TEST_CASE("limit of the fixture sequence") {
  auto m = io::load_model(kModels + "/a2.json");
  StabilitySequence seq = a2_completeness_sequence(m, 1000);
  StabilityCondition lim = limit_stability(seq);
  CHECK(lim.heart() == heart_of(*m, {"S2[1]", "S1", "X"}));
  CHECK(lim.charge_of(m->parse_object("S2[1]")) == cv(-1, 0));
  std::vector<double> phases;
  for (const auto& simple : lim.heart().simples) phases.push_back(lim.charge_of(simple).phase_in_window());
  std::sort(phases.begin(), phases.end());
  REQUIRE(phases.size() == 2);
  // simples are S2[1] and X
  CHECK(phases[0] == doctest::Approx(0.25));
  CHECK(phases[1] == doctest::Approx(1.0));
  CHECK(check_stability_axioms(lim).ok());
  for (const auto& sample : seq.samples)
    CHECK(distance(sample.sigma, lim).value() <= 2.0 / static_cast<double>(sample.n));
}

TEST_CASE("limit of a rotating sequence") {
  auto m = io::load_model(kModels + "/a2.json");
  StabilityCondition s = io::load_stability(m, kModels + "/sigma_a2.json");
  StabilitySequence seq = rotating_sequence(s);
  TorsionPair tp = limiting_torsion_pair(seq);
  CHECK(tp.torsion == s.heart().members);
  CHECK(tp.free.empty());
  StabilityCondition lim = limit_stability(seq);
  CHECK(lim.heart() == s.heart());
  CHECK(distance(lim, s).value() <= 1e-9);
  for (const auto& sample : seq.samples)
    CHECK(distance(sample.sigma, lim).value() == doctest::Approx(1.0 / sample.n).epsilon(1e-9));
}

TEST_CASE("sequence validation") {
  auto m = io::load_model(kModels + "/a2.json");
  StabilityCondition s = io::load_stability(m, kModels + "/sigma_a2.json");
  std::vector<SequenceSample> samples;
  for (int n = 2; n <= 20; ++n) samples.push_back({n, c_act(s, -1.0 / n)});
  try {
    make_sequence(m, samples, s.charge(), {{1, 0.001}});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
  CHECK_THROWS_AS(make_sequence(m, samples, s.charge(), {{1, 1.0}, {5, 2.0}}), Error);
  CHECK_THROWS_AS(make_sequence(m, samples, CentralCharge{{cv(0, 1), cv(0, -1)}}, {{1, 1.0}}), Error);
  StabilitySequence seq = make_sequence(m, samples, s.charge(), {{1, 1.0}});
  CHECK(seq.epsilon_at(0) == std::numeric_limits<double>::infinity());
  CHECK(seq.epsilon_at(7) == 1.0);
}

TEST_CASE("an undecided tail asks for more samples") {
  auto m = io::load_model(kModels + "/a2.json");
  StabilityCondition s = io::load_stability(m, kModels + "/sigma_a2.json");
  StabilitySequence seq = make_sequence(m, {{1, s}, {2, s}}, s.charge(), {{1, 1.0}});
  try {
    limiting_phase(seq, m->parse_object("S1+S2"));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NeedsMoreSamples);
  }
}

TEST_CASE("length bound by lattice enumeration") {
  auto m = io::load_model(kModels + "/a2.json");
  Heart a = standard_heart(*m);
  CentralCharge gauss = charge_from_simples(*m, a, {cv(0, 1), cv(1, 1)});
  CHECK(length_bound(*m, gauss, 0.25, 0.75, m->parse_object("X")) == 8);
  CHECK(length_bound(*m, gauss, 0.45, 0.55, m->parse_object("S1")) == 1);

  // direct count for a finer lattice: image Z + 2iZ scaled
  CentralCharge other = charge_from_simples(*m, a, {cv(0, 2), cv(1, 0)});
  long direct = 0;
  for (int im = 1; im <= 4; ++im)
    for (int re = -20; re <= 20; ++re) {
      if (im % 2) continue;
      double ph = std::atan2(im, re) / kPi;
      if (ph >= 0.3 - 1e-12 && ph <= 0.7 + 1e-12) ++direct;
    }
  CHECK(length_bound(*m, other, 0.3, 0.7, m->parse_object("S1+S1")) == direct);

  CHECK_THROWS_AS(length_bound(*m, gauss, 0.0, 0.5, m->parse_object("X")), Error);
  CHECK_THROWS_AS(length_bound(*m, gauss.to_floating(), 0.25, 0.75, m->parse_object("X")), Error);
  try {
    length_bound(*m, gauss, 0.1, 0.2, m->parse_object("X"));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
}
