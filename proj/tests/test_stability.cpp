#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stablab/acceptance.hpp"
#include "stablab/error.hpp"
#include "stablab/io.hpp"
#include "stablab/oracle.hpp"
#include "stablab/stability.hpp"

using namespace stablab;

namespace {

const std::string kModels = STABLAB_MODELS_DIR;

ComplexValue cv(std::int64_t re, std::int64_t im) { return ComplexValue(Rational(re), Rational(im)); }

StabilityCondition on_standard(const ModelPtr& m, ComplexValue z1, ComplexValue z2) {
  Heart h = standard_heart(*m);
  return StabilityCondition(m, h, charge_from_simples(*m, h, {z1, z2}));
}

double arg_phase(double re, double im) { return std::atan2(im, re) / std::numbers::pi; }

bool fails(const Report& r, const std::string& prefix) {
  for (const auto& c : r.checks)
    if (!c.pass && c.name.rfind(prefix, 0) == 0) return true;
  return false;
}

}  // namespace

TEST_CASE("charges of objects") {
  auto m = io::load_model(kModels + "/a2.json");
  StabilityCondition s = on_standard(m, cv(0, 1), cv(1, 1));
  CHECK(s.charge_of(m->parse_object("X")) == cv(1, 2));
  CHECK(s.charge_of(m->parse_object("S1[1]")) == cv(0, -1));
  CHECK(s.charge_of(m->parse_object("S1+S2")) == cv(1, 2));
  CHECK(charge_of(*m, s.charge(), m->parse_object("X[2]")) == cv(1, 2));
}

TEST_CASE("Phase comparisons are exact across windows") {
  Phase a(0, cv(1, 1)), b(0, cv(0, 1)), c(1, cv(1, 1));
  CHECK(a < b);
  CHECK(b < c);
  CHECK(a.shifted(1) == c);
  CHECK(c.value() == doctest::Approx(1.25));
  Phase f(0, ComplexValue(std::complex<double>(1.0, 1.0 + 1e-12)));
  CHECK(f == a);
}

TEST_CASE("HN of X when X is stable") {
  auto m = io::load_model(kModels + "/a2.json");
  StabilityCondition s = on_standard(m, cv(0, 1), cv(1, 1));
  HNFiltration hn = hn_filtration(s, m->parse_object("X"));
  REQUIRE(hn.factors.size() == 1);
  CHECK(m->expr_name(hn.factors[0].object) == "X");
  CHECK(hn.factors[0].phase.value() == doctest::Approx(arg_phase(1, 2)));
  PhaseData pd = phase_data(s, m->parse_object("X"));
  CHECK(pd.phi_minus == pd.phi_plus);
  CHECK(pd.mass == doctest::Approx(std::sqrt(5.0)));
  auto ph = semistable_phase(s, m->parse_object("X"));
  REQUIRE(ph);
  CHECK(ph->value() == doctest::Approx(arg_phase(1, 2)));
}

TEST_CASE("HN of X when X is unstable") {
  auto m = io::load_model(kModels + "/a2.json");
  StabilityCondition s = on_standard(m, cv(1, 1), cv(0, 1));
  HNFiltration hn = hn_filtration(s, m->parse_object("X"));
  REQUIRE(hn.factors.size() == 2);
  CHECK(m->expr_name(hn.factors[0].object) == "S2");
  CHECK(hn.factors[0].phase.value() == doctest::Approx(0.5));
  CHECK(m->expr_name(hn.factors[1].object) == "S1");
  CHECK(hn.factors[1].phase.value() == doctest::Approx(0.25));
  CHECK(hn.mass() == doctest::Approx(std::sqrt(2.0) + 1.0));
  REQUIRE(hn.chain.size() == 2);
  CHECK(m->expr_name(hn.chain[0]) == "S2");
  CHECK(m->expr_name(hn.chain[1]) == "X");
  CHECK_FALSE(semistable_phase(s, m->parse_object("X")));

  PhaseData pd = phase_data(s, m->parse_object("X[3]"));
  CHECK(pd.phi_minus == doctest::Approx(3.25));
  CHECK(pd.phi_plus == doctest::Approx(3.5));
  CHECK(pd.mass == doctest::Approx(std::sqrt(2.0) + 1.0));
}

TEST_CASE("shifted simples are semistable") {
  auto m = io::load_model(kModels + "/a2.json");
  StabilityCondition s = on_standard(m, cv(1, 1), cv(-1, 2));
  auto ph = semistable_phase(s, m->parse_object("S2[-5]"));
  REQUIRE(ph);
  CHECK(ph->value() == doctest::Approx(arg_phase(-1, 2) - 5));
  CHECK(hn_filtration(s, m->parse_object("S1")).factors.size() == 1);
}

TEST_CASE("direct sums merge equal phases and order the rest") {
  auto m = io::load_model(kModels + "/a2.json");
  StabilityCondition s = on_standard(m, cv(0, 1), cv(0, 2));
  HNFiltration hn = hn_filtration(s, m->parse_object("S1+S2+X"));
  REQUIRE(hn.factors.size() == 1);
  StabilityCondition t = on_standard(m, cv(1, 1), cv(0, 1));
  HNFiltration h2 = hn_filtration(t, m->parse_object("S1[1]+X"));
  REQUIRE(h2.factors.size() == 3);
  CHECK(h2.factors[0].phase.value() == doctest::Approx(1.25));
  CHECK(h2.factors[1].phase.value() == doctest::Approx(0.5));
  CHECK(h2.factors[2].phase.value() == doctest::Approx(0.25));
}

TEST_CASE("truncation splits at a cut") {
  auto m = io::load_model(kModels + "/a2.json");
  StabilityCondition s = on_standard(m, cv(1, 1), cv(0, 1));
  auto [above, below] = truncate(s, m->parse_object("X"), Phase(0, cv(1, 2)));
  CHECK(m->expr_name(above) == "S2");
  CHECK(m->expr_name(below) == "S1");
}

TEST_CASE("axioms on the fixture charges") {
  auto m = io::load_model(kModels + "/a2.json");
  CHECK(check_stability_axioms(on_standard(m, cv(0, 1), cv(1, 1))).ok());
  CHECK(check_stability_axioms(on_standard(m, cv(1, 1), cv(0, 1))).ok());
  CHECK(check_stability_axioms(on_standard(m, cv(-1, 0), cv(0, 1))).ok());

  StabilityCondition bad = on_standard(m, cv(0, 1), cv(1, 0));
  Report r = check_stability_axioms(bad);
  CHECK(fails(r, "axiom 1"));
  bool names_s2 = false;
  for (const auto& c : r.checks)
    if (!c.pass && c.witness.find("S2") != std::string::npos) names_s2 = true;
  CHECK(names_s2);
  CHECK_THROWS_AS(hn_filtration(bad, m->parse_object("X")), Error);
}

TEST_CASE("HN of the zero object is a domain error") {
  auto m = io::load_model(kModels + "/a2.json");
  StabilityCondition s = on_standard(m, cv(0, 1), cv(1, 1));
  try {
    hn_filtration(s, ObjectExpr());
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
  }
}

TEST_CASE("charge rank must match the lattice") {
  auto m = io::load_model(kModels + "/a2.json");
  CHECK_THROWS_AS(StabilityCondition(m, standard_heart(*m), CentralCharge{{cv(0, 1)}}), Error);
}

TEST_CASE("floating charges close to exact ones give the same filtrations") {
  auto m = io::load_model(kModels + "/a2.json");
  StabilityCondition e = on_standard(m, cv(1, 1), cv(0, 1));
  StabilityCondition f(m, e.heart(), e.charge().to_floating());
  for (const char* obj : {"X", "S1+S2", "X[1]+S1"}) {
    auto a = hn_filtration(e, m->parse_object(obj)), b = hn_filtration(f, m->parse_object(obj));
    REQUIRE(a.factors.size() == b.factors.size());
    for (std::size_t i = 0; i < a.factors.size(); ++i) {
      CHECK(a.factors[i].object == b.factors[i].object);
      CHECK(a.factors[i].phase.value() == doctest::Approx(b.factors[i].phase.value()));
    }
  }
}

TEST_CASE("random conditions on atlas hearts satisfy the axioms") {
  auto m = io::load_model(kModels + "/a2.json");
  Rng rng(11);
  for (int k = 0; k < 40; ++k) {
    StabilityCondition s = random_stability(m, rng);
    Report r = check_stability_axioms(s);
    CHECK_MESSAGE(r.ok(), (r.first_failure() ? r.first_failure()->witness : ""));
  }
}

TEST_CASE("HN matches the brute-force oracle on all small representations") {
  auto m = io::load_model(kModels + "/a2.json");
  const auto reps = oracle::all_representations(*m->quiver, 2);
  Rng rng(5);
  Heart h = standard_heart(*m);
  for (int k = 0; k < 10; ++k) {
    auto z = random_simple_charges(2, rng);
    StabilityCondition s(m, h, charge_from_simples(*m, h, z));
    for (const auto& rep : reps) {
      auto expect = oracle::oracle_hn(*m->quiver, rep, z);
      auto got = hn_filtration(s, oracle::decompose(*m, rep));
      REQUIRE(expect.size() == got.factors.size());
      for (std::size_t i = 0; i < expect.size(); ++i) {
        CHECK(expect[i].cls == m->class_of(got.factors[i].object));
        CHECK(expect[i].charge == s.charge_of(got.factors[i].object));
      }
    }
  }
}
