#include "stablab/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "stablab/error.hpp"
#include "stablab/io.hpp"
#include "stablab/metric.hpp"
#include "stablab/oracle.hpp"
#include "stablab/tilting.hpp"

#ifndef STABLAB_MODELS_DIR
#define STABLAB_MODELS_DIR "models"
#endif

namespace stablab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

// Slices are constant between consecutive base phases mod 1, so checking
// P(t, t + 1] at every such phase and midpoint covers all t.
bool slices_resolve(const StabilityCondition& s) {
  const auto& m = s.category();
  std::vector<double> cuts;
  for (int b = 0; b < static_cast<int>(m.indecomposables.size()); ++b) {
    PhaseData pd = phase_data(s, IndecomposableRef{b, 0});
    for (double phi : {pd.phi_minus, pd.phi_plus}) cuts.push_back(phi - std::floor(phi));
  }
  std::sort(cuts.begin(), cuts.end());
  const std::size_t n = cuts.size();
  for (std::size_t i = 0; i < n; ++i) cuts.push_back(0.5 * (cuts[i] + (i + 1 < n ? cuts[i + 1] : cuts[0] + 1.0)));
  try {
    for (double t : cuts) slice_heart(s, t);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::HeartNotResolvable) return false;
    throw;
  }
  return true;
}

// Same heart, simple charges moved by a bounded amount in phase and log mass.
std::optional<StabilityCondition> perturb(const StabilityCondition& s, Rng& rng) {
  const auto& m = s.category();
  std::vector<ComplexValue> zs;
  for (const auto& simple : s.heart().simples) {
    ComplexValue z = s.charge_of(simple);
    double phi = std::clamp(z.phase_in_window() + uniform(rng, -0.15, 0.15), 0.01, 1.0);
    double mass = z.abs() * std::exp(uniform(rng, -0.3, 0.3));
    zs.emplace_back(std::polar(mass, std::numbers::pi * phi));
  }
  StabilityCondition t(s.model(), s.heart(), charge_from_simples(m, s.heart(), zs));
  if (!t.validity().ok() || !slices_resolve(t)) return std::nullopt;
  return t;
}

std::vector<IndecomposableRef> refs(const CategoryModel& m, std::initializer_list<const char*> names) {
  std::vector<IndecomposableRef> out;
  for (const char* n : names) out.push_back(m.parse_ref(n));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<IndecomposableRef> shift_all(std::vector<IndecomposableRef> v, int k) {
  for (auto& r : v) r = r.shifted(k);
  return v;
}

std::string dir_of(const AcceptanceOptions& o) { return o.models_dir.empty() ? default_models_dir() : o.models_dir; }

ModelPtr load_a2(const AcceptanceOptions& o) { return io::load_model(dir_of(o) + "/a2.json"); }

// criteria --------------------------------------------------------------

CriterionResult hyperbolic_quotient(const AcceptanceOptions&) {
  CriterionResult r{1, "hyperbolic quotient", false, {}};
  double worst = 0.0, slowest = 0.0;
  bool ok = true;
  for (double a : {2.0, 4.0, 10.0}) {
    auto t0 = Clock::now();
    auto q = quotient_distance_G(GroupElement::identity(), GroupElement::diagonal(std::sqrt(a), 1.0 / std::sqrt(a)));
    double dt = seconds_since(t0);
    double err = std::abs(q.value - 0.5 * std::log(a));
    worst = std::max(worst, err);
    slowest = std::max(slowest, dt);
    ok = ok && err <= 1e-3 && dt < 10.0;
  }
  r.pass = ok;
  r.detail = "max error " + fmt(worst) + ", slowest run " + fmt(slowest) + " s";
  return r;
}

CriterionResult orbit_formula(const AcceptanceOptions& o) {
  CriterionResult r{2, "C-orbit formula", false, {}};
  auto a2 = load_a2(o);
  Rng rng(o.seed + 2);
  double worst = 0.0;
  int failures = 0;
  for (int i = 0; i < 100; ++i) {
    StabilityCondition s = random_stability(a2, rng);
    std::complex<double> lambda(uniform(rng, -1, 1), uniform(rng, -1, 1));
    double d = distance(s, c_act(s, lambda)).value();
    double expect = std::max(std::abs(lambda.real()), std::numbers::pi * std::abs(lambda.imag()));
    double err = std::abs(d - expect);
    worst = std::max(worst, err);
    if (!(err <= 1e-9)) ++failures;
  }
  r.pass = failures == 0;
  r.detail = std::to_string(failures) + " failures, max error " + fmt(worst);
  return r;
}

CriterionResult oracle_equivalence(const AcceptanceOptions& o) {
  CriterionResult r{3, "oracle equivalence", false, {}};
  auto t0 = Clock::now();
  auto a2 = load_a2(o);
  const auto& q = *a2->quiver;
  const auto reps = oracle::all_representations(q, 3);
  std::vector<ObjectExpr> objects;
  for (const auto& rep : reps) objects.push_back(oracle::decompose(*a2, rep));
  const Heart std_heart = standard_heart(*a2);
  Rng rng(o.seed + 3);
  long mismatches = 0, compared = 0;
  std::string first;
  for (int k = 0; k < 50; ++k) {
    auto vz = random_simple_charges(2, rng);
    StabilityCondition s(a2, std_heart, charge_from_simples(*a2, std_heart, vz));
    for (std::size_t i = 0; i < reps.size(); ++i) {
      auto expect = oracle::oracle_hn(q, reps[i], vz);
      auto got = hn_filtration(s, objects[i]);
      bool same = expect.size() == got.factors.size();
      for (std::size_t j = 0; same && j < expect.size(); ++j) {
        same = expect[j].cls == a2->class_of(got.factors[j].object) &&
               std::abs(expect[j].phase - got.factors[j].phase.value()) <= 1e-12;
      }
      ++compared;
      if (!same) {
        if (first.empty()) first = a2->expr_name(objects[i]) + " under charge set " + std::to_string(k);
        ++mismatches;
      }
    }
  }
  double dt = seconds_since(t0);
  r.pass = mismatches == 0 && reps.size() == 688 && dt < 60.0;
  r.detail = std::to_string(reps.size()) + " reps x 50 charges, " + std::to_string(mismatches) + " mismatches" +
             (first.empty() ? "" : " (first " + first + ")") + ", " + fmt(dt) + " s";
  return r;
}

CriterionResult completeness(const AcceptanceOptions& o) {
  CriterionResult r{4, "completeness lab", false, {}};
  auto a2 = load_a2(o);
  const auto& m = *a2;
  StabilitySequence seq = a2_completeness_sequence(a2, 1000);
  StabilityCondition lim = limit_stability(seq);
  Report axioms = check_stability_axioms(lim, {m.axiom_shift_window, true});
  const Heart a = standard_heart(m);
  Heart expected = right_tilt(m, a, torsion_pair_of(m, a, refs(m, {"S1", "X"})));
  Heart named = make_heart(m, refs(m, {"S2[1]", "S1", "X"}));
  TorsionPair tp = limiting_torsion_pair(seq);
  Heart predicted = right_tilt(m, a, tp);
  long over = 0;
  for (const auto& sample : seq.samples)
    if (!(distance(sample.sigma, lim).value() <= 2.0 / static_cast<double>(sample.n))) ++over;
  r.pass = axioms.ok() && lim.heart() == expected && expected == named && predicted == lim.heart() && over == 0;
  r.detail = "heart " + io::heart_name(m, lim.heart()) + ", torsion class {";
  for (std::size_t i = 0; i < tp.torsion.size(); ++i) r.detail += (i ? ", " : "") + m.ref_name(tp.torsion[i]);
  r.detail += "}, axioms " + std::string(axioms.ok() ? "ok" : "FAIL") + ", " + std::to_string(over) +
              " samples over 2/n";
  return r;
}

CriterionResult tilt_round_trip(const AcceptanceOptions& o) {
  CriterionResult r{5, "tilt decomposition", false, {}};
  auto a2 = load_a2(o);
  const auto& m = *a2;
  Rng rng(o.seed + 5);
  int pairs = 0, failures = 0, attempts = 0;
  std::string first;
  while (pairs < 100 && attempts < 10000) {
    ++attempts;
    StabilityCondition s = random_stability(a2, rng);
    auto p = perturb(s, rng);
    if (!p) continue;
    StabilityCondition t = c_act(*p, {uniform(rng, -0.3, 0.3), uniform(rng, -0.1, 0.1)});
    if (!(distance(s, t).value() < 0.5)) continue;
    ++pairs;
    try {
      TiltDecomposition dec = tilt_decompose_pair(s, t);
      bool ok = left_tilt(m, s.heart(), dec.left) == dec.intermediate && dec.result == t.heart() &&
                right_tilt(m, dec.intermediate, dec.right) == t.heart();
      if (!ok) {
        ++failures;
        if (first.empty()) first = io::heart_name(m, s.heart()) + " -> " + io::heart_name(m, t.heart());
      }
    } catch (const Error& e) {
      ++failures;
      if (first.empty()) first = e.what();
    }
  }
  r.pass = pairs == 100 && failures == 0;
  r.detail = std::to_string(pairs) + " pairs, " + std::to_string(failures) + " failures" +
             (first.empty() ? "" : " (first " + first + ")");
  return r;
}

CriterionResult property_suites(const AcceptanceOptions& o) {
  CriterionResult r{6, "property suites", false, {}};
  auto a2 = load_a2(o);
  const auto& m = *a2;
  Rng rng(o.seed + 6);
  std::vector<std::string> failed;

  // phase bounds along triangles
  long bound_failures = 0;
  for (int k = 0; k < 100; ++k) {
    StabilityCondition s = random_stability(a2, rng);
    for (const auto& tri : m.rotation_closure)
      for (int sh = -1; sh <= 1; ++sh) {
        Triangle t = tri.shifted(sh);
        if (t.a.is_zero() || t.b.is_zero() || t.c.is_zero()) continue;
        PhaseData pa = phase_data(s, t.a), pb = phase_data(s, t.b), pc = phase_data(s, t.c);
        if (pb.phi_plus > std::max(pa.phi_plus, pc.phi_plus) + 1e-12 ||
            pb.phi_minus < std::min(pa.phi_minus, pc.phi_minus) - 1e-12)
          ++bound_failures;
      }
  }
  if (bound_failures) failed.push_back("phase bounds");

  // tilt inversion on the hearts between A and A[-1]
  const Heart a = standard_heart(m);
  std::vector<Heart> hearts;
  for (const auto& p : enumerate_torsion_pairs(m, a)) hearts.push_back(left_tilt(m, a, p));
  long inversion_failures = 0, inversion_pairs = 0;
  for (const auto& e : hearts)
    for (const auto& p : enumerate_torsion_pairs(m, e)) {
      ++inversion_pairs;
      Heart l = left_tilt(m, e, p);
      Heart rt = right_tilt(m, e, p);
      bool ok = right_tilt(m, l, torsion_pair_of(m, l, p.free)) == e &&
                left_tilt(m, rt, torsion_pair_of(m, rt, shift_all(p.free, 1))) == e;
      if (!ok) ++inversion_failures;
    }
  if (hearts.size() != 5 || inversion_failures) failed.push_back("tilt inversion");

  // displacement vanishes exactly at the identity
  long delta_failures = delta(GroupElement::identity()) == 0.0 ? 0 : 1;
  for (int k = 0; k < 100; ++k)
    if (!(delta(random_group_element(rng)) > 1e-9)) ++delta_failures;
  if (delta_failures) failed.push_back("delta");

  // left invariance of dG
  double invariance = 0.0;
  for (int k = 0; k < 100; ++k) {
    GroupElement f = random_group_element(rng), g = random_group_element(rng), h = random_group_element(rng);
    invariance = std::max(invariance, std::abs(dG(g_compose(f, g), g_compose(f, h)) - dG(g, h)));
  }
  if (!(invariance <= 1e-9)) failed.push_back("left invariance");

  // metric axioms
  long metric_failures = 0;
  for (int k = 0; k < 100; ++k) {
    StabilityCondition x = random_stability(a2, rng), y = random_stability(a2, rng), z = random_stability(a2, rng);
    double xy = distance(x, y).value(), yx = distance(y, x).value();
    double yz = distance(y, z).value(), xz = distance(x, z).value();
    if (xy != yx || xz > xy + yz + 1e-9 || distance(x, x).value() != 0.0) ++metric_failures;
  }
  if (metric_failures) failed.push_back("metric axioms");

  r.pass = failed.empty();
  r.detail = std::to_string(bound_failures) + " bound, " + std::to_string(inversion_failures) + "/" +
             std::to_string(inversion_pairs) + " inversion (" + std::to_string(hearts.size()) + " hearts), " +
             std::to_string(delta_failures) + " delta, invariance " + fmt(invariance) + ", " +
             std::to_string(metric_failures) + " metric";
  for (const auto& f : failed) r.detail += "; failed: " + f;
  return r;
}

CriterionResult length_bounds(const AcceptanceOptions& o) {
  CriterionResult r{7, "length bound", false, {}};
  auto a2 = load_a2(o);
  const auto& m = *a2;
  const Heart a = standard_heart(m);
  // image of this charge is the Gaussian integers, Z(X) = 1 + 2i
  CentralCharge gauss =
      charge_from_simples(m, a, {ComplexValue(Rational(0), Rational(1)), ComplexValue(Rational(1), Rational(1))});
  long example = length_bound(m, gauss, 0.25, 0.75, m.parse_object("X"));

  std::vector<std::vector<ComplexValue>> fixtures = {
      {ComplexValue(Rational(0), Rational(1)), ComplexValue(Rational(1), Rational(1))},
      {ComplexValue(Rational(1), Rational(1)), ComplexValue(Rational(0), Rational(1))},
  };
  long checked = 0, exceeded = 0;
  for (const auto& vz : fixtures) {
    StabilityCondition s(a2, a, charge_from_simples(m, a, vz));
    for (const auto& rep : oracle::all_representations(*m.quiver, 3)) {
      ObjectExpr c = oracle::decompose(m, rep);
      HNFiltration hn = hn_filtration(s, c);
      long bound = length_bound(m, s.charge(), hn.phi_minus().value(), hn.phi_plus().value(), c);
      ++checked;
      if (static_cast<long>(hn.factors.size()) > bound) ++exceeded;
    }
  }
  r.pass = example == 8 && exceeded == 0;
  r.detail = "worked example " + std::to_string(example) + ", " + std::to_string(exceeded) + "/" +
             std::to_string(checked) + " filtrations over the bound";
  return r;
}

CriterionResult quotient_vs_hyperbolic(const AcceptanceOptions& o) {
  CriterionResult r{8, "quotient vs hyperbolic", false, {}};
  Rng rng(o.seed + 8);
  double worst = 0.0;
  int failures = 0;
  for (int k = 0; k < 50; ++k) {
    GroupElement g = random_group_element(rng), h = random_group_element(rng);
    double q = quotient_distance_G(g, h).value;
    double half = 0.5 * hyp_distance(mobius_project(g), mobius_project(h));
    double err = std::abs(q - half);
    worst = std::max(worst, err);
    if (!(err <= 1e-2)) ++failures;
  }
  r.pass = failures == 0;
  r.detail = std::to_string(failures) + " failures, max error " + fmt(worst);
  return r;
}

}  // namespace

std::vector<ComplexValue> random_simple_charges(std::size_t n, Rng& rng) {
  std::vector<ComplexValue> out;
  while (out.size() < n) {
    Rational re(uniform_int(rng, -3, 3), uniform_int(rng, 1, 3));
    Rational im(uniform_int(rng, 0, 3), uniform_int(rng, 1, 2));
    ComplexValue z(re, im);
    if (z.in_semiclosed_upper_half_plane()) out.push_back(z);
  }
  return out;
}

StabilityCondition random_stability(const ModelPtr& model, Rng& rng) {
  const auto& atlas = model->atlas;
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Heart h = atlas.heart({static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(atlas.size()) - 1)), 0});
    auto zs = random_simple_charges(h.simples.size(), rng);
    StabilityCondition s(model, h, charge_from_simples(*model, h, zs));
    if (s.validity().ok() && slices_resolve(s)) return s;
  }
  throw Error(ErrorKind::Diagnostic, "no random stability condition with every slice in the atlas");
}

GroupElement random_group_element(Rng& rng) {
  for (;;) {
    Matrix2 t{{{uniform(rng, -2, 2), uniform(rng, -2, 2)}, {uniform(rng, -2, 2), uniform(rng, -2, 2)}}};
    if (t[0][0] * t[1][1] - t[0][1] * t[1][0] >= 0.2) return GroupElement(t, uniform_int(rng, -1, 1));
  }
}

StabilitySequence a2_completeness_sequence(const ModelPtr& a2, long count) {
  const auto& m = *a2;
  const Heart a = standard_heart(m);
  const ComplexValue i(Rational(0), Rational(1));
  std::vector<SequenceSample> samples;
  std::vector<EpsilonStep> eps;
  for (long n = 1; n <= count; ++n) {
    std::vector<ComplexValue> zs = {i, ComplexValue(Rational(1), Rational(1, n))};
    samples.push_back({n, StabilityCondition(a2, a, charge_from_simples(m, a, zs))});
    eps.push_back({n, 2.0 / static_cast<double>(n)});
  }
  CentralCharge limit = charge_from_simples(m, a, {i, ComplexValue(Rational(1), Rational(0))});
  return make_sequence(a2, std::move(samples), limit, std::move(eps));
}

std::string default_models_dir() { return STABLAB_MODELS_DIR; }

CriterionResult run_criterion(int id, const AcceptanceOptions& options) {
  using Fn = CriterionResult (*)(const AcceptanceOptions&);
  static const Fn table[] = {hyperbolic_quotient, orbit_formula,   oracle_equivalence, completeness,
                             tilt_round_trip,     property_suites, length_bounds,      quotient_vs_hyperbolic};
  if (id < 1 || id > 8) throw Error(ErrorKind::Usage, "criterion must be 1..8");
  auto t0 = Clock::now();
  CriterionResult r;
  try {
    r = table[id - 1](options);
  } catch (const std::exception& e) {
    r = {id, "criterion " + std::to_string(id), false, std::string("threw ") + e.what()};
  }
  r.seconds = seconds_since(t0);
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 8; ++id) out.push_back(run_criterion(id, options));
  return out;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os << "criterion " << r.id << ": " << (r.pass ? "PASS" : "FAIL") << " " << r.name << " (" << r.detail << ") ["
     << fmt(r.seconds) << " s]";
  return os.str();
}

}  // namespace stablab
