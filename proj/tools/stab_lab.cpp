#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <sstream>
#include <string>

#include "stablab/acceptance.hpp"
#include "stablab/error.hpp"
#include "stablab/gtilde.hpp"
#include "stablab/io.hpp"
#include "stablab/limits.hpp"
#include "stablab/metric.hpp"
#include "stablab/tilting.hpp"

using namespace stablab;
using io::json;

namespace {

struct Globals {
  bool json = false;
  std::uint64_t seed = 0;
  int jobs = 1;  // accepted, evaluation stays single-threaded
  double tol = 1e-4;
};

struct Args {
  std::string model, stability, a, b, seq, object, heart, torsion, dir = "left";
  bool quotient = false, project = false, show_heart = false;
  int criterion = 0;
};

int emit(const Globals& g, const json& j, const std::string& text, bool ok = true) {
  if (g.json)
    std::cout << io::dump(j);
  else
    std::cout << text;
  return ok ? 0 : 1;
}

std::string report_text(const Report& r) {
  std::ostringstream os;
  for (const auto& c : r.checks) {
    os << (c.pass ? "PASS " : "FAIL ") << c.name;
    if (!c.witness.empty()) os << ": " << c.witness;
    os << "\n";
  }
  os << (r.ok() ? "ok" : "failed") << "\n";
  return os.str();
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

OptimizeOptions optimizer(const Globals& g) {
  OptimizeOptions o;
  o.tolerance = g.tol;
  o.seed = g.seed;
  return o;
}

int cmd_validate(const Globals& g, const Args& a) {
  ModelPtr m = io::load_model(a.model);
  Report r = validate_model(*m);
  if (!a.stability.empty()) {
    StabilityCondition s = io::load_stability(m, a.stability);
    r.append(s.validity());
  }
  return emit(g, io::report_to_json(r), report_text(r), r.ok());
}

int cmd_hn(const Globals& g, const Args& a) {
  ModelPtr m = io::load_model(a.model);
  StabilityCondition s = io::load_stability(m, a.stability);
  HNFiltration hn = hn_filtration(s, m->parse_object(a.object));
  std::ostringstream os;
  for (const auto& f : hn.factors)
    os << m->expr_name(f.object) << "  phase " << num(f.phase.value()) << "  mass " << num(f.mass) << "\n";
  os << "phi+ " << num(hn.phi_plus().value()) << "  phi- " << num(hn.phi_minus().value()) << "  mass "
     << num(hn.mass()) << "\n";
  return emit(g, io::hn_to_json(*m, hn), os.str());
}

int cmd_dist(const Globals& g, const Args& a) {
  ModelPtr m = io::load_model(a.model);
  StabilityCondition s = io::load_stability(m, a.a), t = io::load_stability(m, a.b);
  if (a.quotient) {
    QuotientResult q = quotient_distance_stab(s, t, optimizer(g));
    json j{{"quotient", q.value.str()}, {"lambda", {q.lambda.real(), q.lambda.imag()}}, {"tolerance", g.tol}};
    return emit(g, j,
                "quotient " + q.value.str() + "  lambda " + num(q.lambda.real()) + " + " + num(q.lambda.imag()) +
                    "i  (upper bound, tolerance " + num(g.tol) + ")\n");
  }
  DistanceResult d = distance_with_witness(s, t);
  json j{{"distance", d.value.str()}, {"witness", m->ref_name(d.witness)}, {"term", d.term}};
  return emit(g, j, "distance " + d.value.str() + "  witness " + m->ref_name(d.witness) + " (" + d.term + ")\n");
}

int cmd_gdist(const Globals& g, const Args& a) {
  GroupElement x = io::load_group(a.a), y = io::load_group(a.b);
  json j;
  std::ostringstream os;
  if (a.quotient) {
    GQuotientResult q = quotient_distance_G(x, y, optimizer(g));
    j["quotient"] = q.value;
    j["lambda"] = {q.lambda.real(), q.lambda.imag()};
    os << "quotient " << num(q.value) << "  lambda " << num(q.lambda.real()) << " + " << num(q.lambda.imag())
       << "i\n";
  } else {
    double d = dG(x, y);
    j["distance"] = d;
    os << "distance " << num(d) << "\n";
  }
  if (a.project) {
    auto px = mobius_project(x), py = mobius_project(y);
    double half = 0.5 * hyp_distance(px, py);
    j["projection"] = {{"a", {px.real(), px.imag()}}, {"b", {py.real(), py.imag()}}, {"half_hyperbolic", half}};
    os << "projection a " << num(px.real()) << " + " << num(px.imag()) << "i  b " << num(py.real()) << " + "
       << num(py.imag()) << "i  half hyperbolic " << num(half) << "\n";
  }
  return emit(g, j, os.str());
}

int cmd_limit(const Globals& g, const Args& a) {
  StabilitySequence seq = io::load_sequence(a.seq);
  const CategoryModel& m = *seq.model;
  json j;
  std::ostringstream os;
  if (!a.object.empty()) {
    ObjectExpr c = m.parse_object(a.object);
    LimitingFiltration lf = limit_hn(seq, c);
    json fs = json::array();
    for (const auto& f : lf.factors) {
      fs.push_back({{"object", m.expr_name(f.object)}, {"theta", f.theta}, {"stable_from", f.stable_from}});
      os << m.expr_name(f.object) << "  theta " << num(f.theta) << "  stable from n = " << f.stable_from << "\n";
    }
    j["object"] = m.expr_name(c);
    j["factors"] = fs;
  }
  if (a.show_heart || a.object.empty()) {
    StabilityCondition lim = limit_stability(seq);
    TorsionPair tp = limiting_torsion_pair(seq);
    j["limit"] = io::stability_to_json(lim);
    j["torsion_pair"] = io::torsion_pair_to_json(m, tp);
    os << "limit heart " << io::heart_name(m, lim.heart()) << " {";
    for (std::size_t i = 0; i < lim.heart().members.size(); ++i)
      os << (i ? ", " : "") << m.ref_name(lim.heart().members[i]);
    os << "}\ntorsion class {";
    for (std::size_t i = 0; i < tp.torsion.size(); ++i) os << (i ? ", " : "") << m.ref_name(tp.torsion[i]);
    os << "}\n";
  }
  return emit(g, j, os.str());
}

int cmd_tilt(const Globals& g, const Args& a) {
  ModelPtr m = io::load_model(a.model);
  Heart h = io::parse_heart(*m, json(a.heart));
  std::vector<IndecomposableRef> torsion;
  std::stringstream ss(a.torsion);
  for (std::string item; std::getline(ss, item, ',');)
    if (item.find_first_not_of(" \t") != std::string::npos) torsion.push_back(m->parse_ref(item));
  TorsionPair p = torsion_pair_of(*m, h, torsion);
  if (a.dir != "left" && a.dir != "right") throw Error(ErrorKind::Usage, "--dir must be left or right");
  Heart out = a.dir == "left" ? left_tilt(*m, h, p) : right_tilt(*m, h, p);
  json j = io::heart_to_json(*m, out);
  j["torsion_pair"] = io::torsion_pair_to_json(*m, p);
  std::ostringstream os;
  os << a.dir << " tilt of " << io::heart_name(*m, h) << " = " << io::heart_name(*m, out) << " {";
  for (std::size_t i = 0; i < out.members.size(); ++i) os << (i ? ", " : "") << m->ref_name(out.members[i]);
  os << "}\n";
  return emit(g, j, os.str());
}

int cmd_atlas(const Globals&, const Args& a) {
  ModelPtr m = io::load_model(a.model);
  std::cout << io::dump(io::atlas_to_json(*m));
  return 0;
}

int cmd_axioms(const Globals& g, const Args& a) {
  ModelPtr m = io::load_model(a.model);
  StabilityCondition s = io::load_stability(m, a.stability);
  Report r = check_stability_axioms(s, {m->axiom_shift_window, true});
  return emit(g, io::report_to_json(r), report_text(r), r.ok());
}

int cmd_suite(const Globals& g, const Args& a) {
  AcceptanceOptions o;
  o.seed = g.seed;
  json results = json::array();
  bool all = true;
  for (int id = 1; id <= 8; ++id) {
    if (a.criterion && a.criterion != id) continue;
    CriterionResult r = run_criterion(id, o);
    all = all && r.pass;
    results.push_back({{"criterion", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    if (!g.json) std::cout << format_result(r) << std::endl;
  }
  if (g.json) std::cout << io::dump({{"ok", all}, {"criteria", results}});
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stab-lab: stability conditions on finite category models"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  Args a;
  app.add_flag("--json", g.json, "machine-readable output");
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--jobs", g.jobs, "worker threads (evaluation is single-threaded)")->check(CLI::PositiveNumber);
  app.add_option("--tol", g.tol, "optimizer tolerance")->check(CLI::PositiveNumber)->capture_default_str();

  auto* validate = app.add_subcommand("validate", "check model invariants");
  validate->add_option("--model", a.model)->required();
  validate->add_option("--stability", a.stability);

  auto* hn = app.add_subcommand("hn", "Harder-Narasimhan filtration");
  hn->add_option("--model", a.model)->required();
  hn->add_option("--stability", a.stability)->required();
  hn->add_option("--object", a.object)->required();

  auto* dist = app.add_subcommand("dist", "generalized metric");
  dist->add_option("--model", a.model)->required();
  dist->add_option("--a,--stability", a.a)->required();
  dist->add_option("--b", a.b)->required();
  dist->add_flag("--quotient", a.quotient);

  auto* gdist = app.add_subcommand("gdist", "metric on the universal cover");
  gdist->add_option("--a", a.a)->required();
  gdist->add_option("--b", a.b)->required();
  gdist->add_flag("--quotient", a.quotient);
  gdist->add_flag("--project", a.project);

  auto* limit = app.add_subcommand("limit", "limit of a sampled Cauchy sequence");
  limit->add_option("--seq", a.seq)->required();
  limit->add_option("--object", a.object);
  limit->add_flag("--heart", a.show_heart);

  auto* tilt = app.add_subcommand("tilt", "left or right tilt");
  tilt->add_option("--model", a.model)->required();
  tilt->add_option("--heart", a.heart)->required();
  tilt->add_option("--torsion", a.torsion)->required();
  tilt->add_option("--dir", a.dir)->check(CLI::IsMember({"left", "right"}));

  auto* atlas = app.add_subcommand("atlas", "heart and tilt graph");
  atlas->add_option("--model", a.model)->required();

  auto* axioms = app.add_subcommand("check-axioms", "verify the stability axioms");
  axioms->add_option("--model", a.model)->required();
  axioms->add_option("--stability", a.stability)->required();

  auto* suite = app.add_subcommand("suite", "acceptance battery");
  suite->add_option("--criterion", a.criterion)->check(CLI::Range(1, 8));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate) return cmd_validate(g, a);
    if (*hn) return cmd_hn(g, a);
    if (*dist) return cmd_dist(g, a);
    if (*gdist) return cmd_gdist(g, a);
    if (*limit) return cmd_limit(g, a);
    if (*tilt) return cmd_tilt(g, a);
    if (*atlas) return cmd_atlas(g, a);
    if (*axioms) return cmd_axioms(g, a);
    if (*suite) return cmd_suite(g, a);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::Usage ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
