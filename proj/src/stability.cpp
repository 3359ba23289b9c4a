#include "stablab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "stablab/error.hpp"

namespace stablab {

bool CentralCharge::exact() const {
  return std::all_of(values.begin(), values.end(), [](const ComplexValue& z) { return z.exact(); });
}

ComplexValue CentralCharge::operator()(const LatticeClass& v) const {
  if (v.size() != values.size()) throw Error(ErrorKind::ModelMismatch, "class rank differs from charge rank");
  ComplexValue z;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) z += values[i] * v[i];
  return z;
}

CentralCharge CentralCharge::to_floating() const {
  CentralCharge out;
  for (const auto& z : values) out.values.push_back(z.to_floating());
  return out;
}

Phase::Phase(int window, ComplexValue direction) : window_(window), direction_(std::move(direction)) {
  if (!direction_.in_semiclosed_upper_half_plane()) {
    std::ostringstream os;
    os << "charge " << direction_ << " outside the semiclosed upper half-plane";
    throw Error(ErrorKind::Domain, os.str());
  }
  fraction_ = direction_.phase_in_window();
}

int compare(const Phase& a, const Phase& b) {
  if (a.direction_.exact() && b.direction_.exact()) {
    if (a.window_ != b.window_) return a.window_ < b.window_ ? -1 : 1;
    return -cross_sign(a.direction_, b.direction_);
  }
  double d = a.value() - b.value();
  if (std::abs(d) <= kPhaseTolerance) return 0;
  return d < 0 ? -1 : 1;
}

StabilityCondition::StabilityCondition(ModelPtr model, Heart heart, CentralCharge charge)
    : model_(std::move(model)), heart_(std::move(heart)), charge_(std::move(charge)) {
  if (!model_) throw Error(ErrorKind::ModelMismatch, "stability condition without a model");
  if (static_cast<int>(charge_.values.size()) != model_->lattice_rank)
    throw Error(ErrorKind::ModelMismatch, "charge has " + std::to_string(charge_.values.size()) +
                                              " components for lattice rank " + std::to_string(model_->lattice_rank));
}

ComplexValue StabilityCondition::charge_of(const ObjectExpr& c) const { return charge_(model_->class_of(c)); }

ComplexValue StabilityCondition::charge_of(const IndecomposableRef& r) const { return charge_(model_->class_of(r)); }

Report StabilityCondition::validity() const {
  Report rep;
  for (const auto& s : heart_.simples) {
    auto z = charge_of(s);
    if (!z.in_semiclosed_upper_half_plane()) {
      std::ostringstream os;
      os << model_->ref_name(s) << " has charge " << z << " outside the semiclosed upper half-plane";
      rep.add("axiom 1: simple charges in the semiclosed upper half-plane", false, os.str());
    }
  }
  for (const auto& m : heart_.members)
    if (charge_of(m).is_zero()) rep.add("heart members have nonzero charge", false, model_->ref_name(m));
  if (rep.checks.empty()) rep.add("heart charges valid", true);
  return rep;
}

void StabilityCondition::require_valid() const {
  Report r = validity();
  if (const Check* f = r.first_failure()) throw Error(ErrorKind::Precondition, "invalid stability condition: " + f->witness);
}

CentralCharge charge_from_simples(const CategoryModel& model, const Heart& heart,
                                  const std::vector<ComplexValue>& simple_charges) {
  const std::size_t n = static_cast<std::size_t>(model.lattice_rank);
  if (heart.simples.size() != n || simple_charges.size() != n)
    throw Error(ErrorKind::ModelMismatch, "need one charge per simple");
  // augmented [C | I], C rows = simple classes
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(2 * n));
  for (std::size_t j = 0; j < n; ++j) {
    auto cls = model.class_of(heart.simples[j]);
    for (std::size_t i = 0; i < n; ++i) m[j][i] = Rational(cls[i]);
    m[j][n + j] = Rational(1);
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col].is_zero()) ++piv;
    if (piv == n) throw Error(ErrorKind::ModelData, "simples do not form a basis");
    std::swap(m[piv], m[col]);
    Rational inv = Rational(1) / m[col][col];
    for (auto& x : m[col]) x = x * inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col].is_zero()) continue;
      Rational f = m[r][col];
      for (std::size_t c = 0; c < 2 * n; ++c) m[r][c] = m[r][c] - f * m[col][c];
    }
  }
  // Z(e_i) = sum_j Cinv[i][j] Z(s_j)
  CentralCharge out;
  for (std::size_t i = 0; i < n; ++i) {
    ComplexValue z;
    for (std::size_t j = 0; j < n; ++j) {
      const Rational& c = m[i][n + j];
      if (c.den() != 1) throw Error(ErrorKind::ModelData, "simples are not a lattice basis");
      if (c.num() != 0) z += simple_charges[j] * c.num();
    }
    out.values.push_back(z);
  }
  return out;
}

ComplexValue charge_of(const CategoryModel& model, const CentralCharge& z, const ObjectExpr& c) {
  return z(model.class_of(c));
}

double HNFiltration::mass() const {
  double m = 0.0;
  for (const auto& f : factors) m += f.mass;
  return m;
}

namespace {

using Factors = std::vector<HnFactor>;

std::optional<Phase> semistable_indecomposable(const StabilityCondition& s, const IndecomposableRef& u) {
  const Heart& heart = s.heart();
  auto member = heart.member_with_base(u.base);
  if (!member) return std::nullopt;
  const int window = u.shift - member->shift;
  const ComplexValue z = s.charge_of(*member);
  const Phase own(0, z);
  for (const auto& t : s.category().triangles_with_middle(*member)) {
    if (!is_short_exact_in(heart, t)) continue;
    if (Phase(0, s.charge_of(t.a)) > own) return std::nullopt;
  }
  return own.shifted(window);
}

// Sorts by decreasing phase and merges equal phases into one direct-sum factor.
Factors merge(Factors all) {
  std::stable_sort(all.begin(), all.end(), [](const HnFactor& a, const HnFactor& b) { return a.phase > b.phase; });
  Factors out;
  for (auto& f : all) {
    if (!out.empty() && out.back().phase == f.phase) {
      out.back().object = out.back().object + f.object;
      out.back().mass += f.mass;
    } else {
      out.push_back(std::move(f));
    }
  }
  return out;
}

class HnSearch {
 public:
  explicit HnSearch(const StabilityCondition& s)
      : s_(s), model_(s.category()), depth_limit_(2 * model_.max_hn_length + 4) {}

  std::optional<Factors> expr(const ObjectExpr& e, std::size_t depth = 0) {
    if (e.is_zero()) throw Error(ErrorKind::Domain, "HN filtration of the zero object");
    if (e.is_indecomposable()) return indecomposable(e.single(), depth);
    Factors all;
    for (const auto& r : e.summands()) {
      auto f = indecomposable(r, depth);
      if (!f) return std::nullopt;
      all.insert(all.end(), f->begin(), f->end());
    }
    return merge(std::move(all));
  }

  std::optional<Factors> indecomposable(const IndecomposableRef& u, std::size_t depth) {
    if (auto it = memo_.find(u); it != memo_.end()) return it->second;
    if (active_.count(u) || depth > depth_limit_) return std::nullopt;
    active_.insert(u);
    std::vector<Factors> candidates;
    if (auto p = semistable_indecomposable(s_, u)) candidates.push_back({HnFactor{ObjectExpr(u), *p, s_.charge_of(u).abs()}});
    for (const auto& t : model_.triangles_with_middle(u)) {
      if (t.a.is_zero() || t.c.is_zero()) continue;
      auto ha = expr(t.a, depth + 1);
      if (!ha) continue;
      auto hc = expr(t.c, depth + 1);
      if (!hc) continue;
      if (!(ha->back().phase > hc->front().phase)) continue;
      Factors joined(*ha);
      joined.insert(joined.end(), hc->begin(), hc->end());
      candidates.push_back(std::move(joined));
    }
    active_.erase(u);

    std::vector<Factors> distinct;
    for (auto& c : candidates) {
      bool seen = std::any_of(distinct.begin(), distinct.end(), [&](const Factors& d) { return equivalent(c, d); });
      if (!seen) distinct.push_back(std::move(c));
    }
    if (distinct.empty()) return std::nullopt;
    if (distinct.size() > 1)
      throw Error(ErrorKind::UniquenessViolation, "two inequivalent HN chains for " + model_.ref_name(u));
    memo_.emplace(u, distinct.front());
    return distinct.front();
  }

  Factors require(const ObjectExpr& e) {
    auto f = expr(e);
    if (!f) throw Error(ErrorKind::NotHnComplete, "no valid HN chain for " + model_.expr_name(e));
    if (f->size() > model_.max_hn_length * e.summands().size())
      throw Error(ErrorKind::NotHnComplete, "HN chain of " + model_.expr_name(e) + " exceeds the length bound");
    return *f;
  }

  std::pair<ObjectExpr, ObjectExpr> truncate(const ObjectExpr& e, const Phase& cut) {
    ObjectExpr above, below;
    for (const auto& u : e.summands()) {
      auto [a, b] = truncate_indecomposable(u, cut);
      above = above + a;
      below = below + b;
    }
    return {above, below};
  }

 private:
  bool equivalent(const Factors& a, const Factors& b) const {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (model_.class_of(a[i].object) != model_.class_of(b[i].object)) return false;
      if (!(a[i].phase == b[i].phase)) return false;
    }
    return true;
  }

  static bool all_above(const Factors& f, const Phase& cut) {
    return std::all_of(f.begin(), f.end(), [&](const HnFactor& x) { return x.phase > cut; });
  }
  static bool all_at_most(const Factors& f, const Phase& cut) {
    return std::all_of(f.begin(), f.end(), [&](const HnFactor& x) { return x.phase <= cut; });
  }

  std::pair<ObjectExpr, ObjectExpr> truncate_indecomposable(const IndecomposableRef& u, const Phase& cut) {
    Factors h = require(ObjectExpr(u));
    if (all_above(h, cut)) return {ObjectExpr(u), ObjectExpr()};
    if (all_at_most(h, cut)) return {ObjectExpr(), ObjectExpr(u)};
    for (const auto& t : model_.triangles_with_middle(u)) {
      if (t.a.is_zero() || t.c.is_zero()) continue;
      auto ha = expr(t.a);
      auto hc = expr(t.c);
      if (ha && hc && all_above(*ha, cut) && all_at_most(*hc, cut)) return {t.a, t.c};
    }
    throw Error(ErrorKind::NotHnComplete, "no truncation triangle for " + model_.ref_name(u));
  }

  const StabilityCondition& s_;
  const CategoryModel& model_;
  std::size_t depth_limit_;
  std::map<IndecomposableRef, Factors> memo_;
  std::set<IndecomposableRef> active_;
};

}  // namespace

HNFiltration hn_filtration(const StabilityCondition& s, const ObjectExpr& c) {
  if (c.is_zero()) throw Error(ErrorKind::Domain, "HN filtration of the zero object");
  s.require_valid();
  HnSearch search(s);
  HNFiltration hn;
  hn.factors = search.require(c);
  for (std::size_t i = 0; i + 1 < hn.factors.size(); ++i) {
    auto [sub, quot] = search.truncate(c, hn.factors[i + 1].phase);
    hn.chain.push_back(sub);
    hn.quotients.push_back(quot);
  }
  hn.chain.push_back(c);
  hn.quotients.push_back(ObjectExpr());
  return hn;
}

std::pair<ObjectExpr, ObjectExpr> truncate(const StabilityCondition& s, const ObjectExpr& c, const Phase& cut) {
  s.require_valid();
  HnSearch search(s);
  return search.truncate(c, cut);
}

PhaseData phase_data(const StabilityCondition& s, const ObjectExpr& c) {
  HNFiltration hn = hn_filtration(s, c);
  return {hn.phi_minus().value(), hn.phi_plus().value(), hn.mass()};
}

std::optional<Phase> semistable_phase(const StabilityCondition& s, const ObjectExpr& c) {
  HNFiltration hn = hn_filtration(s, c);
  if (hn.factors.size() != 1) return std::nullopt;
  return hn.factors.front().phase;
}

Report check_stability_axioms(const StabilityCondition& s, const AxiomOptions& options) {
  Report rep;
  const CategoryModel& model = s.category();
  Report valid = s.validity();
  if (!valid.ok()) {
    for (const auto& c : valid.checks)
      if (!c.pass) rep.add("axiom 1 (charge alignment)", false, c.witness);
    rep.add("axiom 2 (shift)", false, "not evaluated: invalid heart charges");
    rep.add("axiom 3 (hom vanishing)", false, "not evaluated: invalid heart charges");
    rep.add("axiom 4 (HN filtrations)", false, "not evaluated: invalid heart charges");
    return rep;
  }

  const int w = options.shift_window;
  const int count = static_cast<int>(model.indecomposables.size());
  struct Semi {
    IndecomposableRef ref;
    Phase phase;
  };
  std::vector<Semi> semis;
  std::string w1, w2, w3, w4;

  for (int u = 0; u < count; ++u) {
    for (int k = -w; k <= w; ++k) {
      IndecomposableRef r{u, k};
      std::optional<Phase> p;
      try {
        p = semistable_indecomposable(s, r);
      } catch (const Error& e) {
        if (w1.empty()) w1 = model.ref_name(r) + ": " + e.what();
        continue;
      }
      if (!p) continue;
      semis.push_back({r, *p});
      // Z(r) = m exp(i pi phi) with m > 0
      ComplexValue z = s.charge_of(r) * ((p->window() % 2 == 0) ? 1 : -1);
      bool aligned;
      if (z.exact() && p->direction().exact()) {
        aligned = cross_sign(z, p->direction()) == 0 && z.in_semiclosed_upper_half_plane();
      } else {
        double diff = std::remainder(std::arg(s.charge_of(r).approx()) / std::numbers::pi - p->value(), 2.0);
        aligned = std::abs(diff) <= kPhaseTolerance && !z.is_zero();
      }
      if (!aligned && w1.empty()) w1 = model.ref_name(r);
      if (k < w) {
        auto q = semistable_indecomposable(s, r.shifted(1));
        if ((!q || !(*q == p->shifted(1))) && w2.empty()) w2 = model.ref_name(r);
      }
    }
  }
  for (const auto& a : semis)
    for (const auto& b : semis)
      if (a.phase > b.phase && model.hom_nonzero(a.ref, b.ref) && w3.empty())
        w3 = "Hom(" + model.ref_name(a.ref) + ", " + model.ref_name(b.ref) + ") != 0";

  auto try_hn = [&](const ObjectExpr& e) {
    try {
      hn_filtration(s, e);
    } catch (const Error& err) {
      if (w4.empty()) w4 = model.expr_name(e) + ": " + err.what();
    }
  };
  for (int u = 0; u < count; ++u)
    for (int k = -w; k <= w; ++k) try_hn(ObjectExpr(IndecomposableRef{u, k}));
  if (options.direct_sum_sample)
    for (int u = 0; u < count; ++u)
      for (int v = u; v < count; ++v)
        for (int d = -1; d <= 1; ++d) try_hn(ObjectExpr({{u, 0}, {v, d}}));

  rep.add("axiom 1 (charge alignment)", w1.empty(), w1);
  rep.add("axiom 2 (shift)", w2.empty(), w2);
  rep.add("axiom 3 (hom vanishing)", w3.empty(), w3);
  rep.add("axiom 4 (HN filtrations)", w4.empty(), w4);
  return rep;
}

}  // namespace stablab
