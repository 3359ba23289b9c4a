#include "stablab/tilting.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <set>

#include "stablab/error.hpp"
#include "stablab/limits.hpp"
#include "stablab/metric.hpp"
#include "stablab/stability.hpp"

namespace stablab {

namespace {

using RefSet = std::set<IndecomposableRef>;

bool all_in(const ObjectExpr& e, const RefSet& s) {
  return std::all_of(e.summands().begin(), e.summands().end(), [&](const auto& r) { return s.count(r) > 0; });
}

std::vector<Triangle> short_exact_sequences(const CategoryModel& model, const Heart& heart) {
  std::vector<Triangle> out;
  for (const auto& m : heart.members)
    for (const auto& t : model.triangles_with_middle(m))
      if (is_short_exact_in(heart, t)) out.push_back(t);
  return out;
}

std::string names(const CategoryModel& model, const std::vector<IndecomposableRef>& refs) {
  std::string s = "{";
  for (const auto& r : refs) s += (s.size() > 1 ? "," : "") + model.ref_name(r);
  return s + "}";
}

std::vector<IndecomposableRef> perp(const CategoryModel& model, const Heart& heart,
                                    const std::vector<IndecomposableRef>& torsion) {
  std::vector<IndecomposableRef> out;
  for (const auto& m : heart.members)
    if (std::none_of(torsion.begin(), torsion.end(), [&](const auto& t) { return model.hom_nonzero(t, m); }))
      out.push_back(m);
  return out;
}

}  // namespace

Report check_torsion_pair(const CategoryModel& model, const Heart& heart, const TorsionPair& pair) {
  Report rep;
  RefSet t(pair.torsion.begin(), pair.torsion.end());
  RefSet f(pair.free.begin(), pair.free.end());
  for (const auto& x : pair.torsion)
    if (!heart.contains(x)) rep.add("torsion class lies in the heart", false, model.ref_name(x));
  for (const auto& x : pair.free)
    if (!heart.contains(x)) rep.add("free class lies in the heart", false, model.ref_name(x));
  for (const auto& x : pair.torsion)
    for (const auto& y : pair.free)
      if (model.hom_nonzero(x, y))
        rep.add("Hom(T, F) = 0", false, "Hom(" + model.ref_name(x) + ", " + model.ref_name(y) + ")");

  const auto seqs = short_exact_sequences(model, heart);
  for (const auto& s : seqs) {
    std::string name = model.expr_name(s.a) + " -> " + model.expr_name(s.b) + " -> " + model.expr_name(s.c);
    if (all_in(s.b, t) && !all_in(s.c, t)) rep.add("T closed under quotients", false, name);
    if (all_in(s.a, t) && all_in(s.c, t) && !all_in(s.b, t)) rep.add("T closed under extensions", false, name);
  }
  auto expected_free = perp(model, heart, pair.torsion);
  if (expected_free != pair.free) rep.add("F = T-perp", false, names(model, pair.free));
  std::vector<IndecomposableRef> left_perp;
  for (const auto& m : heart.members)
    if (std::none_of(pair.free.begin(), pair.free.end(), [&](const auto& y) { return model.hom_nonzero(m, y); }))
      left_perp.push_back(m);
  if (left_perp != pair.torsion) rep.add("T = perp-F", false, names(model, pair.torsion));

  for (const auto& m : heart.members) {
    if (t.count(m) || f.count(m)) continue;
    bool found = std::any_of(seqs.begin(), seqs.end(), [&](const Triangle& s) {
      return s.b == ObjectExpr(m) && all_in(s.a, t) && all_in(s.c, f);
    });
    if (!found) rep.add("every member has a torsion/free short exact sequence", false, model.ref_name(m));
  }
  if (rep.checks.empty()) rep.add("torsion pair", true);
  return rep;
}

TorsionPair torsion_pair_of(const CategoryModel& model, const Heart& heart, std::vector<IndecomposableRef> torsion) {
  std::sort(torsion.begin(), torsion.end());
  torsion.erase(std::unique(torsion.begin(), torsion.end()), torsion.end());
  TorsionPair pair{torsion, perp(model, heart, torsion)};
  Report rep = check_torsion_pair(model, heart, pair);
  if (const Check* f = rep.first_failure())
    throw Error(ErrorKind::ModelData, names(model, torsion) + " is not a torsion class: " + f->name + " (" + f->witness + ")");
  return pair;
}

std::vector<TorsionPair> enumerate_torsion_pairs(const CategoryModel& model, const Heart& heart) {
  const auto& members = heart.members;
  if (members.size() > 20) throw Error(ErrorKind::ModelTooLarge, "heart has too many members to enumerate subsets");
  std::vector<TorsionPair> out;
  for (std::uint32_t mask = 0; mask < (1u << members.size()); ++mask) {
    TorsionPair pair;
    for (std::size_t i = 0; i < members.size(); ++i)
      if ((mask >> i) & 1u) pair.torsion.push_back(members[i]);
    pair.free = perp(model, heart, pair.torsion);
    if (check_torsion_pair(model, heart, pair).ok()) out.push_back(std::move(pair));
  }
  return out;
}

std::vector<IndecomposableRef> extension_closure(const CategoryModel& model, std::vector<IndecomposableRef> members) {
  RefSet set(members.begin(), members.end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& t : model.rotation_closure) {
      if (t.a.is_zero() || t.c.is_zero()) continue;
      const auto& anchor = t.a.summands().front();
      for (const auto& x : std::vector<IndecomposableRef>(set.begin(), set.end())) {
        if (x.base != anchor.base) continue;
        Triangle s = t.shifted(x.shift - anchor.shift);
        if (!all_in(s.a, set) || !all_in(s.c, set)) continue;
        for (const auto& b : s.b.summands())
          if (set.insert(b).second) changed = true;
      }
    }
  }
  return {set.begin(), set.end()};
}

namespace {

Heart build_tilted(const CategoryModel& model, std::vector<IndecomposableRef> members, const char* what) {
  Heart h = make_heart(model, extension_closure(model, std::move(members)));
  Report rep = check_heart(model, h);
  if (const Check* f = rep.first_failure())
    throw Error(ErrorKind::ModelData, std::string(what) + " is not a valid heart: " + f->name + " (" + f->witness + ")");
  return h;
}

void require_torsion_pair(const CategoryModel& model, const Heart& heart, const TorsionPair& pair) {
  Report rep = check_torsion_pair(model, heart, pair);
  if (const Check* f = rep.first_failure())
    throw Error(ErrorKind::Precondition, "not a torsion pair of the heart: " + f->name + " (" + f->witness + ")");
}

}  // namespace

Heart left_tilt(const CategoryModel& model, const Heart& heart, const TorsionPair& pair) {
  require_torsion_pair(model, heart, pair);
  std::vector<IndecomposableRef> members(pair.free);
  for (const auto& t : pair.torsion) members.push_back(t.shifted(-1));
  return build_tilted(model, std::move(members), "left tilt");
}

Heart right_tilt(const CategoryModel& model, const Heart& heart, const TorsionPair& pair) {
  require_torsion_pair(model, heart, pair);
  std::vector<IndecomposableRef> members(pair.torsion);
  for (const auto& f : pair.free) members.push_back(f.shifted(1));
  return build_tilted(model, std::move(members), "right tilt");
}

TorsionPair torsion_from_intermediate(const CategoryModel& model, const Heart& a, const Heart& e) {
  Heart a_minus = a.shifted(-1);
  for (const auto& m : e.members) {
    if (a.contains(m) || a_minus.contains(m)) continue;
    bool spans = false;
    for (const auto& t : model.triangles_with_middle(m))
      if (!t.a.is_zero() && !t.c.is_zero() && a.contains_all(t.a) && a_minus.contains_all(t.c)) spans = true;
    if (!spans) throw Error(ErrorKind::Domain, "heart is not intermediate: " + model.ref_name(m) + " outside <A, A[-1]>");
  }
  std::vector<IndecomposableRef> torsion;
  for (const auto& m : a.members)
    if (e.contains(m.shifted(-1))) torsion.push_back(m);
  TorsionPair pair = torsion_pair_of(model, a, torsion);
  if (!(left_tilt(model, a, pair) == e))
    throw Error(ErrorKind::ModelData, "left tilt at " + names(model, torsion) + " does not reproduce the intermediate heart");
  return pair;
}

TiltDecomposition tilt_decompose_pair(const StabilityCondition& sigma, const StabilityCondition& tau) {
  const CategoryModel& model = sigma.category();
  MetricValue d = distance(sigma, tau);
  if (d.infinite() || d.value() >= 0.5)
    throw Error(ErrorKind::Precondition, "tilt decomposition needs distance < 1/2, got " + d.str());

  TiltDecomposition out;
  out.intermediate = slice_heart(tau, -0.5);
  out.left = torsion_from_intermediate(model, sigma.heart(), out.intermediate);
  TorsionPair from_tau = torsion_from_intermediate(model, tau.heart(), out.intermediate);
  out.right = torsion_pair_of(model, out.intermediate, from_tau.free);
  out.result = right_tilt(model, out.intermediate, out.right);
  return out;
}

TorsionPair limiting_torsion_pair(const StabilitySequence& seq) {
  if (seq.samples.empty()) throw Error(ErrorKind::NeedsMoreSamples, "empty sequence");
  const Heart& a = seq.samples.front().sigma.heart();
  for (const auto& s : seq.samples)
    if (!(s.sigma.heart() == a)) throw Error(ErrorKind::Domain, "sequence samples have differing hearts");
  const CategoryModel& model = seq.samples.front().sigma.category();
  const LimitOptions& opt = seq.options;
  std::vector<IndecomposableRef> torsion;
  for (const auto& m : a.members) {
    LimitingFiltration lim = limit_hn(seq, ObjectExpr(m));
    double theta_plus = lim.factors.front().theta;
    if (theta_plus > opt.phase_tolerance) torsion.push_back(m);
  }
  TorsionPair pair = torsion_pair_of(model, a, torsion);
  Heart expected = right_tilt(model, a, pair);
  StabilityCondition limit = limit_stability(seq);
  if (!(expected == limit.heart()))
    throw Error(ErrorKind::Diagnostic, "right tilt at the limiting torsion class differs from the limit heart");
  return pair;
}

std::optional<int> heart_span(const CategoryModel& model, const Heart& heart) {
  std::map<int, int> standard;
  for (const auto& r : standard_heart(model).members) standard[r.base] = r.shift;
  int lo = std::numeric_limits<int>::max(), hi = std::numeric_limits<int>::min();
  for (const auto& m : heart.members) {
    auto it = standard.find(m.base);
    if (it == standard.end()) return std::nullopt;
    lo = std::min(lo, m.shift - it->second);
    hi = std::max(hi, m.shift - it->second);
  }
  if (heart.members.empty()) return std::nullopt;
  return hi - lo;
}

HeartAtlas heart_atlas(const CategoryModel& model) {
  HeartAtlas atlas;
  atlas.insert(standard_heart(model), 0);
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    std::size_t i = queue.front();
    queue.pop_front();
    const Heart h = atlas.hearts()[i];
    const std::size_t depth = atlas.depth()[i];
    for (const auto& pair : enumerate_torsion_pairs(model, h)) {
      for (bool left : {true, false}) {
        Heart tilted = left ? left_tilt(model, h, pair) : right_tilt(model, h, pair);
        auto span = heart_span(model, tilted);
        if (!span || *span > model.atlas_span) continue;
        std::size_t before = atlas.size();
        HeartId id = atlas.insert(tilted, depth + 1);
        if (atlas.size() > model.atlas_cap)
          throw Error(ErrorKind::ModelTooLarge, "heart atlas exceeds " + std::to_string(model.atlas_cap) + " hearts");
        if (atlas.size() > before) queue.push_back(id.index);
        atlas.add_edge({i, pair.torsion, left, id});
      }
    }
  }
  return atlas;
}

}  // namespace stablab
