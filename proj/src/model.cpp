#include "stablab/model.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "stablab/error.hpp"
#include "stablab/exact.hpp"
#include "stablab/oracle.hpp"
#include "stablab/tilting.hpp"

namespace stablab {

LatticeClass operator+(const LatticeClass& a, const LatticeClass& b) {
  LatticeClass r(a);
  if (r.size() < b.size()) r.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

LatticeClass operator-(const LatticeClass& a, const LatticeClass& b) { return a + b * -1; }

LatticeClass operator*(const LatticeClass& a, std::int64_t k) {
  LatticeClass r(a);
  for (auto& x : r) x *= k;
  return r;
}

ObjectExpr::ObjectExpr(std::vector<IndecomposableRef> summands) : summands_(std::move(summands)) {
  std::sort(summands_.begin(), summands_.end());
}

ObjectExpr ObjectExpr::shifted(int k) const {
  ObjectExpr r(*this);
  for (auto& s : r.summands_) s.shift += k;
  return r;
}

ObjectExpr ObjectExpr::operator+(const ObjectExpr& other) const {
  std::vector<IndecomposableRef> all(summands_);
  all.insert(all.end(), other.summands_.begin(), other.summands_.end());
  return ObjectExpr(std::move(all));
}

int ObjectExpr::min_shift() const {
  int m = summands_.empty() ? 0 : summands_.front().shift;
  for (const auto& s : summands_) m = std::min(m, s.shift);
  return m;
}

Triangle Triangle::canonical() const {
  int m = a.min_shift();
  if (!b.is_zero()) m = std::min(m, b.min_shift());
  if (!c.is_zero()) m = std::min(m, c.min_shift());
  return shifted(-m);
}

bool Heart::contains(const IndecomposableRef& r) const {
  return std::binary_search(members.begin(), members.end(), r);
}

bool Heart::contains_all(const ObjectExpr& e) const {
  return std::all_of(e.summands().begin(), e.summands().end(), [&](const auto& s) { return contains(s); });
}

std::optional<IndecomposableRef> Heart::member_with_base(int base) const {
  for (const auto& m : members)
    if (m.base == base) return m;
  return std::nullopt;
}

Heart Heart::shifted(int k) const {
  Heart h(*this);
  for (auto& m : h.members) m.shift += k;
  for (auto& s : h.simples) s.shift += k;
  return h;
}

int Heart::min_shift() const {
  int m = members.empty() ? 0 : members.front().shift;
  for (const auto& r : members) m = std::min(m, r.shift);
  return m;
}

std::optional<HeartId> HeartAtlas::resolve(const Heart& h) const {
  if (h.members.empty()) return std::nullopt;
  int shift = h.min_shift();
  auto it = index_.find(h.shifted(-shift).members);
  if (it == index_.end()) return std::nullopt;
  return HeartId{it->second, shift};
}

HeartId HeartAtlas::insert(const Heart& h, std::size_t depth) {
  if (auto id = resolve(h)) return *id;
  int shift = h.min_shift();
  Heart canonical = h.shifted(-shift);
  index_.emplace(canonical.members, hearts_.size());
  hearts_.push_back(std::move(canonical));
  depth_.push_back(depth);
  return {hearts_.size() - 1, shift};
}

void CategoryModel::prepare() {
  rotation_closure.clear();
  by_middle.clear();
  std::set<Triangle> seen;
  for (const auto& t : triangles) {
    Triangle r = t;
    for (int i = 0; i < 3; ++i) {
      Triangle c = r.canonical();
      if (seen.insert(c).second) rotation_closure.push_back(c);
      r = r.rotated();
    }
  }
  for (std::size_t i = 0; i < rotation_closure.size(); ++i) {
    const auto& t = rotation_closure[i];
    if (t.b.is_indecomposable()) by_middle[t.b.single().base].push_back(i);
  }
}

int CategoryModel::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < indecomposables.size(); ++i)
    if (indecomposables[i].id == id) return static_cast<int>(i);
  throw Error(ErrorKind::ModelMismatch, "unknown indecomposable '" + std::string(id) + "'");
}

LatticeClass CategoryModel::class_of(const IndecomposableRef& r) const {
  if (r.base < 0 || r.base >= static_cast<int>(indecomposables.size()))
    throw Error(ErrorKind::ModelMismatch, "indecomposable index out of range");
  return indecomposables[r.base].cls * ((r.shift % 2 == 0) ? 1 : -1);
}

LatticeClass CategoryModel::class_of(const ObjectExpr& e) const {
  LatticeClass total(lattice_rank, 0);
  for (const auto& s : e.summands()) total = total + class_of(s);
  return total;
}

bool CategoryModel::hom_nonzero(const IndecomposableRef& a, const IndecomposableRef& b) const {
  if (a == b) return true;
  return hom.count({a.base, a.shift - b.shift, b.base}) > 0;
}

bool CategoryModel::hom_nonzero(const ObjectExpr& a, const ObjectExpr& b) const {
  for (const auto& x : a.summands())
    for (const auto& y : b.summands())
      if (hom_nonzero(x, y)) return true;
  return false;
}

std::vector<Triangle> CategoryModel::triangles_with_middle(const IndecomposableRef& u) const {
  std::vector<Triangle> out;
  auto it = by_middle.find(u.base);
  if (it == by_middle.end()) return out;
  for (std::size_t i : it->second) {
    const auto& t = rotation_closure[i];
    out.push_back(t.shifted(u.shift - t.b.single().shift));
  }
  return out;
}

std::string CategoryModel::ref_name(const IndecomposableRef& r) const {
  std::string s = indecomposables.at(r.base).id;
  if (r.shift != 0) s += "[" + std::to_string(r.shift) + "]";
  return s;
}

std::string CategoryModel::expr_name(const ObjectExpr& e) const {
  if (e.is_zero()) return "0";
  std::string s;
  for (const auto& r : e.summands()) {
    if (!s.empty()) s += "+";
    s += ref_name(r);
  }
  return s;
}

IndecomposableRef CategoryModel::parse_ref(std::string_view text) const {
  std::string t;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
  if (t.empty()) throw Error(ErrorKind::Parse, "empty object reference");
  int shift = 0;
  std::string id = t;
  auto parse_int = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      int v = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, "bad shift in '" + t + "'");
    }
  };
  if (auto at = t.find('@'); at != std::string::npos) {
    id = t.substr(0, at);
    shift = parse_int(t.substr(at + 1));
  } else if (auto br = t.find('['); br != std::string::npos) {
    if (t.back() != ']') throw Error(ErrorKind::Parse, "unterminated shift in '" + t + "'");
    id = t.substr(0, br);
    shift = parse_int(t.substr(br + 1, t.size() - br - 2));
  }
  return {index_of(id), shift};
}

ObjectExpr CategoryModel::parse_object(std::string_view text) const {
  std::vector<IndecomposableRef> refs;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t plus = text.find('+', start);
    std::string_view part = text.substr(start, plus == std::string_view::npos ? std::string_view::npos : plus - start);
    std::string trimmed;
    for (char ch : part)
      if (!std::isspace(static_cast<unsigned char>(ch))) trimmed += ch;
    if (trimmed == "0" && text.find('+') == std::string_view::npos) return {};
    refs.push_back(parse_ref(trimmed));
    if (plus == std::string_view::npos) break;
    start = plus + 1;
  }
  return ObjectExpr(std::move(refs));
}

bool is_short_exact_in(const Heart& heart, const Triangle& t) {
  return !t.a.is_zero() && !t.c.is_zero() && heart.contains_all(t.a) && heart.contains_all(t.b) &&
         heart.contains_all(t.c);
}

Heart make_heart(const CategoryModel& model, std::vector<IndecomposableRef> members) {
  Heart h;
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  h.members = std::move(members);
  for (const auto& m : h.members) {
    bool has_sub = false;
    for (const auto& t : model.triangles_with_middle(m))
      if (is_short_exact_in(h, t)) {
        has_sub = true;
        break;
      }
    if (!has_sub) h.simples.push_back(m);
  }
  return h;
}

Heart standard_heart(const CategoryModel& model) {
  std::vector<IndecomposableRef> members = model.standard_heart;
  if (members.empty())
    for (int i = 0; i < static_cast<int>(model.indecomposables.size()); ++i) members.push_back({i, 0});
  return make_heart(model, std::move(members));
}

namespace {

// Solves basis * x = target over Q; nullopt when singular.
std::optional<std::vector<Rational>> solve(std::vector<std::vector<Rational>> m, std::vector<Rational> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col].is_zero()) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col].is_zero()) continue;
      Rational f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] = m[r][c] - f * m[col][c];
      rhs[r] = rhs[r] - f * rhs[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) rhs[i] = rhs[i] / m[i][i];
  return rhs;
}

Rational determinant(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  Rational det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col].is_zero()) ++piv;
    if (piv == n) return Rational(0);
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det = det * m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col].is_zero()) continue;
      Rational f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] = m[r][c] - f * m[col][c];
    }
  }
  return det;
}

}  // namespace

Report check_heart(const CategoryModel& model, const Heart& heart) {
  Report rep;
  const std::size_t n = static_cast<std::size_t>(model.lattice_rank);
  if (heart.simples.size() != n) {
    rep.add("heart simples span lattice", false,
            std::to_string(heart.simples.size()) + " simples for rank " + std::to_string(n));
    return rep;
  }
  // columns are simple classes
  std::vector<std::vector<Rational>> basis(n, std::vector<Rational>(n));
  for (std::size_t j = 0; j < n; ++j) {
    auto cls = model.class_of(heart.simples[j]);
    for (std::size_t i = 0; i < n; ++i) basis[i][j] = Rational(cls[i]);
  }
  Rational det = determinant(basis);
  bool unimodular = det == Rational(1) || det == Rational(-1);
  rep.add("heart simples form a lattice basis", unimodular, unimodular ? "" : "determinant " + det.str());
  if (!unimodular) return rep;
  for (const auto& m : heart.members) {
    auto cls = model.class_of(m);
    std::vector<Rational> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = Rational(cls[i]);
    auto x = solve(basis, rhs);
    bool ok = x.has_value() && std::all_of(x->begin(), x->end(), [](const Rational& q) {
      return q.den() == 1 && q.sign() >= 0;
    });
    if (!ok) rep.add("member is a nonnegative combination of simples", false, model.ref_name(m));
  }
  return rep;
}

namespace {

std::optional<QuiverRep> rep_of(const CategoryModel& model, const ObjectExpr& e) {
  const Quiver& q = *model.quiver;
  QuiverRep total = oracle::zero_rep(q);
  for (const auto& s : e.summands()) {
    if (s.shift != 0) return std::nullopt;
    const auto& r = model.indecomposables[s.base].rep;
    if (!r) return std::nullopt;
    total = oracle::direct_sum(q, total, *r);
  }
  return total;
}

void oracle_cross_validate(const CategoryModel& model, Report& rep) {
  const Quiver& q = *model.quiver;
  const int count = static_cast<int>(model.indecomposables.size());
  for (const auto& ind : model.indecomposables) {
    if (!ind.rep) {
      rep.add("oracle: every indecomposable has a representation", false, ind.id);
      return;
    }
    LatticeClass dims(ind.rep->dims.begin(), ind.rep->dims.end());
    if (dims != ind.cls) rep.add("oracle: class equals dimension vector", false, ind.id);
  }
  for (int u = 0; u < count; ++u) {
    for (int v = 0; v < count; ++v) {
      const auto& ru = *model.indecomposables[u].rep;
      const auto& rv = *model.indecomposables[v].rep;
      bool hom0 = oracle::hom_dim(q, ru, rv) > 0;
      bool ext1 = oracle::ext1_dim(q, ru, rv) > 0;
      std::string pair = model.indecomposables[u].id + "," + model.indecomposables[v].id;
      if (hom0 != model.hom_nonzero(IndecomposableRef{u, 0}, IndecomposableRef{v, 0}))
        rep.add("oracle: hom-table matches Hom over F2", false, "Hom(" + pair + ")");
      if (ext1 != model.hom_nonzero(IndecomposableRef{u, -1}, IndecomposableRef{v, 0}))
        rep.add("oracle: hom-table matches Ext^1 over F2", false, "Ext1(" + pair + ")");
    }
  }
  for (const auto& [u, d, v] : model.hom) {
    if (d != 0 && d != -1)
      rep.add("oracle: hereditary hom-table uses shifts 0 and -1 only", false,
              model.indecomposables[u].id + "@" + std::to_string(d));
  }
  for (const auto& t : model.rotation_closure) {
    auto a = rep_of(model, t.a);
    auto b = rep_of(model, t.b);
    auto c = rep_of(model, t.c);
    if (!a || !b || !c) continue;
    if (!oracle::has_short_exact_sequence(q, *a, *b, *c))
      rep.add("oracle: triangle realised by a short exact sequence", false,
              model.expr_name(t.a) + " -> " + model.expr_name(t.b) + " -> " + model.expr_name(t.c));
  }
  rep.add("oracle cross-validation ran", true);
}

}  // namespace

Report validate_model(const CategoryModel& model_in) {
  CategoryModel model = model_in;
  model.prepare();
  Report rep;
  if (model.lattice_rank <= 0 || model.indecomposables.empty()) {
    rep.add("model is nondegenerate", false, "lattice rank " + std::to_string(model.lattice_rank));
    return rep;
  }
  rep.add("model is nondegenerate", true);

  std::set<std::string> ids;
  for (const auto& ind : model.indecomposables) {
    if (!ids.insert(ind.id).second) rep.add("indecomposable ids are unique", false, ind.id);
    if (static_cast<int>(ind.cls.size()) != model.lattice_rank)
      rep.add("class length equals lattice rank", false, ind.id);
  }

  std::set<Triangle> closure(model.rotation_closure.begin(), model.rotation_closure.end());
  for (const auto& t : model.triangles) {
    std::string name = model.expr_name(t.a) + " -> " + model.expr_name(t.b) + " -> " + model.expr_name(t.c);
    if (t.a.is_zero() || t.b.is_zero() || t.c.is_zero()) {
      rep.add("triangle terms are nonzero", false, name);
      continue;
    }
    for (int k : {-1, 1})
      if (!closure.count(t.shifted(k).canonical())) rep.add("triangle list is closed under shift", false, name);
    if (model.class_of(t.b) != model.class_of(t.a) + model.class_of(t.c))
      rep.add("class additivity on triangles", false, name);
  }
  for (const auto& t : model.rotation_closure) {
    std::string name = model.expr_name(t.a) + " -> " + model.expr_name(t.b) + " -> " + model.expr_name(t.c);
    if (!model.hom_nonzero(t.a, t.b) || !model.hom_nonzero(t.b, t.c))
      rep.add("hom-table consistent with triangles", false, name);
  }

  Report heart = check_heart(model, standard_heart(model));
  for (auto& c : heart.checks) c.name = "standard heart: " + c.name;
  rep.append(heart);

  if (model.quiver) oracle_cross_validate(model, rep);
  return rep;
}

ModelPtr finalize_model(CategoryModel model) {
  model.prepare();
  Report rep = validate_model(model);
  if (const Check* f = rep.first_failure()) throw Error(ErrorKind::ModelData, f->name + " (" + f->witness + ")");
  model.atlas = heart_atlas(model);
  return std::make_shared<const CategoryModel>(std::move(model));
}

}  // namespace stablab
