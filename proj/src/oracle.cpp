#include "stablab/oracle.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

#include "stablab/error.hpp"

namespace stablab::oracle {

namespace {

int parity(std::uint32_t x) { return std::popcount(x) & 1; }

// f(x) for a matrix stored as row bitmasks.
std::uint32_t apply_map(const std::vector<std::uint32_t>& rows, std::uint32_t x) {
  std::uint32_t y = 0;
  for (std::size_t r = 0; r < rows.size(); ++r)
    if (parity(rows[r] & x)) y |= (1u << r);
  return y;
}

bool contains(Subspace s, std::uint32_t v) { return (s >> v) & 1u; }

Subspace span_with(Subspace s, std::uint32_t v) {
  Subspace out = s;
  for (std::uint32_t w = 0; w < 32; ++w)
    if (contains(s, w)) out |= (1u << (w ^ v));
  return out;
}

// Image of a subspace under a linear map, as a subspace of the target.
Subspace image(const std::vector<std::uint32_t>& rows, Subspace s) {
  Subspace out = 1u;
  for (std::uint32_t w = 0; w < 32; ++w)
    if (contains(s, w)) out |= (1u << apply_map(rows, w));
  return out;
}

bool subset(Subspace a, Subspace b) { return (a & ~b) == 0; }

Subspace full_space(int d) { return d >= 5 ? 0xFFFFFFFFu : (1u << (1u << d)) - 1u; }

int total_dim(const std::vector<int>& d) {
  int t = 0;
  for (int x : d) t += x;
  return t;
}

}  // namespace

std::vector<Subspace> subspaces(int d) {
  if (d < 0 || d > 5) throw Error(ErrorKind::Refused, "subspace enumeration beyond F2^5");
  std::set<Subspace> found{1u};
  std::vector<Subspace> frontier{1u};
  const std::uint32_t nvec = 1u << d;
  while (!frontier.empty()) {
    std::vector<Subspace> next;
    for (Subspace s : frontier)
      for (std::uint32_t v = 1; v < nvec; ++v) {
        if (contains(s, v)) continue;
        Subspace t = span_with(s, v);
        if (found.insert(t).second) next.push_back(t);
      }
    frontier = std::move(next);
  }
  return {found.begin(), found.end()};
}

int subspace_dim(Subspace s) { return std::countr_zero(static_cast<std::uint32_t>(std::popcount(s))); }

std::vector<int> Subrep::dims() const {
  std::vector<int> d;
  for (Subspace s : spaces) d.push_back(subspace_dim(s));
  return d;
}

QuiverRep zero_rep(const Quiver& q) {
  QuiverRep r;
  r.dims.assign(q.vertices, 0);
  r.maps.assign(q.arrows.size(), {});
  return r;
}

QuiverRep direct_sum(const Quiver& q, const QuiverRep& a, const QuiverRep& b) {
  QuiverRep r;
  for (int v = 0; v < q.vertices; ++v) r.dims.push_back(a.dims[v] + b.dims[v]);
  for (std::size_t k = 0; k < q.arrows.size(); ++k) {
    auto [s, t] = q.arrows[k];
    std::vector<std::uint32_t> rows;
    for (int i = 0; i < a.dims[t]; ++i) rows.push_back(a.maps[k][i]);
    for (int i = 0; i < b.dims[t]; ++i) rows.push_back(b.maps[k][i] << a.dims[s]);
    r.maps.push_back(std::move(rows));
  }
  return r;
}

std::vector<Subrep> subrepresentations(const Quiver& q, const QuiverRep& rep) {
  for (int d : rep.dims)
    if (d > kMaxDim) throw Error(ErrorKind::Refused, "oracle is limited to dimension 3 per vertex");
  std::vector<std::vector<Subspace>> per_vertex;
  for (int d : rep.dims) per_vertex.push_back(subspaces(d));
  std::vector<Subrep> out;
  std::vector<Subspace> current(q.vertices);
  auto rec = [&](auto&& self, int v) -> void {
    if (v == q.vertices) {
      for (std::size_t k = 0; k < q.arrows.size(); ++k) {
        auto [s, t] = q.arrows[k];
        if (!subset(image(rep.maps[k], current[s]), current[t])) return;
      }
      out.push_back({current});
      return;
    }
    for (Subspace s : per_vertex[v]) {
      current[v] = s;
      self(self, v + 1);
    }
  };
  rec(rec, 0);
  return out;
}

int rank_f2(const std::vector<std::uint32_t>& rows_in) {
  std::vector<std::uint32_t> rows(rows_in);
  int rank = 0;
  for (int bit = 0; bit < 32; ++bit) {
    auto it = std::find_if(rows.begin() + rank, rows.end(), [&](std::uint32_t r) { return (r >> bit) & 1u; });
    if (it == rows.end()) continue;
    std::swap(*it, rows[rank]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (static_cast<int>(i) != rank && ((rows[i] >> bit) & 1u)) rows[i] ^= rows[rank];
    ++rank;
  }
  return rank;
}

int hom_dim(const Quiver& q, const QuiverRep& a, const QuiverRep& b) {
  // unknowns: one d_b x d_a matrix per vertex
  int bits = 0;
  for (int v = 0; v < q.vertices; ++v) bits += a.dims[v] * b.dims[v];
  if (bits > 20) throw Error(ErrorKind::Refused, "hom enumeration too large");
  long long solutions = 0;
  for (std::uint32_t code = 0; code < (1u << bits); ++code) {
    std::vector<std::vector<std::uint32_t>> phi(q.vertices);
    int off = 0;
    for (int v = 0; v < q.vertices; ++v) {
      for (int r = 0; r < b.dims[v]; ++r) {
        phi[v].push_back((code >> off) & ((1u << a.dims[v]) - 1u));
        off += a.dims[v];
      }
    }
    bool ok = true;
    for (std::size_t k = 0; k < q.arrows.size() && ok; ++k) {
      auto [s, t] = q.arrows[k];
      for (std::uint32_t x = 0; x < (1u << a.dims[s]) && ok; ++x)
        ok = apply_map(phi[t], apply_map(a.maps[k], x)) == apply_map(b.maps[k], apply_map(phi[s], x));
    }
    if (ok) ++solutions;
  }
  return std::countr_zero(static_cast<unsigned long long>(solutions));
}

int euler_form(const Quiver& q, const std::vector<int>& a, const std::vector<int>& b) {
  int e = 0;
  for (int v = 0; v < q.vertices; ++v) e += a[v] * b[v];
  for (auto [s, t] : q.arrows) e -= a[s] * b[t];
  return e;
}

int ext1_dim(const Quiver& q, const QuiverRep& a, const QuiverRep& b) {
  return hom_dim(q, a, b) - euler_form(q, a.dims, b.dims);
}

bool isomorphic(const Quiver& q, const QuiverRep& a, const QuiverRep& b) {
  if (a.dims != b.dims) return false;
  for (std::size_t k = 0; k < q.arrows.size(); ++k)
    if (rank_f2(a.maps[k]) != rank_f2(b.maps[k])) return false;
  return true;
}

namespace {

// Rank of the map induced by arrow k on V/U.
int quotient_rank(const Quiver& q, const QuiverRep& rep, const Subrep& sub, std::size_t k) {
  auto [s, t] = q.arrows[k];
  Subspace img = image(rep.maps[k], full_space(rep.dims[s]));
  Subspace sum = sub.spaces[t];
  for (std::uint32_t w = 0; w < 32; ++w)
    if (contains(img, w)) sum = span_with(sum, w);
  return subspace_dim(sum) - subspace_dim(sub.spaces[t]);
}

// Rank of arrow k restricted to U.
int sub_rank(const Quiver& q, const QuiverRep& rep, const Subrep& sub, std::size_t k) {
  auto [s, t] = q.arrows[k];
  (void)t;
  return subspace_dim(image(rep.maps[k], sub.spaces[s]));
}

}  // namespace

bool has_short_exact_sequence(const Quiver& q, const QuiverRep& sub, const QuiverRep& mid, const QuiverRep& quot) {
  for (const auto& u : subrepresentations(q, mid)) {
    auto d = u.dims();
    if (d != sub.dims) continue;
    std::vector<int> qd;
    for (int v = 0; v < q.vertices; ++v) qd.push_back(mid.dims[v] - d[v]);
    if (qd != quot.dims) continue;
    bool ok = true;
    for (std::size_t k = 0; k < q.arrows.size() && ok; ++k)
      ok = sub_rank(q, mid, u, k) == rank_f2(sub.maps[k]) && quotient_rank(q, mid, u, k) == rank_f2(quot.maps[k]);
    if (ok) return true;
  }
  return false;
}

std::vector<OracleFactor> oracle_hn(const Quiver& q, const QuiverRep& rep,
                                    const std::vector<ComplexValue>& vertex_charges) {
  for (int d : rep.dims)
    if (d > kMaxDim) throw Error(ErrorKind::Refused, "oracle is limited to dimension 3 per vertex");
  if (total_dim(rep.dims) == 0) throw Error(ErrorKind::Domain, "oracle HN of the zero representation");
  for (const auto& z : vertex_charges)
    if (!z.exact() || !z.in_semiclosed_upper_half_plane())
      throw Error(ErrorKind::Domain, "oracle needs exact vertex charges in the semiclosed upper half-plane");

  auto charge_of = [&](const std::vector<int>& d) {
    ComplexValue z;
    for (int v = 0; v < q.vertices; ++v) z += vertex_charges[v] * d[v];
    return z;
  };
  // phase(a) > phase(b) for nonzero classes of the standard heart
  auto steeper = [](const ComplexValue& a, const ComplexValue& b) { return cross_sign(b, a) > 0; };

  const auto subs = subrepresentations(q, rep);
  std::vector<OracleFactor> factors;
  std::vector<Subspace> current(q.vertices, 1u);  // E_i, starts at 0
  std::vector<int> current_dims(q.vertices, 0);
  while (current_dims != rep.dims) {
    const Subrep* best = nullptr;
    ComplexValue best_z;
    int best_dim = -1;
    bool tie = false;
    for (const auto& u : subs) {
      bool contains_current = true;
      for (int v = 0; v < q.vertices; ++v) contains_current = contains_current && subset(current[v], u.spaces[v]);
      if (!contains_current) continue;
      auto d = u.dims();
      if (d == current_dims) continue;
      std::vector<int> diff(q.vertices);
      for (int v = 0; v < q.vertices; ++v) diff[v] = d[v] - current_dims[v];
      ComplexValue z = charge_of(diff);
      int dim = total_dim(diff);
      if (!best || steeper(z, best_z) || (cross_sign(z, best_z) == 0 && dim > best_dim)) {
        best = &u;
        best_z = z;
        best_dim = dim;
        tie = false;
      } else if (cross_sign(z, best_z) == 0 && dim == best_dim) {
        tie = true;
      }
    }
    if (tie) throw Error(ErrorKind::UniquenessViolation, "two maximal destabilising subobjects");
    std::vector<int> d = best->dims();
    LatticeClass cls;
    for (int v = 0; v < q.vertices; ++v) cls.push_back(d[v] - current_dims[v]);
    factors.push_back({cls, best_z, best_z.phase_in_window()});
    current = best->spaces;
    current_dims = d;
  }
  return factors;
}

ObjectExpr decompose(const CategoryModel& model, const QuiverRep& rep) {
  if (!model.quiver) throw Error(ErrorKind::Domain, "model has no quiver");
  const Quiver& q = *model.quiver;
  if (q.arrows.size() > 1) throw Error(ErrorKind::Refused, "decomposition implemented for A1 and A2 only");
  auto find = [&](const std::vector<int>& dims, int rank) {
    for (int i = 0; i < static_cast<int>(model.indecomposables.size()); ++i) {
      const auto& r = model.indecomposables[i].rep;
      if (!r || r->dims != dims) continue;
      if (q.arrows.empty() || rank_f2(r->maps[0]) == rank) return i;
    }
    throw Error(ErrorKind::ModelData, "no indecomposable matches representation");
  };
  std::vector<IndecomposableRef> refs;
  if (q.arrows.empty()) {
    for (int v = 0; v < q.vertices; ++v) {
      std::vector<int> unit(q.vertices, 0);
      unit[v] = 1;
      for (int k = 0; k < rep.dims[v]; ++k) refs.push_back({find(unit, 0), 0});
    }
    return ObjectExpr(std::move(refs));
  }
  auto [s, t] = q.arrows[0];
  int r = rank_f2(rep.maps[0]);
  std::vector<int> both(q.vertices, 0), src(q.vertices, 0), tgt(q.vertices, 0);
  both[s] = both[t] = 1;
  src[s] = 1;
  tgt[t] = 1;
  for (int k = 0; k < r; ++k) refs.push_back({find(both, 1), 0});
  for (int k = 0; k < rep.dims[s] - r; ++k) refs.push_back({find(src, 0), 0});
  for (int k = 0; k < rep.dims[t] - r; ++k) refs.push_back({find(tgt, 0), 0});
  return ObjectExpr(std::move(refs));
}

std::vector<QuiverRep> all_representations(const Quiver& q, int bound) {
  std::vector<QuiverRep> out;
  std::vector<int> dims(q.vertices, 0);
  auto rec_dims = [&](auto&& self, int v) -> void {
    if (v == q.vertices) {
      if (total_dim(dims) == 0) return;
      int bits = 0;
      for (auto [s, t] : q.arrows) bits += dims[s] * dims[t];
      for (std::uint32_t code = 0; code < (1u << bits); ++code) {
        QuiverRep r;
        r.dims = dims;
        int off = 0;
        for (auto [s, t] : q.arrows) {
          std::vector<std::uint32_t> rows;
          for (int i = 0; i < dims[t]; ++i) {
            rows.push_back((code >> off) & ((1u << dims[s]) - 1u));
            off += dims[s];
          }
          r.maps.push_back(std::move(rows));
        }
        out.push_back(std::move(r));
      }
      return;
    }
    for (int d = 0; d <= bound; ++d) {
      dims[v] = d;
      self(self, v + 1);
    }
  };
  rec_dims(rec_dims, 0);
  return out;
}

}  // namespace stablab::oracle
