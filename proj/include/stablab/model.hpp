#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "stablab/report.hpp"

namespace stablab {

/// Class in the rank-n lattice the central charge factors through.
using LatticeClass = std::vector<std::int64_t>;

LatticeClass operator+(const LatticeClass& a, const LatticeClass& b);
LatticeClass operator-(const LatticeClass& a, const LatticeClass& b);
LatticeClass operator*(const LatticeClass& a, std::int64_t k);

/// The object base[shift].
struct IndecomposableRef {
  int base = 0;
  int shift = 0;

  IndecomposableRef shifted(int k) const { return {base, shift + k}; }
  friend auto operator<=>(const IndecomposableRef&, const IndecomposableRef&) = default;
};

/// Formal direct sum of shifted indecomposables. The empty sum is the zero
/// object.
class ObjectExpr {
 public:
  ObjectExpr() = default;
  ObjectExpr(IndecomposableRef r) : summands_{r} {}
  explicit ObjectExpr(std::vector<IndecomposableRef> summands);

  const std::vector<IndecomposableRef>& summands() const { return summands_; }
  bool is_zero() const { return summands_.empty(); }
  bool is_indecomposable() const { return summands_.size() == 1; }
  const IndecomposableRef& single() const { return summands_.front(); }

  ObjectExpr shifted(int k) const;
  ObjectExpr operator+(const ObjectExpr& other) const;
  int min_shift() const;

  friend auto operator<=>(const ObjectExpr&, const ObjectExpr&) = default;

 private:
  std::vector<IndecomposableRef> summands_;  // sorted
};

/// Exact triangle a -> b -> c -> a[1].
struct Triangle {
  ObjectExpr a, b, c;

  Triangle shifted(int k) const { return {a.shifted(k), b.shifted(k), c.shifted(k)}; }
  /// b -> c -> a[1] -> b[1]
  Triangle rotated() const { return {b, c, a.shifted(1)}; }
  /// Representative with minimal summand shift 0.
  Triangle canonical() const;

  friend auto operator<=>(const Triangle&, const Triangle&) = default;
};

/// Representation of a quiver over F2; maps[arrow] is a d_target x d_source
/// matrix stored as one bitmask per row.
struct QuiverRep {
  std::vector<int> dims;
  std::vector<std::vector<std::uint32_t>> maps;
};

struct Quiver {
  int vertices = 0;
  std::vector<std::pair<int, int>> arrows;
};

struct Indecomposable {
  std::string id;
  std::string name;
  LatticeClass cls;
  std::optional<QuiverRep> rep;
};

struct Heart {
  std::vector<IndecomposableRef> members;  // sorted
  std::vector<IndecomposableRef> simples;  // sorted

  bool contains(const IndecomposableRef& r) const;
  bool contains_all(const ObjectExpr& e) const;
  /// The member with the given base id, if any.
  std::optional<IndecomposableRef> member_with_base(int base) const;
  Heart shifted(int k) const;
  int min_shift() const;

  friend bool operator==(const Heart& a, const Heart& b) { return a.members == b.members; }
};

struct HeartId {
  std::size_t index = 0;
  int shift = 0;
  friend bool operator==(const HeartId&, const HeartId&) = default;
};

struct TiltEdge {
  std::size_t from = 0;
  std::vector<IndecomposableRef> torsion;  // torsion class, members of hearts[from]
  bool left = true;
  HeartId to;
};

/// Registry of hearts up to shift. hearts[0] is the standard heart; every
/// stored heart has minimal member shift 0.
class HeartAtlas {
 public:
  const std::vector<Heart>& hearts() const { return hearts_; }
  const std::vector<TiltEdge>& edges() const { return edges_; }
  /// Length of the BFS tilt chain from the standard heart.
  const std::vector<std::size_t>& depth() const { return depth_; }
  std::size_t size() const { return hearts_.size(); }

  std::optional<HeartId> resolve(const Heart& h) const;
  Heart heart(const HeartId& id) const { return hearts_.at(id.index).shifted(id.shift); }

  /// Adds the canonical form of h if new; returns its id.
  HeartId insert(const Heart& h, std::size_t depth);
  void add_edge(TiltEdge e) { edges_.push_back(std::move(e)); }

 private:
  std::vector<Heart> hearts_;
  std::vector<TiltEdge> edges_;
  std::vector<std::size_t> depth_;
  std::map<std::vector<IndecomposableRef>, std::size_t> index_;
};

struct CategoryModel {
  std::string name;
  int lattice_rank = 0;
  std::vector<Indecomposable> indecomposables;
  std::vector<Triangle> triangles;             // canonical, as listed
  std::set<std::tuple<int, int, int>> hom;     // (u, d, v): Hom(u[d], v) != 0
  std::optional<Quiver> quiver;
  std::vector<IndecomposableRef> standard_heart;  // empty: every indecomposable at shift 0
  std::size_t max_hn_length = 16;  // per indecomposable summand
  std::size_t atlas_cap = 10000;
  /// hearts whose members spread over more shifts are left out of the atlas
  int atlas_span = 1;
  int axiom_shift_window = 2;

  // derived by prepare()
  std::vector<Triangle> rotation_closure;
  std::map<int, std::vector<std::size_t>> by_middle;
  HeartAtlas atlas;

  void prepare();

  int index_of(std::string_view id) const;
  LatticeClass class_of(const IndecomposableRef& r) const;
  LatticeClass class_of(const ObjectExpr& e) const;

  bool hom_nonzero(const IndecomposableRef& a, const IndecomposableRef& b) const;
  bool hom_nonzero(const ObjectExpr& a, const ObjectExpr& b) const;

  /// Listed triangles (closed under rotation and shift) with middle term u.
  std::vector<Triangle> triangles_with_middle(const IndecomposableRef& u) const;

  std::string ref_name(const IndecomposableRef& r) const;
  std::string expr_name(const ObjectExpr& e) const;

  /// Object grammar: summands separated by '+', shifts as "[k]" (or "@k").
  ObjectExpr parse_object(std::string_view text) const;
  IndecomposableRef parse_ref(std::string_view text) const;
};

using ModelPtr = std::shared_ptr<const CategoryModel>;

/// Builds a heart from its members; simples are the members with no proper
/// listed subobject inside the heart.
Heart make_heart(const CategoryModel& model, std::vector<IndecomposableRef> members);
Heart standard_heart(const CategoryModel& model);

/// Basis and positivity conditions on a heart.
Report check_heart(const CategoryModel& model, const Heart& heart);

/// Whether a -> m -> c is a short exact sequence of the heart.
bool is_short_exact_in(const Heart& heart, const Triangle& t);

/// Invariant report for a model (shift/rotation closure, hom/triangle
/// consistency, class additivity, oracle cross-validation when the model
/// carries quiver representations).
Report validate_model(const CategoryModel& model);

/// prepare + validate + heart atlas. Throws ErrorKind::ModelData with the
/// first failing check.
ModelPtr finalize_model(CategoryModel model);

}  // namespace stablab
