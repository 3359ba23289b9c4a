#pragma once

#include <cstdint>
#include <vector>

#include "stablab/exact.hpp"
#include "stablab/model.hpp"

namespace stablab::oracle {

// Brute-force linear algebra over F2 on quiver representations. Everything
// here is deliberately exhaustive and only meant for desk-scale inputs
// (dimension at most 3 per vertex); it is the independent reference the
// triangle-search HN implementation is checked against.

inline constexpr int kMaxDim = 3;

/// Subspace of F2^d as a bitmask over its 2^d vectors.
using Subspace = std::uint32_t;

std::vector<Subspace> subspaces(int d);
int subspace_dim(Subspace s);

struct Subrep {
  std::vector<Subspace> spaces;  // per vertex
  std::vector<int> dims() const;
};

QuiverRep direct_sum(const Quiver& q, const QuiverRep& a, const QuiverRep& b);
QuiverRep zero_rep(const Quiver& q);

std::vector<Subrep> subrepresentations(const Quiver& q, const QuiverRep& rep);

int rank_f2(const std::vector<std::uint32_t>& rows);
int hom_dim(const Quiver& q, const QuiverRep& a, const QuiverRep& b);
int euler_form(const Quiver& q, const std::vector<int>& a, const std::vector<int>& b);
/// dim Ext^1 via the Euler form (path algebras are hereditary).
int ext1_dim(const Quiver& q, const QuiverRep& a, const QuiverRep& b);

/// Isomorphism test valid for quivers with at most one arrow (A1, A2):
/// dimension vectors and arrow ranks agree.
bool isomorphic(const Quiver& q, const QuiverRep& a, const QuiverRep& b);

/// Whether some subrepresentation of mid is isomorphic to sub with quotient
/// isomorphic to quot.
bool has_short_exact_sequence(const Quiver& q, const QuiverRep& sub, const QuiverRep& mid,
                              const QuiverRep& quot);

struct OracleFactor {
  LatticeClass cls;
  ComplexValue charge;
  double phase = 0.0;
};

/// HN filtration by repeated extraction of the maximal destabilising
/// subobject (maximal phase, then maximal total dimension). `vertex_charges`
/// are the exact charges of the vertex simples, all in the semiclosed upper
/// half-plane. Refuses representations above kMaxDim at any vertex.
std::vector<OracleFactor> oracle_hn(const Quiver& q, const QuiverRep& rep,
                                    const std::vector<ComplexValue>& vertex_charges);

/// Decomposes a representation of an A1 or A2 fixture into the model's
/// indecomposables (matched by representation isomorphism type).
ObjectExpr decompose(const CategoryModel& model, const QuiverRep& rep);

/// All representations of the quiver with dimension vector componentwise
/// at most `bound`, except zero.
std::vector<QuiverRep> all_representations(const Quiver& q, int bound);

}  // namespace stablab::oracle
