#pragma once

#include <optional>
#include <vector>

#include "stablab/model.hpp"
#include "stablab/report.hpp"

namespace stablab {

class StabilityCondition;
struct StabilitySequence;

/// Torsion pair of a heart, both classes given extensionally by their
/// indecomposable members.
struct TorsionPair {
  std::vector<IndecomposableRef> torsion;
  std::vector<IndecomposableRef> free;

  friend bool operator==(const TorsionPair&, const TorsionPair&) = default;
};

/// Checks closure under quotients and extensions, F = T-perp, T = perp-F,
/// and the short exact sequence condition for every member.
Report check_torsion_pair(const CategoryModel& model, const Heart& heart, const TorsionPair& pair);

/// The pair with the given torsion class; throws ModelData if it is not one.
TorsionPair torsion_pair_of(const CategoryModel& model, const Heart& heart, std::vector<IndecomposableRef> torsion);

std::vector<TorsionPair> enumerate_torsion_pairs(const CategoryModel& model, const Heart& heart);

/// Smallest set of indecomposables containing `members` and closed under
/// extensions along listed triangles.
std::vector<IndecomposableRef> extension_closure(const CategoryModel& model, std::vector<IndecomposableRef> members);

/// <F, T[-1]>
Heart left_tilt(const CategoryModel& model, const Heart& heart, const TorsionPair& pair);
/// <F[1], T>
Heart right_tilt(const CategoryModel& model, const Heart& heart, const TorsionPair& pair);

/// For a heart E between A and A[-1], the torsion pair T of A with
/// left_tilt(A, T) = E: the members a of A with a[-1] in E.
TorsionPair torsion_from_intermediate(const CategoryModel& model, const Heart& a, const Heart& e);

struct TiltDecomposition {
  TorsionPair left;        // torsion pair in the heart of sigma
  Heart intermediate;      // heart of P_tau(-1/2, 1/2]
  TorsionPair right;       // torsion pair of the intermediate heart, torsion class F'
  Heart result;            // right_tilt(intermediate, right)
};

/// Heart of tau reached from the heart of sigma by one left and one right
/// tilt; requires distance(sigma, tau) < 1/2.
TiltDecomposition tilt_decompose_pair(const StabilityCondition& sigma, const StabilityCondition& tau);

/// Torsion pair of the common heart A of a sequence: F holds the members
/// whose phi+ tends to 0.
TorsionPair limiting_torsion_pair(const StabilitySequence& seq);

/// max - min of member shifts measured against the standard heart; nullopt
/// when a member's base is not in the standard heart.
std::optional<int> heart_span(const CategoryModel& model, const Heart& heart);

/// Closure of the standard heart under left and right tilts, restricted to
/// hearts of span at most model.atlas_span and stored up to shift. Throws
/// ModelTooLarge past model.atlas_cap hearts.
HeartAtlas heart_atlas(const CategoryModel& model);

}  // namespace stablab
