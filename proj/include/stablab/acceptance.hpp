#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "stablab/gtilde.hpp"
#include "stablab/limits.hpp"
#include "stablab/stability.hpp"

namespace stablab {

using Rng = std::mt19937_64;

/// Exact stability condition on a random atlas heart (shift 0), rejected
/// unless every slice P(t, t + 1] is again an atlas heart.
StabilityCondition random_stability(const ModelPtr& model, Rng& rng);

/// Random exact charge with every vertex simple in the semiclosed upper
/// half-plane; small entries so that equal phases occur.
std::vector<ComplexValue> random_simple_charges(std::size_t n, Rng& rng);

/// Matrix entries in [-2, 2] with det >= 0.2, lift in {-1, 0, 1}.
GroupElement random_group_element(Rng& rng);

/// Z_n(S1) = i, Z_n(S2) = 1 + i/n on the standard heart of A2, n = 1..count,
/// eps(n) = 2/n.
StabilitySequence a2_completeness_sequence(const ModelPtr& a2, long count);

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::string models_dir;  // empty: the configured source tree models/
  std::uint64_t seed = 0;
};

std::string default_models_dir();

CriterionResult run_criterion(int id, const AcceptanceOptions& options);
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

/// "criterion N: PASS|FAIL name (detail) [t s]"
std::string format_result(const CriterionResult& r);

}  // namespace stablab
