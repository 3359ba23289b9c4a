#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "stablab/stability.hpp"

namespace stablab {

struct SequenceSample {
  long n = 0;
  StabilityCondition sigma;
};

struct EpsilonStep {
  long from_n = 0;
  double bound = 0.0;
};

struct LimitOptions {
  double phase_tolerance = 1e-6;
  double log_mass_tolerance = 1e-6;
  /// slack allowed when comparing sampled distances with the schedule
  double schedule_slack = 1e-9;
};

/// Finite sample of a Cauchy sequence: samples sorted by n, a declared limit
/// charge and an epsilon schedule.
struct StabilitySequence {
  ModelPtr model;
  std::vector<SequenceSample> samples;
  CentralCharge limit_charge;
  std::vector<EpsilonStep> epsilon;
  LimitOptions options;

  /// Bound of the step with the largest from_n <= n; infinity before the
  /// first step.
  double epsilon_at(long n) const;

  /// Shared model, sorted indices, schedule monotone and consistent with
  /// every sampled pair, limit charge nonzero on every base class.
  Report validate() const;
};

/// Sorts samples, checks the schedule; throws Precondition on failure.
StabilitySequence make_sequence(ModelPtr model, std::vector<SequenceSample> samples, CentralCharge limit_charge,
                                std::vector<EpsilonStep> epsilon, LimitOptions options = {});

struct LimitingPhase {
  bool split = false;
  double theta = 0.0;  // meaningful when !split
  /// first sample index from which phi+ and phi- stay within the schedule
  /// of theta
  long stable_from = 0;
};

/// theta when phi_n^+(c) and phi_n^-(c) converge to a common value, else a
/// split marker. Throws NeedsMoreSamples when the sampled tail cannot decide.
LimitingPhase limiting_phase(const StabilitySequence& seq, const ObjectExpr& c);

struct LimitFactor {
  ObjectExpr object;
  double theta = 0.0;
  long stable_from = 0;
};

struct LimitingFiltration {
  std::vector<LimitFactor> factors;
};

LimitingFiltration limit_hn(const StabilitySequence& seq, const ObjectExpr& c);

/// (Z_limit, P) with the heart spanned by limiting semistables of phase in
/// (0, 1]. Checks the axioms and distance(sigma_n, sigma) <= eps(n).
StabilityCondition limit_stability(const StabilitySequence& seq);

/// Number of nonzero points of the image lattice of an exact charge in
/// { z : arg(z)/pi in I, im z <= im Z(a) }.
long length_bound(const CategoryModel& model, const CentralCharge& z, double lo, double hi, const ObjectExpr& a);

}  // namespace stablab
