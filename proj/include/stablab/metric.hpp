#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "stablab/stability.hpp"

namespace stablab {

/// Nonnegative real or +infinity.
class MetricValue {
 public:
  MetricValue() = default;
  explicit MetricValue(double v);
  static MetricValue infinity() {
    MetricValue m;
    m.infinite_ = true;
    return m;
  }

  bool infinite() const { return infinite_; }
  double value() const { return infinite_ ? std::numeric_limits<double>::infinity() : value_; }
  std::string str() const;

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

struct DistanceResult {
  MetricValue value;
  IndecomposableRef witness;  // base indecomposable attaining the max
  std::string term;           // "phi-", "phi+" or "log-mass"
};

/// Generalized metric, computed as a max over base indecomposables.
/// Throws ModelMismatch when the models differ.
DistanceResult distance_with_witness(const StabilityCondition& s, const StabilityCondition& t);
MetricValue distance(const StabilityCondition& s, const StabilityCondition& t);

/// Every indecomposable base[k] with |k| <= w.
std::vector<IndecomposableRef> window_refs(const CategoryModel& model, int w);

/// P_s(lo, lo + 1] as an atlas heart. Boundary comparisons use `tol`.
Heart slice_heart(const StabilityCondition& s, double lo, double tol = 1e-12);

/// Charge exp(-i pi lambda) Z, slicing shifted down by re(lambda). Integer
/// lambda keeps an exact charge exact.
StabilityCondition c_act(const StabilityCondition& s, std::complex<double> lambda);

struct OptimizeOptions {
  int grid = 15;            // points per axis
  int random_starts = 2;    // extra seeded starting points
  double tolerance = 1e-4;  // reported accuracy
  int max_iterations = 200;
  std::uint64_t seed = 0;
};

struct QuotientResult {
  MetricValue value;
  std::complex<double> lambda;  // best lambda found
};

/// inf over lambda of distance(s, c_act(t, lambda)), by grid search plus
/// Nelder-Mead refinement. An upper bound accurate to options.tolerance.
QuotientResult quotient_distance_stab(const StabilityCondition& s, const StabilityCondition& t,
                                      const OptimizeOptions& options = {});

}  // namespace stablab
