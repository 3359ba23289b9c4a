#pragma once

#include <optional>
#include <vector>

#include "stablab/exact.hpp"
#include "stablab/model.hpp"
#include "stablab/report.hpp"

namespace stablab {

/// Floating-mode tolerance: phases closer than this are equal.
inline constexpr double kPhaseTolerance = 1e-9;

/// Additive map from the lattice to C, given by its values on the standard
/// basis vectors.
struct CentralCharge {
  std::vector<ComplexValue> values;

  bool exact() const;
  ComplexValue operator()(const LatticeClass& v) const;
  CentralCharge to_floating() const;
};

/// Phase window + a direction in the semiclosed upper half-plane; the phase
/// is window + arg(direction)/pi. Comparisons are exact when both directions
/// are exact (sign of a cross product), otherwise they use kPhaseTolerance.
class Phase {
 public:
  Phase(int window, ComplexValue direction);

  int window() const { return window_; }
  const ComplexValue& direction() const { return direction_; }
  double value() const { return window_ + fraction_; }
  Phase shifted(int k) const { return Phase(window_ + k, direction_, fraction_); }

  friend int compare(const Phase& a, const Phase& b);
  friend bool operator<(const Phase& a, const Phase& b) { return compare(a, b) < 0; }
  friend bool operator>(const Phase& a, const Phase& b) { return compare(a, b) > 0; }
  friend bool operator<=(const Phase& a, const Phase& b) { return compare(a, b) <= 0; }
  friend bool operator>=(const Phase& a, const Phase& b) { return compare(a, b) >= 0; }
  friend bool operator==(const Phase& a, const Phase& b) { return compare(a, b) == 0; }

 private:
  Phase(int window, ComplexValue direction, double fraction)
      : window_(window), direction_(std::move(direction)), fraction_(fraction) {}

  int window_;
  ComplexValue direction_;
  double fraction_;
};

/// A heart plus a central charge; the slicing is derived on demand.
class StabilityCondition {
 public:
  StabilityCondition(ModelPtr model, Heart heart, CentralCharge charge);

  const ModelPtr& model() const { return model_; }
  const CategoryModel& category() const { return *model_; }
  const Heart& heart() const { return heart_; }
  const CentralCharge& charge() const { return charge_; }
  bool exact() const { return charge_.exact(); }

  ComplexValue charge_of(const ObjectExpr& c) const;
  ComplexValue charge_of(const IndecomposableRef& r) const;

  /// Syntactic validity: every simple has charge in the semiclosed upper
  /// half-plane and no member has zero charge.
  Report validity() const;
  void require_valid() const;

 private:
  ModelPtr model_;
  Heart heart_;
  CentralCharge charge_;
};

/// Charge on the lattice basis determined by prescribed charges of the
/// heart's simples (simples form a lattice basis).
CentralCharge charge_from_simples(const CategoryModel& model, const Heart& heart,
                                  const std::vector<ComplexValue>& simple_charges);

struct HnFactor {
  ObjectExpr object;
  Phase phase;
  double mass = 0.0;
};

struct HNFiltration {
  std::vector<HnFactor> factors;
  /// chain[i] is c_{i+1}: the subobject whose factors are factors[0..i].
  std::vector<ObjectExpr> chain;
  /// quotients[i] = c / chain[i].
  std::vector<ObjectExpr> quotients;

  const Phase& phi_plus() const { return factors.front().phase; }
  const Phase& phi_minus() const { return factors.back().phase; }
  double mass() const;
};

ComplexValue charge_of(const CategoryModel& model, const CentralCharge& z, const ObjectExpr& c);

HNFiltration hn_filtration(const StabilityCondition& s, const ObjectExpr& c);

/// Splits c along the triangle whose first term has every HN phase > cut and
/// whose third term has every HN phase <= cut.
std::pair<ObjectExpr, ObjectExpr> truncate(const StabilityCondition& s, const ObjectExpr& c, const Phase& cut);

struct PhaseData {
  double phi_minus = 0.0;
  double phi_plus = 0.0;
  double mass = 0.0;
};

PhaseData phase_data(const StabilityCondition& s, const ObjectExpr& c);

/// The phase when c is semistable.
std::optional<Phase> semistable_phase(const StabilityCondition& s, const ObjectExpr& c);

struct AxiomOptions {
  int shift_window = 2;
  bool direct_sum_sample = true;
};

/// Verifies the four axioms over every base indecomposable in the shift
/// window. Never throws; failures carry witnesses.
Report check_stability_axioms(const StabilityCondition& s, const AxiomOptions& options = {});

}  // namespace stablab
