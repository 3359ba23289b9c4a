#include "stablab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "stablab/error.hpp"
#include "stablab/optimize.hpp"

namespace stablab {

MetricValue::MetricValue(double v) : value_(v) {
  if (!(v >= 0.0)) throw Error(ErrorKind::Domain, "metric values are nonnegative");
  if (std::isinf(v)) infinite_ = true;
}

std::string MetricValue::str() const {
  if (infinite_) return "inf";
  std::ostringstream os;
  os.precision(12);
  os << value_;
  return os.str();
}

namespace {

void require_same_model(const StabilityCondition& s, const StabilityCondition& t) {
  if (s.model() == t.model()) return;
  const auto& a = s.category();
  const auto& b = t.category();
  if (a.name != b.name || a.indecomposables.size() != b.indecomposables.size())
    throw Error(ErrorKind::ModelMismatch, "stability conditions over different models '" + a.name + "' and '" + b.name + "'");
}

std::vector<PhaseData> base_phase_data(const StabilityCondition& s) {
  std::vector<PhaseData> out;
  for (int u = 0; u < static_cast<int>(s.category().indecomposables.size()); ++u)
    out.push_back(phase_data(s, ObjectExpr(IndecomposableRef{u, 0})));
  return out;
}

}  // namespace

DistanceResult distance_with_witness(const StabilityCondition& s, const StabilityCondition& t) {
  require_same_model(s, t);
  auto ps = base_phase_data(s);
  auto pt = base_phase_data(t);
  DistanceResult best{MetricValue(0.0), {0, 0}, "phi-"};
  double top = -1.0;
  for (std::size_t u = 0; u < ps.size(); ++u) {
    const std::pair<double, const char*> terms[] = {
        {std::abs(ps[u].phi_minus - pt[u].phi_minus), "phi-"},
        {std::abs(ps[u].phi_plus - pt[u].phi_plus), "phi+"},
        {std::abs(std::log(ps[u].mass) - std::log(pt[u].mass)), "log-mass"},
    };
    for (const auto& [v, name] : terms) {
      if (v > top) {
        top = v;
        best = {MetricValue(v), {static_cast<int>(u), 0}, name};
      }
    }
  }
  return best;
}

MetricValue distance(const StabilityCondition& s, const StabilityCondition& t) {
  return distance_with_witness(s, t).value;
}

std::vector<IndecomposableRef> window_refs(const CategoryModel& model, int w) {
  std::vector<IndecomposableRef> out;
  for (int u = 0; u < static_cast<int>(model.indecomposables.size()); ++u)
    for (int k = -w; k <= w; ++k) out.push_back({u, k});
  return out;
}

Heart slice_heart(const StabilityCondition& s, double lo, double tol) {
  const CategoryModel& model = s.category();
  std::vector<IndecomposableRef> members;
  for (int u = 0; u < static_cast<int>(model.indecomposables.size()); ++u) {
    PhaseData p = phase_data(s, ObjectExpr(IndecomposableRef{u, 0}));
    // need phi- + k > lo and phi+ + k <= lo + 1
    const double k = std::floor(lo + 1.0 + tol - p.phi_plus);
    if (p.phi_minus + k > lo + tol) members.push_back({u, static_cast<int>(k)});
  }
  Heart h = make_heart(model, members);
  auto id = model.atlas.resolve(h);
  if (!id) {
    std::ostringstream os;
    os << "P(" << lo << ", " << lo + 1 << "] is not an atlas heart";
    throw Error(ErrorKind::HeartNotResolvable, os.str());
  }
  return model.atlas.heart(*id);
}

StabilityCondition c_act(const StabilityCondition& s, std::complex<double> lambda) {
  s.require_valid();
  CentralCharge z;
  if (s.exact() && lambda.imag() == 0.0 && lambda.real() == std::round(lambda.real())) {
    const auto k = static_cast<std::int64_t>(lambda.real());
    for (const auto& v : s.charge().values) z.values.push_back(v * ((k % 2 == 0) ? 1 : -1));
  } else {
    const std::complex<double> f = std::exp(std::complex<double>(0.0, -std::numbers::pi) * lambda);
    for (const auto& v : s.charge().values) z.values.push_back(ComplexValue(f * v.approx()));
  }
  return StabilityCondition(s.model(), slice_heart(s, lambda.real()), std::move(z));
}

QuotientResult quotient_distance_stab(const StabilityCondition& s, const StabilityCondition& t,
                                      const OptimizeOptions& options) {
  require_same_model(s, t);
  const double d = distance(s, t).value();
  if (d == 0.0) return {MetricValue(0.0), {0.0, 0.0}};
  auto ps = base_phase_data(s);
  auto pt = base_phase_data(t);

  // c_act(t, x + iy) moves every phase of t down by x and multiplies every
  // mass by exp(pi y); semistable objects do not change.
  auto objective = [&](double x, double y) {
    double m = 0.0;
    for (std::size_t u = 0; u < ps.size(); ++u) {
      m = std::max(m, std::abs(ps[u].phi_minus - pt[u].phi_minus + x));
      m = std::max(m, std::abs(ps[u].phi_plus - pt[u].phi_plus + x));
      m = std::max(m, std::abs(std::log(ps[u].mass / pt[u].mass) - std::numbers::pi * y));
    }
    return m;
  };
  // the box for re(lambda) is centred on the integer nearest the midpoint
  // of the phase offsets; shifts by integers lie in the C-orbit anyway
  double lo = 1e300, hi = -1e300;
  for (std::size_t u = 0; u < ps.size(); ++u)
    for (double v : {pt[u].phi_minus - ps[u].phi_minus, pt[u].phi_plus - ps[u].phi_plus}) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  const double centre = std::round((lo + hi) / 2);
  const double ybound = d / std::numbers::pi;
  MinimizeResult r = minimize_box(objective, {centre - 1.0, centre + 1.0, -ybound, ybound}, options);
  return {MetricValue(r.value), {r.x, r.y}};
}

}  // namespace stablab
