#include "stablab/limits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "stablab/error.hpp"
#include "stablab/metric.hpp"

namespace stablab {

namespace {

std::vector<PhaseData> base_data(const StabilityCondition& s) {
  std::vector<PhaseData> out;
  for (int u = 0; u < static_cast<int>(s.category().indecomposables.size()); ++u)
    out.push_back(phase_data(s, ObjectExpr(IndecomposableRef{u, 0})));
  return out;
}

double data_distance(const std::vector<PhaseData>& a, const std::vector<PhaseData>& b) {
  double d = 0.0;
  for (std::size_t u = 0; u < a.size(); ++u)
    d = std::max({d, std::abs(a[u].phi_minus - b[u].phi_minus), std::abs(a[u].phi_plus - b[u].phi_plus),
                  std::abs(std::log(a[u].mass / b[u].mass))});
  return d;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

std::size_t tail_start(const StabilitySequence& seq) {
  const std::size_t n = seq.samples.size();
  return n - std::max<std::size_t>(1, n / 4);
}

}  // namespace

double StabilitySequence::epsilon_at(long n) const {
  double e = std::numeric_limits<double>::infinity();
  long best = std::numeric_limits<long>::min();
  for (const auto& s : epsilon)
    if (s.from_n <= n && s.from_n >= best) {
      best = s.from_n;
      e = s.bound;
    }
  return e;
}

Report StabilitySequence::validate() const {
  Report rep;
  if (samples.empty()) {
    rep.add("sequence has samples", false, "no samples");
    return rep;
  }
  std::string w;
  for (const auto& s : samples)
    if (s.sigma.model() != model && w.empty()) w = "sample " + std::to_string(s.n);
  rep.add("samples share one model", w.empty(), w);
  w.clear();
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (samples[i].n <= samples[i - 1].n && w.empty()) w = "n = " + std::to_string(samples[i].n);
  rep.add("sample indices increase", w.empty(), w);

  auto steps = epsilon;
  std::sort(steps.begin(), steps.end(), [](const EpsilonStep& a, const EpsilonStep& b) { return a.from_n < b.from_n; });
  w.clear();
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!(steps[i].bound >= 0.0) && w.empty()) w = "negative bound from " + std::to_string(steps[i].from_n);
    if (i > 0 && steps[i].bound > steps[i - 1].bound && w.empty())
      w = "bound increases at " + std::to_string(steps[i].from_n);
  }
  rep.add("epsilon schedule nonincreasing", w.empty(), w);

  const CategoryModel& m = *model;
  w.clear();
  if (static_cast<int>(limit_charge.values.size()) != m.lattice_rank) {
    w = "limit charge rank";
  } else {
    for (int u = 0; u < static_cast<int>(m.indecomposables.size()); ++u)
      if (limit_charge(m.class_of(IndecomposableRef{u, 0})).is_zero() && w.empty())
        w = "limit charge vanishes on " + m.indecomposables[u].id + ": the limit leaves the full component";
  }
  rep.add("limit charge nonzero on every indecomposable", w.empty(), w);
  if (!rep.ok()) return rep;

  std::vector<std::vector<PhaseData>> data;
  for (const auto& s : samples) data.push_back(base_data(s.sigma));
  w.clear();
  for (std::size_t i = 0; i < samples.size() && w.empty(); ++i) {
    const double e = epsilon_at(samples[i].n) + options.schedule_slack;
    for (std::size_t j = i + 1; j < samples.size(); ++j) {
      const double d = data_distance(data[i], data[j]);
      if (d > e) {
        w = "d(sigma_" + std::to_string(samples[i].n) + ", sigma_" + std::to_string(samples[j].n) + ") = " + fmt(d) +
            " > " + fmt(e);
        break;
      }
    }
  }
  rep.add("sampled distances within the schedule", w.empty(), w);

  auto gap = [&](const StabilityCondition& s) {
    double g = 0.0;
    for (std::size_t i = 0; i < limit_charge.values.size(); ++i)
      g = std::max(g, std::abs(s.charge().values[i].approx() - limit_charge.values[i].approx()));
    return g;
  };
  const double first = gap(samples.front().sigma), last = gap(samples.back().sigma);
  rep.add("charges approach the limit charge", last <= first + 1e-12,
          last <= first + 1e-12 ? "" : "last sample " + fmt(last) + " vs first " + fmt(first));
  return rep;
}

StabilitySequence make_sequence(ModelPtr model, std::vector<SequenceSample> samples, CentralCharge limit_charge,
                                std::vector<EpsilonStep> epsilon, LimitOptions options) {
  std::sort(samples.begin(), samples.end(), [](const SequenceSample& a, const SequenceSample& b) { return a.n < b.n; });
  StabilitySequence seq{std::move(model), std::move(samples), std::move(limit_charge), std::move(epsilon), options};
  Report rep = seq.validate();
  if (const Check* f = rep.first_failure())
    throw Error(ErrorKind::Precondition, "inconsistent sequence: " + f->name + " (" + f->witness + ")");
  return seq;
}

LimitingPhase limiting_phase(const StabilitySequence& seq, const ObjectExpr& c) {
  if (c.is_zero()) throw Error(ErrorKind::Domain, "limiting phase of the zero object");
  if (seq.samples.empty()) throw Error(ErrorKind::NeedsMoreSamples, "empty sequence");
  const CategoryModel& model = *seq.model;
  const double tol = seq.options.phase_tolerance;

  bool all_semistable = true;
  for (std::size_t i = tail_start(seq); i < seq.samples.size(); ++i)
    if (hn_filtration(seq.samples[i].sigma, c).factors.size() != 1) all_semistable = false;

  const auto& last = seq.samples.back();
  const PhaseData pn = phase_data(last.sigma, c);
  const double alpha = pn.phi_plus - pn.phi_minus;
  const double eps = seq.epsilon_at(last.n);

  LimitingPhase out;
  if (all_semistable || alpha <= tol) {
    const ComplexValue z = seq.limit_charge(model.class_of(c));
    if (z.is_zero())
      throw Error(ErrorKind::Diagnostic, "limit charge vanishes on " + model.expr_name(c) + ": masses tend to 0");
    const double a = std::arg(z.approx()) / std::numbers::pi;
    const double mid = (pn.phi_plus + pn.phi_minus) / 2;
    out.theta = a + 2.0 * std::round((mid - a) / 2.0);
    if (std::abs(out.theta - mid) > eps + alpha / 2 + tol)
      throw Error(ErrorKind::Diagnostic, "limit charge of " + model.expr_name(c) + " has phase " + fmt(out.theta) +
                                             ", sampled phase " + fmt(mid) + " is outside the schedule");
    out.stable_from = last.n;
    for (std::size_t i = seq.samples.size(); i-- > 0;) {
      const auto& s = seq.samples[i];
      const PhaseData p = phase_data(s.sigma, c);
      const double e = seq.epsilon_at(s.n) + tol;
      if (std::abs(p.phi_plus - out.theta) > e || std::abs(p.phi_minus - out.theta) > e) break;
      out.stable_from = s.n;
    }
    return out;
  }
  if (alpha > 2 * eps + tol) {
    out.split = true;
    return out;
  }
  throw Error(ErrorKind::NeedsMoreSamples, "phase spread " + fmt(alpha) + " of " + model.expr_name(c) +
                                               " is within the schedule bound " + fmt(eps) + " at n = " +
                                               std::to_string(last.n));
}

LimitingFiltration limit_hn(const StabilitySequence& seq, const ObjectExpr& c) {
  const CategoryModel& model = *seq.model;
  LimitingPhase lp = limiting_phase(seq, c);
  if (!lp.split) return {{{c, lp.theta, lp.stable_from}}};

  std::size_t length = 1;
  for (std::size_t i = tail_start(seq); i < seq.samples.size(); ++i)
    length = std::max(length, hn_filtration(seq.samples[i].sigma, c).factors.size());
  const PhaseData pn = phase_data(seq.samples.back().sigma, c);
  const double alpha = pn.phi_plus - pn.phi_minus;
  // strictly below alpha / 2(L + 1)
  const double eps = alpha / (4.0 * static_cast<double>(length + 1));

  const SequenceSample* at = nullptr;
  for (const auto& s : seq.samples)
    if (seq.epsilon_at(s.n) < eps) {
      at = &s;
      break;
    }
  if (!at) throw Error(ErrorKind::NeedsMoreSamples, "schedule never drops below " + fmt(eps) + " for " + model.expr_name(c));

  HNFiltration hn = hn_filtration(at->sigma, c);
  std::size_t cut = hn.factors.size();
  for (std::size_t i = 0; i + 1 < hn.factors.size(); ++i)
    if (hn.factors[i].phase.value() - hn.factors[i + 1].phase.value() > 2 * eps) {
      cut = i;
      break;
    }
  if (cut == hn.factors.size())
    throw Error(ErrorKind::Diagnostic, "no phase gap above " + fmt(2 * eps) + " for " + model.expr_name(c) + " at n = " +
                                           std::to_string(at->n) + ": inconsistent schedule");
  const ObjectExpr sub = hn.chain[cut];
  const ObjectExpr quot = hn.quotients[cut];
  const auto& last = seq.samples.back().sigma;
  if (!(phase_data(last, sub).phi_minus > phase_data(last, quot).phi_plus))
    throw Error(ErrorKind::Diagnostic, "split of " + model.expr_name(c) + " at n = " + std::to_string(at->n) +
                                           " does not persist along the samples");

  LimitingFiltration out = limit_hn(seq, sub);
  LimitingFiltration rest = limit_hn(seq, quot);
  if (!(out.factors.back().theta > rest.factors.front().theta + seq.options.phase_tolerance))
    throw Error(ErrorKind::Diagnostic, "limiting phases of " + model.expr_name(c) + " do not decrease across the split");
  out.factors.insert(out.factors.end(), rest.factors.begin(), rest.factors.end());
  return out;
}

StabilityCondition limit_stability(const StabilitySequence& seq) {
  Report valid = seq.validate();
  if (const Check* f = valid.first_failure())
    throw Error(ErrorKind::Precondition, "inconsistent sequence: " + f->name + " (" + f->witness + ")");
  const CategoryModel& model = *seq.model;
  constexpr double edge = 1e-12;

  std::vector<IndecomposableRef> members;
  for (int u = 0; u < static_cast<int>(model.indecomposables.size()); ++u) {
    LimitingFiltration lim = limit_hn(seq, ObjectExpr(IndecomposableRef{u, 0}));
    const double top = lim.factors.front().theta, bottom = lim.factors.back().theta;
    const double k = std::floor(1.0 + edge - top);
    if (bottom + k > edge) members.push_back({u, static_cast<int>(k)});
  }
  Heart heart = make_heart(model, members);
  auto id = model.atlas.resolve(heart);
  if (!id) throw Error(ErrorKind::HeartNotResolvable, "limiting heart is not in the atlas");

  StabilityCondition sigma(seq.model, model.atlas.heart(*id), seq.limit_charge);
  Report axioms = check_stability_axioms(sigma, {model.axiom_shift_window, true});
  if (const Check* f = axioms.first_failure())
    throw Error(ErrorKind::Diagnostic, "limit fails " + f->name + ": " + f->witness);

  const auto limit_data = base_data(sigma);
  for (const auto& s : seq.samples) {
    const double d = data_distance(base_data(s.sigma), limit_data);
    const double e = seq.epsilon_at(s.n) + seq.options.schedule_slack;
    if (d > e)
      throw Error(ErrorKind::Diagnostic,
                  "d(sigma_" + std::to_string(s.n) + ", limit) = " + fmt(d) + " exceeds the schedule " + fmt(e));
  }
  return sigma;
}

long length_bound(const CategoryModel& model, const CentralCharge& z, double lo, double hi, const ObjectExpr& a) {
  if (!z.exact()) throw Error(ErrorKind::Domain, "length bound needs a charge with values in Q[i]");
  if (!(hi - lo < 1.0)) throw Error(ErrorKind::Domain, "interval must have length < 1");
  if (!(lo > 0.0) || !(hi < 1.0) || lo > hi) throw Error(ErrorKind::Domain, "interval must lie in (0, 1)");
  const ComplexValue za = charge_of(model, z, a);
  const double pa = za.is_zero() ? -1.0 : std::arg(za.approx()) / std::numbers::pi;
  if (pa < lo - 1e-12 || pa > hi + 1e-12) throw Error(ErrorKind::Precondition, "Z(a) has phase outside the interval");

  std::int64_t den = 1;
  for (const auto& v : z.values) {
    den = std::lcm(den, v.re_exact().den());
    den = std::lcm(den, v.im_exact().den());
  }
  struct Col {
    __int128 x, y;
  };
  std::vector<Col> cols;
  auto scaled = [&](const Rational& r) { return static_cast<__int128>(r.num()) * (den / r.den()); };
  for (const auto& v : z.values) cols.push_back({scaled(v.re_exact()), scaled(v.im_exact())});

  // column Hermite form: basis (g, h), (0, k)
  auto reduce = [](std::vector<Col>& cs, __int128 Col::*key) {
    auto mag = [&](const Col& c) { return c.*key < 0 ? -(c.*key) : c.*key; };
    while (true) {
      std::size_t piv = cs.size();
      for (std::size_t i = 0; i < cs.size(); ++i)
        if (cs[i].*key != 0 && (piv == cs.size() || mag(cs[i]) < mag(cs[piv]))) piv = i;
      if (piv == cs.size()) return Col{0, 0};
      bool done = true;
      for (std::size_t i = 0; i < cs.size(); ++i) {
        if (i == piv || cs[i].*key == 0) continue;
        const __int128 q = cs[i].*key / cs[piv].*key;
        cs[i].x -= q * cs[piv].x;
        cs[i].y -= q * cs[piv].y;
        if (cs[i].*key != 0) done = false;
      }
      if (done) {
        Col p = cs[piv];
        cs.erase(cs.begin() + static_cast<long>(piv));
        if (p.*key < 0) p = {-p.x, -p.y};
        return p;
      }
    }
  };
  Col u1 = reduce(cols, &Col::x);
  Col u2 = reduce(cols, &Col::y);
  const __int128 g = u1.x, k = u2.y;
  __int128 h = u1.y;
  if (k != 0) h = ((h % k) + k) % k;

  const double height = static_cast<double>(static_cast<__int128>(za.im_exact().num()) * (den / za.im_exact().den()));
  const double cot = std::max(std::abs(1.0 / std::tan(std::numbers::pi * lo)), std::abs(1.0 / std::tan(std::numbers::pi * hi)));
  const double reach = height * cot + 1.0;
  auto inside = [&](double x, double y) {
    const double p = std::atan2(y, x) / std::numbers::pi;
    return y > 0 && y <= height && p >= lo - 1e-12 && p <= hi + 1e-12;
  };

  long count = 0;
  long long work = 0;
  const long long m_max = g == 0 ? 0 : static_cast<long long>(reach / static_cast<double>(g)) + 1;
  for (long long m = -m_max; m <= m_max; ++m) {
    const double x = static_cast<double>(m * g);
    const double base = static_cast<double>(m * h);
    if (k == 0) {
      if (inside(x, base)) ++count;
      continue;
    }
    const double kd = static_cast<double>(k);
    const long long j_lo = static_cast<long long>(std::ceil((1.0 - base) / kd));
    const long long j_hi = static_cast<long long>(std::floor((height - base) / kd));
    for (long long j = j_lo; j <= j_hi; ++j) {
      if (++work > 50'000'000) throw Error(ErrorKind::ModelTooLarge, "length bound enumeration too large");
      if (inside(x, base + static_cast<double>(j) * kd)) ++count;
    }
  }
  return count;
}

}  // namespace stablab
