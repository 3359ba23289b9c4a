#include "stablab/exact.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "stablab/error.hpp"

namespace stablab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::ModelMismatch: return "model mismatch";
    case ErrorKind::ModelData: return "model data error";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Precondition: return "precondition error";
    case ErrorKind::NotHnComplete: return "model not HN-complete";
    case ErrorKind::UniquenessViolation: return "HN uniqueness violation";
    case ErrorKind::HeartNotResolvable: return "heart not resolvable in atlas";
    case ErrorKind::NeedsMoreSamples: return "needs more samples";
    case ErrorKind::Diagnostic: return "diagnostic";
    case ErrorKind::Overflow: return "exact arithmetic overflow";
    case ErrorKind::Refused: return "refused";
    case ErrorKind::ModelTooLarge: return "model too large";
    case ErrorKind::Usage: return "usage error";
  }
  return "error";
}

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits64(__int128 v) {
  return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorKind::Domain, "rational with zero denominator");
  *this = from_wide(num, den);
}

Rational Rational::from_wide(__int128 num, __int128 den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
  if (!fits64(num) || !fits64(den)) throw Error(ErrorKind::Overflow, "rational does not fit in 64 bits");
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                             static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw Error(ErrorKind::Domain, "division by zero rational");
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

int compare(const Rational& a, const Rational& b) {
  __int128 l = static_cast<__int128>(a.num_) * b.den_;
  __int128 r = static_cast<__int128>(b.num_) * a.den_;
  return (l > r) - (l < r);
}

std::string Rational::str() const {
  std::ostringstream os;
  os << *this;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  os << r.num();
  if (r.den() != 1) os << '/' << r.den();
  return os;
}

const Rational& ComplexValue::re_exact() const {
  if (!exact_) throw Error(ErrorKind::Domain, "exact value requested from floating complex");
  return re_;
}

const Rational& ComplexValue::im_exact() const {
  if (!exact_) throw Error(ErrorKind::Domain, "exact value requested from floating complex");
  return im_;
}

std::complex<double> ComplexValue::approx() const {
  if (exact_) return {re_.to_double(), im_.to_double()};
  return z_;
}

bool ComplexValue::is_zero() const {
  if (exact_) return re_.is_zero() && im_.is_zero();
  return std::abs(z_) <= 1e-12;
}

bool ComplexValue::in_semiclosed_upper_half_plane() const {
  if (exact_) return im_.sign() > 0 || (im_.is_zero() && re_.sign() < 0);
  if (is_zero()) return false;
  return phase_in_window() > 0.0;
}

double ComplexValue::phase_in_window() const {
  if (exact_) {
    if (im_.is_zero()) return re_.sign() < 0 ? 1.0 : 0.0;
    return std::atan2(im_.to_double(), re_.to_double()) / std::numbers::pi;
  }
  double p = std::atan2(z_.imag(), z_.real()) / std::numbers::pi;
  // a point a rounding error below the negative real axis still has phase 1
  if (p <= -1.0 + 1e-12) p = 1.0;
  return p;
}

ComplexValue operator+(const ComplexValue& a, const ComplexValue& b) {
  if (a.exact_ && b.exact_) return {a.re_ + b.re_, a.im_ + b.im_};
  return ComplexValue(a.approx() + b.approx());
}

ComplexValue operator-(const ComplexValue& a, const ComplexValue& b) { return a + (-b); }

ComplexValue operator*(const ComplexValue& a, std::int64_t k) {
  if (a.exact_) return {a.re_ * Rational(k), a.im_ * Rational(k)};
  return ComplexValue(a.z_ * static_cast<double>(k));
}

ComplexValue operator*(const ComplexValue& a, const ComplexValue& b) {
  if (a.exact_ && b.exact_) return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
  return ComplexValue(a.approx() * b.approx());
}

ComplexValue ComplexValue::operator-() const {
  if (exact_) return {-re_, -im_};
  return ComplexValue(-z_);
}

bool operator==(const ComplexValue& a, const ComplexValue& b) {
  if (a.exact_ != b.exact_) return false;
  if (a.exact_) return a.re_ == b.re_ && a.im_ == b.im_;
  return a.z_ == b.z_;
}

int cross_sign(const ComplexValue& a, const ComplexValue& b) {
  if (a.exact() && b.exact()) {
    Rational c = a.re_exact() * b.im_exact() - a.im_exact() * b.re_exact();
    return c.sign();
  }
  auto x = a.approx();
  auto y = b.approx();
  double c = x.real() * y.imag() - x.imag() * y.real();
  return (c > 0) - (c < 0);
}

std::ostream& operator<<(std::ostream& os, const ComplexValue& z) {
  if (z.exact()) return os << '(' << z.re_exact() << ", " << z.im_exact() << ')';
  return os << '(' << z.real() << ", " << z.imag() << ')';
}

}  // namespace stablab
