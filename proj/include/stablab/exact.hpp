#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace stablab {

/// Reduced fraction over int64. Intermediate products use 128-bit integers;
/// a result that does not fit throws ErrorKind::Overflow instead of wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  int sign() const { return (num_ > 0) - (num_ < 0); }
  bool is_zero() const { return num_ == 0; }

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const;
  Rational& operator+=(const Rational& o) { return *this = *this + o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend int compare(const Rational& a, const Rational& b);
  friend bool operator<(const Rational& a, const Rational& b) { return compare(a, b) < 0; }

  std::string str() const;

 private:
  static Rational from_wide(__int128 num, __int128 den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// A complex number that is either an exact Gaussian rational (element of
/// Q[i]) or a double-precision approximation. Arithmetic stays exact while
/// every operand is exact.
class ComplexValue {
 public:
  ComplexValue() = default;
  ComplexValue(Rational re, Rational im) : re_(re), im_(im) {}
  explicit ComplexValue(std::complex<double> z) : exact_(false), z_(z) {}

  bool exact() const { return exact_; }
  const Rational& re_exact() const;
  const Rational& im_exact() const;
  std::complex<double> approx() const;
  double real() const { return approx().real(); }
  double imag() const { return approx().imag(); }
  double abs() const { return std::abs(approx()); }

  bool is_zero() const;
  /// im > 0, or im == 0 and re < 0. Phase 0 is excluded, the negative real
  /// axis has phase exactly 1.
  bool in_semiclosed_upper_half_plane() const;
  /// arg(z)/pi in (0,1]; requires in_semiclosed_upper_half_plane().
  double phase_in_window() const;

  ComplexValue to_floating() const { return ComplexValue(approx()); }

  friend ComplexValue operator+(const ComplexValue& a, const ComplexValue& b);
  friend ComplexValue operator-(const ComplexValue& a, const ComplexValue& b);
  friend ComplexValue operator*(const ComplexValue& a, std::int64_t k);
  friend ComplexValue operator*(const ComplexValue& a, const ComplexValue& b);
  ComplexValue operator-() const;
  ComplexValue& operator+=(const ComplexValue& o) { return *this = *this + o; }

  /// Exact equality for exact operands, bitwise otherwise.
  friend bool operator==(const ComplexValue& a, const ComplexValue& b);

 private:
  bool exact_ = true;
  Rational re_{};
  Rational im_{};
  std::complex<double> z_{};
};

/// Sign of im(conj(a) * b). For two points of the semiclosed upper half-plane
/// this is +1 exactly when arg(a) < arg(b). Exact when both are exact.
int cross_sign(const ComplexValue& a, const ComplexValue& b);

std::ostream& operator<<(std::ostream& os, const ComplexValue& z);

}  // namespace stablab
