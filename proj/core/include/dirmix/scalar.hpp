#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace dirmix {

using Rational = mpq_class;
using Integer = mpz_class;

/// An exact element p + r*sqrt(d) of a real quadratic field, with p, r
/// rational and d a square-free non-negative integer.
///
/// d == 0 (equivalently r == 0) is the rational case. Arithmetic between two
/// irrational values requires equal radicands; anything else throws
/// InvalidArgument. Order is decided exactly by sign analysis, never through
/// floating point.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long v) : p_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(int v) : p_(v) {}   // NOLINT(google-explicit-constructor)
  Scalar(Rational v) : p_(std::move(v)) { p_.canonicalize(); }  // NOLINT
  Scalar(Rational p, Rational r, std::int64_t d);

  /// Parses "p", "p/q", decimals like "0.1", "sqrt(d)", and sums of such
  /// terms, e.g. "1/2 + 1/2*sqrt(5)" or "-3*sqrt(2)".
  static Scalar parse(std::string_view text);
  static Scalar sqrt(std::int64_t d) { return Scalar(0, 1, d); }

  const Rational& rational_part() const { return p_; }
  const Rational& surd_coefficient() const { return r_; }
  std::int64_t radicand() const { return d_; }
  bool is_rational() const { return d_ == 0; }
  /// Throws unless is_rational().
  const Rational& as_rational() const;

  int sign() const;
  bool is_zero() const { return sign() == 0; }
  Integer floor() const;
  Integer ceil() const;
  /// x - floor(x), always in [0, 1).
  Scalar frac() const;
  Scalar abs() const { return sign() < 0 ? -*this : *this; }
  double to_double() const;
  long double to_long_double() const;

  /// Canonical text form accepted by parse().
  std::string to_string() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.d_ == b.d_ && a.p_ == b.p_ && a.r_ == b.r_;
  }
  friend bool operator<(const Scalar& a, const Scalar& b) { return (a - b).sign() < 0; }
  friend bool operator>(const Scalar& a, const Scalar& b) { return b < a; }
  friend bool operator<=(const Scalar& a, const Scalar& b) { return !(b < a); }
  friend bool operator>=(const Scalar& a, const Scalar& b) { return !(a < b); }

  /// Representation order (d, p, r). Total on all values, including values
  /// with different radicands, but unrelated to numeric order.
  static bool structural_less(const Scalar& a, const Scalar& b);

 private:
  void normalize();
  std::int64_t common_radicand(const Scalar& o) const;

  Rational p_;
  Rational r_;
  std::int64_t d_ = 0;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

}  // namespace dirmix
