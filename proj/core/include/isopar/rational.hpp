#pragma once

#include <gmpxx.h>

#include <string>

namespace isopar {

/// Exact arbitrary-precision rational scalar.
using Rational = mpq_class;

/// Parses "p/q" or "p"; throws std::invalid_argument on malformed input.
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& q);

/// Element a + b*sqrt(3) of the quadratic field Q[sqrt 3].
///
/// The Cartan cubic has coefficients 3/2 and 3*sqrt(3)/2, and the focal
/// parametrization scales by sqrt(3); keeping both parts exact lets every
/// identity check compare against an exact zero.
class QSqrt3 {
 public:
  QSqrt3() = default;
  QSqrt3(long value) : rational_(value) {}  // NOLINT(google-explicit-constructor)
  QSqrt3(Rational rational) : rational_(std::move(rational)) {  // NOLINT
    rational_.canonicalize();
  }
  QSqrt3(Rational rational, Rational surd)
      : rational_(std::move(rational)), surd_(std::move(surd)) {
    rational_.canonicalize();
    surd_.canonicalize();
  }

  static QSqrt3 sqrt3() { return QSqrt3(Rational(0), Rational(1)); }

  /// Rational part a.
  const Rational& rational_part() const { return rational_; }
  /// Coefficient b of sqrt(3).
  const Rational& surd_part() const { return surd_; }

  bool is_zero() const { return sgn(rational_) == 0 && sgn(surd_) == 0; }
  bool is_rational() const { return sgn(surd_) == 0; }

  /// Sign of a + b*sqrt(3), decided exactly.
  int sign() const;

  double to_double() const;

  QSqrt3& operator+=(const QSqrt3& o) {
    rational_ += o.rational_;
    surd_ += o.surd_;
    return *this;
  }
  QSqrt3& operator-=(const QSqrt3& o) {
    rational_ -= o.rational_;
    surd_ -= o.surd_;
    return *this;
  }
  QSqrt3& operator*=(const QSqrt3& o);
  QSqrt3& operator*=(const Rational& q) {
    rational_ *= q;
    surd_ *= q;
    return *this;
  }
  /// Exact division; throws std::domain_error on division by zero.
  QSqrt3& operator/=(const QSqrt3& o);

  friend QSqrt3 operator+(QSqrt3 a, const QSqrt3& b) { return a += b; }
  friend QSqrt3 operator-(QSqrt3 a, const QSqrt3& b) { return a -= b; }
  friend QSqrt3 operator*(QSqrt3 a, const QSqrt3& b) { return a *= b; }
  friend QSqrt3 operator/(QSqrt3 a, const QSqrt3& b) { return a /= b; }
  friend QSqrt3 operator-(QSqrt3 a) {
    a.rational_ = -a.rational_;
    a.surd_ = -a.surd_;
    return a;
  }
  friend bool operator==(const QSqrt3& a, const QSqrt3& b) {
    return a.rational_ == b.rational_ && a.surd_ == b.surd_;
  }
  friend bool operator!=(const QSqrt3& a, const QSqrt3& b) { return !(a == b); }

 private:
  Rational rational_{0};
  Rational surd_{0};
};

std::string to_string(const QSqrt3& value);

}  // namespace isopar
