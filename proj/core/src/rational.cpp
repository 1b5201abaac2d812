#include "isopar/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace isopar {

Rational parse_rational(const std::string& text) {
  Rational q;
  if (text.empty() || q.set_str(text, 10) != 0) {
    throw std::invalid_argument("malformed rational: '" + text + "'");
  }
  if (sgn(q.get_den()) == 0) {
    throw std::invalid_argument("zero denominator: '" + text + "'");
  }
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

int QSqrt3::sign() const {
  const int sa = sgn(rational_);
  const int sb = sgn(surd_);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  // Opposite signs: compare a^2 against 3 b^2.
  const Rational a2 = rational_ * rational_;
  const Rational b2 = 3 * surd_ * surd_;
  const int c = cmp(a2, b2);
  if (c == 0) return 0;  // unreachable for b != 0 since sqrt(3) is irrational
  return c > 0 ? sa : sb;
}

double QSqrt3::to_double() const {
  return rational_.get_d() + surd_.get_d() * std::sqrt(3.0);
}

QSqrt3& QSqrt3::operator*=(const QSqrt3& o) {
  // (a + b r)(c + d r) = (ac + 3bd) + (ad + bc) r,  r^2 = 3
  Rational a = rational_ * o.rational_ + 3 * surd_ * o.surd_;
  Rational b = rational_ * o.surd_ + surd_ * o.rational_;
  rational_ = std::move(a);
  surd_ = std::move(b);
  return *this;
}

QSqrt3& QSqrt3::operator/=(const QSqrt3& o) {
  // 1/(c + d r) = (c - d r)/(c^2 - 3 d^2)
  const Rational norm = o.rational_ * o.rational_ - 3 * o.surd_ * o.surd_;
  if (sgn(norm) == 0) throw std::domain_error("division by zero in Q[sqrt 3]");
  QSqrt3 inverse(o.rational_ / norm, -o.surd_ / norm);
  return *this *= inverse;
}

std::string to_string(const QSqrt3& value) {
  if (value.is_rational()) return to_string(value.rational_part());
  std::string out;
  if (sgn(value.rational_part()) != 0) out = to_string(value.rational_part()) + " + ";
  out += "(" + to_string(value.surd_part()) + ")*sqrt(3)";
  return out;
}

}  // namespace isopar
