#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "isopar/rational.hpp"

namespace isopar {

/// The four normed division algebras R, C, H, O.
enum class AlgebraKind { Real, Complex, Quaternion, Octonion };

/// Real dimension m of the algebra: 1, 2, 4 or 8.
constexpr int dimension(AlgebraKind kind) {
  switch (kind) {
    case AlgebraKind::Real: return 1;
    case AlgebraKind::Complex: return 2;
    case AlgebraKind::Quaternion: return 4;
    case AlgebraKind::Octonion: return 8;
  }
  return 0;
}

std::string_view name(AlgebraKind kind);

/// Algebra of the given real dimension; throws std::invalid_argument unless
/// dim is 1, 2, 4 or 8.
AlgebraKind algebra_of_dimension(int dim);

/// Element of a composition algebra with exact rational coordinates
/// (coordinate 0 is the real part, 1..m-1 the imaginary units e_1..e_{m-1}).
///
/// Products use the Cayley-Dickson doubling
///
///     (a, b)(c, d) = (a c - conj(d) b,  d a + b conj(c))
///
/// applied recursively from R. For H this gives i j = k with i = e1, j = e2,
/// k = e3. The octonion table it produces (row e_i times column e_j) is
///
///          e1   e2   e3   e4   e5   e6   e7
///     e1   -1   e3  -e2   e5  -e4  -e7   e6
///     e2  -e3   -1   e1   e6   e7  -e4  -e5
///     e3   e2  -e1   -1   e7  -e6   e5  -e4
///     e4  -e5  -e6  -e7   -1   e1   e2   e3
///     e5   e4  -e7   e6  -e1   -1  -e3   e2
///     e6   e7   e4  -e5  -e2   e3   -1  -e1
///     e7  -e6   e5   e4  -e3  -e2   e1   -1
///
/// and is pinned by a golden test.
class AlgElem {
 public:
  /// Zero element.
  explicit AlgElem(AlgebraKind kind);
  /// Throws std::invalid_argument if coords.size() != dimension(kind).
  AlgElem(AlgebraKind kind, std::vector<Rational> coords);

  static AlgElem one(AlgebraKind kind);
  /// Basis unit e_index (e_0 = 1).
  static AlgElem basis(AlgebraKind kind, int index);

  AlgebraKind kind() const { return kind_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  const std::vector<Rational>& coords() const { return coords_; }
  const Rational& operator[](int i) const { return coords_[static_cast<std::size_t>(i)]; }

  /// Floating-point view of the coordinates.
  std::vector<double> to_doubles() const;

  AlgElem& operator+=(const AlgElem& o);
  AlgElem& operator-=(const AlgElem& o);
  AlgElem& operator*=(const Rational& s);

  friend AlgElem operator+(AlgElem a, const AlgElem& b) { return a += b; }
  friend AlgElem operator-(AlgElem a, const AlgElem& b) { return a -= b; }
  friend AlgElem operator*(AlgElem a, const Rational& s) { return a *= s; }
  friend AlgElem operator*(const Rational& s, AlgElem a) { return a *= s; }
  friend bool operator==(const AlgElem& a, const AlgElem& b) {
    return a.kind_ == b.kind_ && a.coords_ == b.coords_;
  }

 private:
  AlgebraKind kind_;
  std::vector<Rational> coords_;
};

/// Algebra product; throws std::invalid_argument("algebra mismatch").
AlgElem mul(const AlgElem& a, const AlgElem& b);
inline AlgElem operator*(const AlgElem& a, const AlgElem& b) { return mul(a, b); }

AlgElem conj(const AlgElem& a);
Rational re(const AlgElem& a);
Rational norm_sq(const AlgElem& a);

/// e_i e_j = sign * e_index.
struct BasisProduct {
  int sign;
  int index;
  friend bool operator==(const BasisProduct&, const BasisProduct&) = default;
};

/// Signed multiplication table of the basis units, row-major (m x m).
std::vector<BasisProduct> multiplication_table(AlgebraKind kind);

}  // namespace isopar
