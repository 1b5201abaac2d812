#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "isopar/algebra.hpp"
#include "isopar/polynomial.hpp"

namespace isopar {

/// An isoparametric family on S^{n+1}, given by its Cartan-Muenzner
/// polynomial F of degree g on R^{n+2}.
struct FamilySpec {
  std::string name;
  int g = 0;
  int ambient_dim = 0;
  /// (m1, m2); cluster i has multiplicity m_{(i-1) mod 2 + 1}.
  std::vector<int> multiplicities;
  MultiPoly F;
  /// g^2 (m2 - m1) / 2
  Rational c_expected;
  /// Division algebra behind a g = 3 family.
  std::optional<AlgebraKind> algebra;
  std::vector<std::string> variable_names;

  /// Dimension n of the hypersurfaces.
  int n() const { return ambient_dim - 2; }
  /// Multiplicity of the 1-based cluster index i under the family's labeling.
  int multiplicity(int i) const;
};

/// Thrown for selectors that do not name a constructible family.
class UnknownFamily : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// F = x1 on R^{n+2}; levels are small spheres. Requires n >= 1.
FamilySpec family_g1(int n);
/// F = |u|^2 - |v|^2, u in R^{p+1}, v in R^{q+1}. Requires p, q >= 1.
FamilySpec family_g2(int p, int q);
/// Cartan's cubic on R^{3m+2} in the variable order (x, y, X_0..X_{m-1},
/// Y_0.., Z_0..), built from the algebra's multiplication:
///
///   F = x^3 - 3 x y^2 + 3/2 x (|X|^2 + |Y|^2 - 2|Z|^2)
///       + 3 sqrt3/2 y (|X|^2 - |Y|^2) + 3 sqrt3 Re((XY)Z)
FamilySpec family_g3(AlgebraKind kind);

/// g1(2), g1(3), g2(1,1), g2(1,2), g2(2,2), g3 over R, C, H, O.
std::vector<FamilySpec> catalog();

/// Selector grammar: g1-<n>, g2-<p>-<q>, g3-<r|c|h|o> (g3-real, g3-complex,
/// g3-quaternion, g3-octonion also accepted). Throws UnknownFamily.
FamilySpec family_by_name(std::string_view selector);

std::vector<std::string> catalog_names();

/// Throws std::logic_error if a structural invariant fails (g in
/// {1,2,3,4,6}, homogeneity, n = g(m1+m2)/2, c = g^2(m2-m1)/2).
void validate(const FamilySpec& family);

/// Outcome of the exact Cartan-Muenzner checks for one family.
struct IdentityVerification {
  std::string family;
  std::optional<int> homogeneous_degree;
  /// <grad F, x> - g F == 0
  bool euler_zero = false;
  /// |grad F|^2 - g^2 r^{2g-2} == 0
  bool grad_norm_zero = false;
  /// False for g = 1, where the c-equation is singular and only
  /// Delta F == 0 is checked.
  bool c_equation_checked = false;
  /// Delta F - sign * c * r^{g-2} == 0 for the recorded sign.
  bool laplacian_zero = false;
  /// +1 or -1: which orientation of c matched; 0 if neither.
  int laplacian_sign = 0;
  MultiPoly laplacian;
  std::size_t grad_norm_terms = 0;

  bool passed() const {
    return homogeneous_degree.has_value() && euler_zero && grad_norm_zero && laplacian_zero;
  }
};

IdentityVerification verify_cartan_muenzner(const FamilySpec& family);

/// Sign sigma in {+1, -1} with Delta F = sigma * c_expected * r^{g-2}
/// exactly; 0 when neither holds (or the c-equation is not polynomial).
/// Always +1 for g = 1, whose F = x1 is harmonic.
int laplacian_orientation(const FamilySpec& family);

/// Cartan's parametrization of the focal submanifold of a g = 3 family in
/// its classical coordinates: X = sqrt3 v conj(w), Y = sqrt3 w conj(u),
/// Z = sqrt3 u conj(v), x = sqrt3/2 (|u|^2 - |v|^2),
/// y = |w|^2 - (|u|^2 + |v|^2)/2.
struct CartanFocalCoordinates {
  QSqrt3 x;
  QSqrt3 y;
  std::vector<QSqrt3> X;
  std::vector<QSqrt3> Y;
  std::vector<QSqrt3> Z;
};

/// Chart (u, v, w) -> S^{3m+1} onto the focal submanifold {F = 1} of
/// family_g3(kind), for kind in {Real, Complex, Quaternion}.
///
/// The classical (x, y) pair sits a quarter turn away from the (x, y) plane of
/// the cubic: the image satisfies F = 1 after (x, y) -> (y, -x), and that
/// rotated point is what operator() returns.
class FocalChart {
 public:
  /// Throws std::invalid_argument("no parametrization for m = 8") for O.
  explicit FocalChart(AlgebraKind kind);

  AlgebraKind algebra() const { return kind_; }

  /// Classical coordinates. Requires |u|^2 + |v|^2 + |w|^2 = 1 exactly.
  CartanFocalCoordinates coordinates(const AlgElem& u, const AlgElem& v, const AlgElem& w) const;

  /// Point in the variable order of family_g3(kind).
  std::vector<QSqrt3> operator()(const AlgElem& u, const AlgElem& v, const AlgElem& w) const;

 private:
  AlgebraKind kind_;
};

inline std::vector<QSqrt3> focal_parametrization(AlgebraKind kind, const AlgElem& u, const AlgElem& v,
                                                 const AlgElem& w) {
  return FocalChart(kind)(u, v, w);
}

}  // namespace isopar
