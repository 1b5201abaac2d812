#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "isopar/rational.hpp"

namespace isopar {

/// Exponent vector of a monomial, one entry per ambient variable.
using Exponents = std::vector<std::uint16_t>;

int total_degree(const Exponents& e);

/// Graded lexicographic order: lower total degree first, ties broken by the
/// first differing exponent.
struct GrlexLess {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

/// Sparse multivariate polynomial with exact Q[sqrt 3] coefficients.
///
/// Terms live in a map keyed in graded lexicographic order and zero
/// coefficients are never stored, so two polynomials are equal exactly when
/// their term maps are equal. Identity checks therefore reduce to
/// `is_zero()` on a difference.
class MultiPoly {
 public:
  using TermMap = std::map<Exponents, QSqrt3, GrlexLess>;

  explicit MultiPoly(std::size_t nvars = 0) : nvars_(nvars) {}

  static MultiPoly constant(std::size_t nvars, const QSqrt3& value);
  /// The coordinate function x_{index} (0-based).
  static MultiPoly variable(std::size_t nvars, std::size_t index);
  static MultiPoly monomial(Exponents exps, const QSqrt3& coeff);

  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  /// Largest total degree of a term; -1 for the zero polynomial.
  int degree() const;

  /// Adds coeff * x^exps, merging with an existing term.
  void add_term(const Exponents& exps, const QSqrt3& coeff);

  /// Coefficient of x^exps (zero if absent).
  QSqrt3 coefficient(const Exponents& exps) const;

  /// Partial derivative with respect to x_{var}.
  MultiPoly derivative(std::size_t var) const;

  MultiPoly pow(unsigned k) const;

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const QSqrt3& s);

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator-(MultiPoly a) { return a *= QSqrt3(-1); }
  friend MultiPoly operator*(MultiPoly a, const QSqrt3& s) { return a *= s; }
  friend MultiPoly operator*(const QSqrt3& s, MultiPoly a) { return a *= s; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

 private:
  void check_same_space(const MultiPoly& o) const;

  std::size_t nvars_;
  TermMap terms_;
};

/// Polynomial vector field, e.g. a Euclidean gradient.
using PolyVec = std::vector<MultiPoly>;
/// Square matrix of polynomials, row-major.
using PolyMatrix = std::vector<std::vector<MultiPoly>>;

/// Exact evaluation. Throws std::invalid_argument on dimension mismatch.
QSqrt3 eval(const MultiPoly& p, std::span<const QSqrt3> x);
QSqrt3 eval(const MultiPoly& p, std::span<const Rational> x);
/// binary64 evaluation with compensated summation over the terms.
double eval(const MultiPoly& p, std::span<const double> x);

PolyVec grad(const MultiPoly& p);
PolyMatrix hessian(const MultiPoly& p);
MultiPoly laplacian(const MultiPoly& p);
/// sum_i (dp/dx_i)^2
MultiPoly grad_norm_sq(const MultiPoly& p);
/// Degree g when every term has total degree g; nullopt otherwise (including
/// the zero polynomial).
std::optional<int> is_homogeneous(const MultiPoly& p);

/// sum_i a_i b_i
MultiPoly dot(const PolyVec& a, const PolyVec& b);
/// r^2 = x_1^2 + ... + x_n^2
MultiPoly radius_sq(std::size_t nvars);
/// <grad p, x> - degree * p; the zero polynomial when p is homogeneous of
/// that degree.
MultiPoly euler_residual(const MultiPoly& p, int degree);

/// Human-readable form, e.g. "x1^3 - 3*x1*x2^2". Names default to x1..xn.
std::string to_string(const MultiPoly& p, std::span<const std::string> names = {});

/// {nvars, coefficient_field, terms: [{exps, num, den[, sqrt3_num, sqrt3_den]}]}
nlohmann::json to_json(const MultiPoly& p);
/// Inverse of to_json; throws std::invalid_argument on schema violations.
MultiPoly poly_from_json(const nlohmann::json& j);

/// Polynomial lowered to binary64 for repeated evaluation.
class CompiledPoly {
 public:
  CompiledPoly() = default;
  explicit CompiledPoly(const MultiPoly& p);

  std::size_t nvars() const { return nvars_; }
  /// Caller guarantees x.size() == nvars().
  double operator()(std::span<const double> x) const;

 private:
  struct Factor {
    std::uint32_t var;
    std::uint32_t power;
  };
  std::size_t nvars_ = 0;
  std::vector<double> coeffs_;
  std::vector<std::uint32_t> offsets_;  // term t owns factors_[offsets_[t], offsets_[t+1])
  std::vector<Factor> factors_;
};

/// A homogeneous polynomial together with compiled first and second
/// derivatives, for fast floating-point differential geometry on the sphere.
class PolyField {
 public:
  /// Throws std::invalid_argument if p is not homogeneous.
  explicit PolyField(const MultiPoly& p);

  std::size_t nvars() const { return nvars_; }
  int degree() const { return degree_; }

  double value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  /// Symmetric by construction (upper triangle mirrored).
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;
  double laplacian(const Eigen::VectorXd& x) const;

 private:
  std::size_t nvars_;
  int degree_;
  CompiledPoly value_;
  std::vector<CompiledPoly> gradient_;
  std::vector<CompiledPoly> hessian_upper_;  // (i, j), i <= j, row-major
  CompiledPoly laplacian_;
};

/// |grad^S V|^2 = |grad^E F|^2 - g^2 F^2 at a unit vector x, V = F restricted
/// to the sphere. Throws std::invalid_argument unless | |x| - 1 | <= 1e-12 and
/// F is homogeneous of degree g.
double sphere_grad_norm_sq_value(const MultiPoly& F, int g, std::span<const double> x);
double sphere_grad_norm_sq_value(const PolyField& F, const Eigen::VectorXd& x);

/// Delta^S V = Delta^E F - g(g-1) F - g(n+1) F at a unit vector x in R^{n+2}.
double sphere_laplacian_value(const MultiPoly& F, int g, int n, std::span<const double> x);
double sphere_laplacian_value(const PolyField& F, const Eigen::VectorXd& x);

}  // namespace isopar
