#pragma once

// Reference computations written without the library's polynomial or
// algebra code, used to cross-check it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "isopar/algebra.hpp"
#include "isopar/rational.hpp"

namespace oracle {

// Cayley-Dickson product on doubles: (a,b)(c,d) = (ac - conj(d) b, d a + b conj(c)).
inline std::vector<double> cd_conj(std::span<const double> a) {
  std::vector<double> out(a.begin(), a.end());
  for (std::size_t i = 1; i < out.size(); ++i) out[i] = -out[i];
  return out;
}

inline std::vector<double> cd_mul(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  if (n == 1) return {a[0] * b[0]};
  const std::size_t h = n / 2;
  const auto a1 = a.subspan(0, h), a2 = a.subspan(h), b1 = b.subspan(0, h), b2 = b.subspan(h);
  const auto b2c = cd_conj(b2), b1c = cd_conj(b1);
  const auto p = cd_mul(a1, b1), q = cd_mul(b2c, a2), r = cd_mul(b2, a1), s = cd_mul(a2, b1c);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < h; ++i) {
    out[i] = p[i] - q[i];
    out[h + i] = r[i] + s[i];
  }
  return out;
}

inline double sq(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return s;
}

// Cartan cubic evaluated term by term on (x, y, X, Y, Z), X, Y, Z in R^m.
inline double cartan_cubic(int m, std::span<const double> p) {
  const double x = p[0], y = p[1];
  const auto X = p.subspan(2, m), Y = p.subspan(2 + m, m), Z = p.subspan(2 + 2 * m, m);
  const double r3 = std::sqrt(3.0);
  const auto xy = cd_mul(X, Y);
  const auto xyz = cd_mul(xy, Z);
  return x * x * x - 3.0 * x * y * y + 1.5 * x * (sq(X) + sq(Y) - 2.0 * sq(Z)) +
         1.5 * r3 * y * (sq(X) - sq(Y)) + 3.0 * r3 * xyz[0];
}

// Second derivative of f along the great circle cos t x + sin t u at t = 0.
template <class F>
double geodesic_second_derivative(const F& f, const Eigen::VectorXd& x, const Eigen::VectorXd& u, double h) {
  auto at = [&](double t) { return f(Eigen::VectorXd(std::cos(t) * x + std::sin(t) * u)); };
  return (at(h) - 2.0 * at(0.0) + at(-h)) / (h * h);
}

// Spherical Hessian of f in the orthonormal tangent frame E by polarization.
template <class F>
Eigen::MatrixXd spherical_hessian_fd(const F& f, const Eigen::VectorXd& x, const Eigen::MatrixXd& E, double h) {
  const Eigen::Index n = E.cols();
  Eigen::MatrixXd H(n, n);
  for (Eigen::Index i = 0; i < n; ++i) H(i, i) = geodesic_second_derivative(f, x, E.col(i), h);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Eigen::VectorXd plus = (E.col(i) + E.col(j)) / std::sqrt(2.0);
      const Eigen::VectorXd minus = (E.col(i) - E.col(j)) / std::sqrt(2.0);
      H(i, j) = H(j, i) =
          0.5 * (geodesic_second_derivative(f, x, plus, h) - geodesic_second_derivative(f, x, minus, h));
    }
  }
  return H;
}

// |grad^S f|^2 from central differences along an orthonormal tangent frame.
template <class F>
double sphere_grad_norm_sq_fd(const F& f, const Eigen::VectorXd& x, const Eigen::MatrixXd& E, double h) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < E.cols(); ++i) {
    const double d = (f(Eigen::VectorXd(std::cos(h) * x + std::sin(h) * E.col(i))) -
                      f(Eigen::VectorXd(std::cos(h) * x - std::sin(h) * E.col(i)))) /
                     (2.0 * h);
    s += d * d;
  }
  return s;
}

// Orthonormal basis of x^perp.
inline Eigen::MatrixXd tangent_frame(const Eigen::VectorXd& x) {
  const Eigen::Index N = x.size();
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(N, N);
  return q.rightCols(N - 1);
}

// Rational point on S^{k-1} by inverse stereographic projection of an integer vector.
inline std::vector<isopar::Rational> rational_sphere_point(std::mt19937_64& rng, int k, int range = 9) {
  std::uniform_int_distribution<int> coord(-range, range);
  std::vector<long> a(static_cast<std::size_t>(k - 1));
  long norm = 0;
  for (auto& v : a) {
    v = coord(rng);
    norm += v * v;
  }
  std::vector<isopar::Rational> out;
  for (long v : a) {
    isopar::Rational q(2 * v, norm + 1);
    q.canonicalize();
    out.push_back(q);
  }
  isopar::Rational last(norm - 1, norm + 1);
  last.canonicalize();
  out.push_back(last);
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

inline isopar::Rational random_rational(std::mt19937_64& rng, int num_range = 20, int den_range = 12) {
  std::uniform_int_distribution<int> num(-num_range, num_range), den(1, den_range);
  isopar::Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline isopar::AlgElem random_element(std::mt19937_64& rng, isopar::AlgebraKind kind) {
  std::vector<isopar::Rational> c;
  for (int i = 0; i < isopar::dimension(kind); ++i) c.push_back(random_rational(rng));
  return isopar::AlgElem(kind, std::move(c));
}

}  // namespace oracle
