#include "isopar/algebra.hpp"

#include <stdexcept>
#include <string>

namespace isopar {
namespace {

using Coords = std::vector<Rational>;

Coords conj_coords(std::span<const Rational> a) {
  Coords out(a.begin(), a.end());
  for (std::size_t i = 1; i < out.size(); ++i) out[i] = -out[i];
  return out;
}

// Cayley-Dickson product on a power-of-two coordinate block.
Coords cd_product(std::span<const Rational> a, std::span<const Rational> b) {
  const std::size_t n = a.size();
  if (n == 1) return Coords{a[0] * b[0]};
  const std::size_t h = n / 2;
  const auto a0 = a.first(h), a1 = a.subspan(h);
  const auto b0 = b.first(h), b1 = b.subspan(h);
  const Coords b0c = conj_coords(b0);
  const Coords b1c = conj_coords(b1);

  // (a0, a1)(b0, b1) = (a0 b0 - conj(b1) a1,  b1 a0 + a1 conj(b0))
  Coords lo = cd_product(a0, b0);
  const Coords lo2 = cd_product(b1c, a1);
  Coords hi = cd_product(b1, a0);
  const Coords hi2 = cd_product(a1, b0c);

  Coords out(n);
  for (std::size_t i = 0; i < h; ++i) {
    out[i] = lo[i] - lo2[i];
    out[h + i] = hi[i] + hi2[i];
  }
  return out;
}

}  // namespace

std::string_view name(AlgebraKind kind) {
  switch (kind) {
    case AlgebraKind::Real: return "real";
    case AlgebraKind::Complex: return "complex";
    case AlgebraKind::Quaternion: return "quaternion";
    case AlgebraKind::Octonion: return "octonion";
  }
  return "?";
}

AlgebraKind algebra_of_dimension(int dim) {
  switch (dim) {
    case 1: return AlgebraKind::Real;
    case 2: return AlgebraKind::Complex;
    case 4: return AlgebraKind::Quaternion;
    case 8: return AlgebraKind::Octonion;
    default: throw std::invalid_argument("no division algebra of dimension " + std::to_string(dim));
  }
}

AlgElem::AlgElem(AlgebraKind kind)
    : kind_(kind), coords_(static_cast<std::size_t>(dimension(kind)), Rational(0)) {}

AlgElem::AlgElem(AlgebraKind kind, std::vector<Rational> coords)
    : kind_(kind), coords_(std::move(coords)) {
  if (static_cast<int>(coords_.size()) != dimension(kind)) {
    throw std::invalid_argument("expected " + std::to_string(dimension(kind)) + " coordinates for " +
                                std::string(name(kind)) + ", got " +
                                std::to_string(coords_.size()));
  }
  for (auto& c : coords_) c.canonicalize();
}

AlgElem AlgElem::one(AlgebraKind kind) { return basis(kind, 0); }

AlgElem AlgElem::basis(AlgebraKind kind, int index) {
  if (index < 0 || index >= dimension(kind)) {
    throw std::out_of_range("basis index " + std::to_string(index) + " out of range");
  }
  AlgElem e(kind);
  e.coords_[static_cast<std::size_t>(index)] = 1;
  return e;
}

std::vector<double> AlgElem::to_doubles() const {
  std::vector<double> out;
  out.reserve(coords_.size());
  for (const auto& c : coords_) out.push_back(c.get_d());
  return out;
}

AlgElem& AlgElem::operator+=(const AlgElem& o) {
  if (o.kind_ != kind_) throw std::invalid_argument("algebra mismatch");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
  return *this;
}

AlgElem& AlgElem::operator-=(const AlgElem& o) {
  if (o.kind_ != kind_) throw std::invalid_argument("algebra mismatch");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= o.coords_[i];
  return *this;
}

AlgElem& AlgElem::operator*=(const Rational& s) {
  for (auto& c : coords_) c *= s;
  return *this;
}

AlgElem mul(const AlgElem& a, const AlgElem& b) {
  if (a.kind() != b.kind()) throw std::invalid_argument("algebra mismatch");
  return AlgElem(a.kind(), cd_product(a.coords(), b.coords()));
}

AlgElem conj(const AlgElem& a) { return AlgElem(a.kind(), conj_coords(a.coords())); }

Rational re(const AlgElem& a) { return a[0]; }

Rational norm_sq(const AlgElem& a) {
  Rational s = 0;
  for (const auto& c : a.coords()) s += c * c;
  return s;
}

std::vector<BasisProduct> multiplication_table(AlgebraKind kind) {
  const int m = dimension(kind);
  std::vector<BasisProduct> table;
  table.reserve(static_cast<std::size_t>(m * m));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const AlgElem p = mul(AlgElem::basis(kind, i), AlgElem::basis(kind, j));
      for (int k = 0; k < m; ++k) {
        if (sgn(p[k]) != 0) {
          table.push_back({sgn(p[k]), k});
          break;
        }
      }
    }
  }
  return table;
}

}  // namespace isopar
