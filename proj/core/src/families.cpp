#include "isopar/families.hpp"

#include <algorithm>
#include <charconv>
#include <string>

namespace isopar {
namespace {

constexpr int kAllowedG[] = {1, 2, 3, 4, 6};

std::vector<std::string> numbered(const std::string& stem, int count, int first = 1) {
  std::vector<std::string> out;
  for (int i = 0; i < count; ++i) out.push_back(stem + std::to_string(first + i));
  return out;
}

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

MultiPoly square_sum(std::size_t nvars, std::size_t first, std::size_t count) {
  MultiPoly s(nvars);
  for (std::size_t i = first; i < first + count; ++i) {
    Exponents e(nvars, 0);
    e[i] = 2;
    s.add_term(e, QSqrt3(1));
  }
  return s;
}

Rational c_from_multiplicities(int g, int m1, int m2) {
  Rational c(g * g * (m2 - m1), 2);
  c.canonicalize();
  return c;
}

std::optional<int> parse_int(std::string_view s) {
  int v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
  return v;
}

std::vector<QSqrt3> sqrt3_times(const AlgElem& a) {
  std::vector<QSqrt3> out;
  out.reserve(a.coords().size());
  for (const auto& c : a.coords()) out.emplace_back(Rational(0), c);
  return out;
}

}  // namespace

int FamilySpec::multiplicity(int i) const {
  if (multiplicities.empty()) return 0;
  if (g == 1) return multiplicities.front();
  return multiplicities[idx((i - 1) % 2)];
}

FamilySpec family_g1(int n) {
  if (n < 1) throw UnknownFamily("g1 family needs n >= 1, got " + std::to_string(n));
  FamilySpec f;
  f.name = "g1-" + std::to_string(n);
  f.g = 1;
  f.ambient_dim = n + 2;
  f.multiplicities = {n, n};
  f.F = MultiPoly::variable(idx(n + 2), 0);
  f.c_expected = 0;
  f.variable_names = numbered("x", n + 2);
  return f;
}

FamilySpec family_g2(int p, int q) {
  if (p < 1 || q < 1) {
    throw UnknownFamily("g2 family needs p, q >= 1, got (" + std::to_string(p) + ", " + std::to_string(q) + ")");
  }
  FamilySpec f;
  f.name = "g2-" + std::to_string(p) + "-" + std::to_string(q);
  f.g = 2;
  f.ambient_dim = p + q + 2;
  f.multiplicities = {p, q};
  const std::size_t nv = idx(f.ambient_dim);
  f.F = square_sum(nv, 0, idx(p + 1)) - square_sum(nv, idx(p + 1), idx(q + 1));
  f.c_expected = c_from_multiplicities(2, p, q);
  f.variable_names = numbered("x", f.ambient_dim);
  return f;
}

FamilySpec family_g3(AlgebraKind kind) {
  const int m = dimension(kind);
  const std::size_t nv = idx(3 * m + 2);
  const std::size_t xi = 0, yi = 1;
  const std::size_t X0 = 2, Y0 = 2 + idx(m), Z0 = 2 + idx(2 * m);

  const MultiPoly x = MultiPoly::variable(nv, xi);
  const MultiPoly y = MultiPoly::variable(nv, yi);
  const MultiPoly normX = square_sum(nv, X0, idx(m));
  const MultiPoly normY = square_sum(nv, Y0, idx(m));
  const MultiPoly normZ = square_sum(nv, Z0, idx(m));

  // Re((XY)Z) = sum_{a,b,c} X_a Y_b Z_c Re((e_a e_b) e_c)
  MultiPoly triple(nv);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      const AlgElem ab = mul(AlgElem::basis(kind, a), AlgElem::basis(kind, b));
      for (int c = 0; c < m; ++c) {
        const Rational r = re(mul(ab, AlgElem::basis(kind, c)));
        if (sgn(r) == 0) continue;
        Exponents e(nv, 0);
        e[X0 + idx(a)] = 1;
        e[Y0 + idx(b)] = 1;
        e[Z0 + idx(c)] = 1;
        triple.add_term(e, QSqrt3(r));
      }
    }
  }

  const QSqrt3 three_halves(Rational(3, 2));
  const QSqrt3 three_sqrt3_halves(Rational(0), Rational(3, 2));
  MultiPoly F = x.pow(3) - QSqrt3(3) * (x * y.pow(2));
  F += three_halves * (x * (normX + normY - QSqrt3(2) * normZ));
  F += three_sqrt3_halves * (y * (normX - normY));
  // XYZ + conj(Z) conj(Y) conj(X) = 2 Re((XY)Z)
  F += three_sqrt3_halves * QSqrt3(2) * triple;

  FamilySpec f;
  static constexpr const char* kSuffix[] = {"r", "c", "h", "o"};
  f.name = std::string("g3-") + kSuffix[static_cast<int>(kind)];
  f.g = 3;
  f.ambient_dim = 3 * m + 2;
  f.multiplicities = {m, m};
  f.F = std::move(F);
  f.c_expected = 0;
  f.algebra = kind;
  f.variable_names = {"x", "y"};
  for (const char* stem : {"X", "Y", "Z"}) {
    auto names = numbered(stem, m, 0);
    f.variable_names.insert(f.variable_names.end(), names.begin(), names.end());
  }
  return f;
}

std::vector<FamilySpec> catalog() {
  std::vector<FamilySpec> out;
  out.push_back(family_g1(2));
  out.push_back(family_g1(3));
  out.push_back(family_g2(1, 1));
  out.push_back(family_g2(1, 2));
  out.push_back(family_g2(2, 2));
  for (auto kind : {AlgebraKind::Real, AlgebraKind::Complex, AlgebraKind::Quaternion, AlgebraKind::Octonion}) {
    out.push_back(family_g3(kind));
  }
  return out;
}

std::vector<std::string> catalog_names() {
  return {"g1-2", "g1-3", "g2-1-1", "g2-1-2", "g2-2-2", "g3-r", "g3-c", "g3-h", "g3-o"};
}

FamilySpec family_by_name(std::string_view selector) {
  auto fail = [&]() -> FamilySpec {
    std::string known;
    for (const auto& n : catalog_names()) known += (known.empty() ? "" : ", ") + n;
    throw UnknownFamily("unknown family '" + std::string(selector) + "'; catalog: " + known);
  };
  if (selector.size() < 4 || selector[0] != 'g' || selector[2] != '-') return fail();
  const std::string_view rest = selector.substr(3);
  switch (selector[1]) {
    case '1': {
      const auto n = parse_int(rest);
      if (!n || *n < 1) return fail();
      return family_g1(*n);
    }
    case '2': {
      const auto dash = rest.find('-');
      if (dash == std::string_view::npos) return fail();
      const auto p = parse_int(rest.substr(0, dash));
      const auto q = parse_int(rest.substr(dash + 1));
      if (!p || !q || *p < 1 || *q < 1) return fail();
      return family_g2(*p, *q);
    }
    case '3': {
      // Long algebra names are accepted as aliases.
      if (rest == "r" || rest == "real") return family_g3(AlgebraKind::Real);
      if (rest == "c" || rest == "complex") return family_g3(AlgebraKind::Complex);
      if (rest == "h" || rest == "quaternion") return family_g3(AlgebraKind::Quaternion);
      if (rest == "o" || rest == "octonion") return family_g3(AlgebraKind::Octonion);
      return fail();
    }
    default:
      return fail();
  }
}

void validate(const FamilySpec& family) {
  auto require = [&](bool ok, const std::string& what) {
    if (!ok) throw std::logic_error(family.name + ": " + what);
  };
  require(std::find(std::begin(kAllowedG), std::end(kAllowedG), family.g) != std::end(kAllowedG),
          "g must be 1, 2, 3, 4 or 6");
  require(family.multiplicities.size() == 2, "expected two multiplicities");
  require(static_cast<int>(family.F.nvars()) == family.ambient_dim, "F lives in the wrong dimension");
  require(is_homogeneous(family.F) == family.g, "F is not homogeneous of degree g");
  const int m1 = family.multiplicities[0];
  const int m2 = family.multiplicities[1];
  if (family.g >= 2) require(2 * family.n() == family.g * (m1 + m2), "n != g (m1 + m2) / 2");
  require(family.c_expected == c_from_multiplicities(family.g, m1, m2), "c != g^2 (m2 - m1) / 2");
}

IdentityVerification verify_cartan_muenzner(const FamilySpec& family) {
  IdentityVerification v;
  v.family = family.name;
  v.homogeneous_degree = is_homogeneous(family.F);
  const int g = family.g;
  const std::size_t nv = family.F.nvars();

  v.euler_zero = euler_residual(family.F, g).is_zero();

  const MultiPoly gns = grad_norm_sq(family.F);
  v.grad_norm_terms = gns.size();
  const MultiPoly r2 = radius_sq(nv);
  v.grad_norm_zero = (gns - QSqrt3(static_cast<long>(g * g)) * r2.pow(static_cast<unsigned>(g - 1))).is_zero();

  v.laplacian = laplacian(family.F);
  v.c_equation_checked = g != 1;
  v.laplacian_sign = laplacian_orientation(family);
  v.laplacian_zero = v.laplacian_sign != 0;
  return v;
}

int laplacian_orientation(const FamilySpec& family) {
  const int g = family.g;
  const MultiPoly lap = laplacian(family.F);
  if (g == 1) return lap.is_zero() ? 1 : 0;
  const QSqrt3 c(family.c_expected);
  if (g % 2 == 0) {
    const MultiPoly rhs = c * radius_sq(family.F.nvars()).pow(static_cast<unsigned>((g - 2) / 2));
    if ((lap - rhs).is_zero()) return 1;
    if ((lap + rhs).is_zero()) return -1;
    return 0;
  }
  // r^{g-2} is not polynomial for odd g, but c = 0 removes it.
  return c.is_zero() && lap.is_zero() ? 1 : 0;
}

FocalChart::FocalChart(AlgebraKind kind) : kind_(kind) {
  if (kind == AlgebraKind::Octonion) throw std::invalid_argument("no parametrization for m = 8");
}

CartanFocalCoordinates FocalChart::coordinates(const AlgElem& u, const AlgElem& v, const AlgElem& w) const {
  if (u.kind() != kind_ || v.kind() != kind_ || w.kind() != kind_) {
    throw std::invalid_argument("algebra mismatch");
  }
  const Rational nu = norm_sq(u), nv = norm_sq(v), nw = norm_sq(w);
  if (nu + nv + nw != 1) {
    throw std::invalid_argument("focal chart needs |u|^2 + |v|^2 + |w|^2 = 1, got " + to_string(Rational(nu + nv + nw)));
  }
  CartanFocalCoordinates c;
  c.X = sqrt3_times(mul(v, conj(w)));
  c.Y = sqrt3_times(mul(w, conj(u)));
  c.Z = sqrt3_times(mul(u, conj(v)));
  c.x = QSqrt3(Rational(0), Rational((nu - nv) / 2));
  c.y = QSqrt3(Rational(nw - (nu + nv) / 2));
  return c;
}

std::vector<QSqrt3> FocalChart::operator()(const AlgElem& u, const AlgElem& v, const AlgElem& w) const {
  const CartanFocalCoordinates c = coordinates(u, v, w);
  std::vector<QSqrt3> point;
  point.reserve(2 + 3 * c.X.size());
  point.push_back(c.y);
  point.push_back(-c.x);
  point.insert(point.end(), c.X.begin(), c.X.end());
  point.insert(point.end(), c.Y.begin(), c.Y.end());
  point.insert(point.end(), c.Z.begin(), c.Z.end());
  return point;
}

}  // namespace isopar
