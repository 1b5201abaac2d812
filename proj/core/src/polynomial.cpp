#include "isopar/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace isopar {
namespace {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void check_dimension(const MultiPoly& p, std::size_t n) {
  if (n != p.nvars()) {
    throw std::invalid_argument("dimension mismatch: polynomial has " + std::to_string(p.nvars()) +
                                " variables, point has " + std::to_string(n));
  }
}

template <class Scalar>
std::vector<std::vector<Scalar>> power_table(const MultiPoly& p, std::span<const Scalar> x) {
  std::vector<unsigned> max_power(p.nvars(), 0);
  for (const auto& [exps, coeff] : p.terms()) {
    for (std::size_t i = 0; i < exps.size(); ++i) {
      max_power[i] = std::max<unsigned>(max_power[i], exps[i]);
    }
  }
  std::vector<std::vector<Scalar>> table(p.nvars());
  for (std::size_t i = 0; i < p.nvars(); ++i) {
    table[i].reserve(max_power[i] + 1);
    table[i].push_back(Scalar(1));
    for (unsigned k = 1; k <= max_power[i]; ++k) table[i].push_back(table[i].back() * x[i]);
  }
  return table;
}

QSqrt3 eval_exact(const MultiPoly& p, std::span<const QSqrt3> x) {
  const auto table = power_table<QSqrt3>(p, x);
  QSqrt3 total;
  for (const auto& [exps, coeff] : p.terms()) {
    QSqrt3 term = coeff;
    for (std::size_t i = 0; i < exps.size(); ++i) {
      if (exps[i] != 0) term *= table[i][exps[i]];
    }
    total += term;
  }
  return total;
}

nlohmann::json json_integer(const mpz_class& z) {
  if (z.fits_slong_p()) return nlohmann::json(z.get_si());
  return nlohmann::json(z.get_str());
}

mpz_class integer_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
  if (j.is_string()) {
    mpz_class z;
    if (z.set_str(j.get<std::string>(), 10) != 0) {
      throw std::invalid_argument("malformed integer in polynomial JSON");
    }
    return z;
  }
  throw std::invalid_argument("expected integer or decimal string in polynomial JSON");
}

Rational rational_from_json(const nlohmann::json& num, const nlohmann::json& den) {
  const mpz_class d = integer_from_json(den);
  if (sgn(d) == 0) throw std::invalid_argument("zero denominator in polynomial JSON");
  Rational q(integer_from_json(num), d);
  q.canonicalize();
  return q;
}

}  // namespace

int total_degree(const Exponents& e) {
  return std::accumulate(e.begin(), e.end(), 0, [](int acc, std::uint16_t v) { return acc + v; });
}

bool GrlexLess::operator()(const Exponents& a, const Exponents& b) const {
  const int da = total_degree(a);
  const int db = total_degree(b);
  if (da != db) return da < db;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

MultiPoly MultiPoly::constant(std::size_t nvars, const QSqrt3& value) {
  MultiPoly p(nvars);
  p.add_term(Exponents(nvars, 0), value);
  return p;
}

MultiPoly MultiPoly::variable(std::size_t nvars, std::size_t index) {
  if (index >= nvars) throw std::out_of_range("variable index out of range");
  Exponents e(nvars, 0);
  e[index] = 1;
  MultiPoly p(nvars);
  p.add_term(e, QSqrt3(1));
  return p;
}

MultiPoly MultiPoly::monomial(Exponents exps, const QSqrt3& coeff) {
  MultiPoly p(exps.size());
  p.add_term(exps, coeff);
  return p;
}

int MultiPoly::degree() const {
  int d = -1;
  for (const auto& [exps, coeff] : terms_) d = std::max(d, total_degree(exps));
  return d;
}

void MultiPoly::add_term(const Exponents& exps, const QSqrt3& coeff) {
  if (exps.size() != nvars_) {
    throw std::invalid_argument("exponent vector has length " + std::to_string(exps.size()) +
                                ", expected " + std::to_string(nvars_));
  }
  if (coeff.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(exps, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

QSqrt3 MultiPoly::coefficient(const Exponents& exps) const {
  const auto it = terms_.find(exps);
  return it == terms_.end() ? QSqrt3() : it->second;
}

MultiPoly MultiPoly::derivative(std::size_t var) const {
  if (var >= nvars_) throw std::out_of_range("variable index out of range");
  MultiPoly out(nvars_);
  for (const auto& [exps, coeff] : terms_) {
    if (exps[var] == 0) continue;
    Exponents e = exps;
    const long k = e[var];
    e[var] -= 1;
    out.add_term(e, coeff * QSqrt3(k));
  }
  return out;
}

MultiPoly MultiPoly::pow(unsigned k) const {
  MultiPoly result = constant(nvars_, QSqrt3(1));
  MultiPoly base = *this;
  while (k > 0) {
    if (k & 1U) result = result * base;
    k >>= 1U;
    if (k > 0) base = base * base;
  }
  return result;
}

void MultiPoly::check_same_space(const MultiPoly& o) const {
  if (o.nvars_ != nvars_) {
    throw std::invalid_argument("polynomials live in different variable counts (" +
                                std::to_string(nvars_) + " vs " + std::to_string(o.nvars_) + ")");
  }
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  check_same_space(o);
  for (const auto& [exps, coeff] : o.terms_) add_term(exps, coeff);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  check_same_space(o);
  for (const auto& [exps, coeff] : o.terms_) add_term(exps, -coeff);
  return *this;
}

MultiPoly& MultiPoly::operator*=(const QSqrt3& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [exps, coeff] : terms_) coeff *= s;
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  a.check_same_space(b);
  MultiPoly out(a.nvars_);
  Exponents e(a.nvars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = static_cast<std::uint16_t>(ea[i] + eb[i]);
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

QSqrt3 eval(const MultiPoly& p, std::span<const QSqrt3> x) {
  check_dimension(p, x.size());
  return eval_exact(p, x);
}

QSqrt3 eval(const MultiPoly& p, std::span<const Rational> x) {
  check_dimension(p, x.size());
  std::vector<QSqrt3> lifted(x.begin(), x.end());
  return eval_exact(p, lifted);
}

double eval(const MultiPoly& p, std::span<const double> x) {
  check_dimension(p, x.size());
  return CompiledPoly(p)(x);
}

PolyVec grad(const MultiPoly& p) {
  PolyVec out;
  out.reserve(p.nvars());
  for (std::size_t i = 0; i < p.nvars(); ++i) out.push_back(p.derivative(i));
  return out;
}

PolyMatrix hessian(const MultiPoly& p) {
  const std::size_t n = p.nvars();
  const PolyVec first = grad(p);
  PolyMatrix h(n, PolyVec(n, MultiPoly(n)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      h[i][j] = first[i].derivative(j);
      if (j != i) h[j][i] = h[i][j];
    }
  }
  return h;
}

MultiPoly laplacian(const MultiPoly& p) {
  MultiPoly out(p.nvars());
  for (std::size_t i = 0; i < p.nvars(); ++i) out += p.derivative(i).derivative(i);
  return out;
}

MultiPoly grad_norm_sq(const MultiPoly& p) {
  const PolyVec g = grad(p);
  return dot(g, g);
}

std::optional<int> is_homogeneous(const MultiPoly& p) {
  if (p.is_zero()) return std::nullopt;
  const int d = total_degree(p.terms().begin()->first);
  // Grlex order puts the lowest degree first and the highest last.
  if (total_degree(p.terms().rbegin()->first) != d) return std::nullopt;
  return d;
}

MultiPoly dot(const PolyVec& a, const PolyVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  if (a.empty()) return MultiPoly(0);
  MultiPoly out(a.front().nvars());
  for (std::size_t i = 0; i < a.size(); ++i) out += a[i] * b[i];
  return out;
}

MultiPoly radius_sq(std::size_t nvars) {
  MultiPoly r(nvars);
  for (std::size_t i = 0; i < nvars; ++i) {
    Exponents e(nvars, 0);
    e[i] = 2;
    r.add_term(e, QSqrt3(1));
  }
  return r;
}

MultiPoly euler_residual(const MultiPoly& p, int degree) {
  const std::size_t n = p.nvars();
  PolyVec position;
  position.reserve(n);
  for (std::size_t i = 0; i < n; ++i) position.push_back(MultiPoly::variable(n, i));
  return dot(grad(p), position) - p * QSqrt3(static_cast<long>(degree));
}

std::string to_string(const MultiPoly& p, std::span<const std::string> names) {
  if (p.is_zero()) return "0";
  auto var_name = [&](std::size_t i) {
    return i < names.size() ? names[i] : "x" + std::to_string(i + 1);
  };
  std::string out;
  bool first = true;
  // Highest degree first reads more naturally.
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [exps, coeff] = *it;
    std::string c = to_string(coeff);
    bool negative = coeff.is_rational() && sgn(coeff.rational_part()) < 0;
    if (negative) c = to_string(-coeff);
    if (!coeff.is_rational()) c = "(" + c + ")";
    std::string mono;
    for (std::size_t i = 0; i < exps.size(); ++i) {
      if (exps[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += var_name(i);
      if (exps[i] > 1) mono += "^" + std::to_string(exps[i]);
    }
    std::string term;
    if (mono.empty()) {
      term = c;
    } else if (c == "1") {
      term = mono;
    } else {
      term = c + "*" + mono;
    }
    if (first) {
      out += negative ? "-" + term : term;
    } else {
      out += negative ? " - " + term : " + " + term;
    }
    first = false;
  }
  return out;
}

nlohmann::json to_json(const MultiPoly& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [exps, coeff] : p.terms()) {
    nlohmann::json t;
    t["exps"] = exps;
    t["num"] = json_integer(coeff.rational_part().get_num());
    t["den"] = json_integer(coeff.rational_part().get_den());
    if (!coeff.is_rational()) {
      t["sqrt3_num"] = json_integer(coeff.surd_part().get_num());
      t["sqrt3_den"] = json_integer(coeff.surd_part().get_den());
    }
    terms.push_back(std::move(t));
  }
  return nlohmann::json{{"nvars", p.nvars()}, {"coefficient_field", "Q[sqrt3]"}, {"terms", terms}};
}

MultiPoly poly_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("nvars") || !j.contains("terms") || !j["terms"].is_array()) {
    throw std::invalid_argument("polynomial JSON needs 'nvars' and a 'terms' array");
  }
  const auto nvars = j["nvars"].get<std::size_t>();
  MultiPoly p(nvars);
  for (const auto& t : j["terms"]) {
    if (!t.contains("exps") || !t.contains("num") || !t.contains("den")) {
      throw std::invalid_argument("polynomial term needs 'exps', 'num', 'den'");
    }
    const auto exps = t["exps"].get<Exponents>();
    Rational surd = 0;
    if (t.contains("sqrt3_num")) surd = rational_from_json(t["sqrt3_num"], t.value("sqrt3_den", nlohmann::json(1)));
    p.add_term(exps, QSqrt3(rational_from_json(t["num"], t["den"]), surd));
  }
  return p;
}

CompiledPoly::CompiledPoly(const MultiPoly& p) : nvars_(p.nvars()) {
  coeffs_.reserve(p.size());
  offsets_.reserve(p.size() + 1);
  offsets_.push_back(0);
  for (const auto& [exps, coeff] : p.terms()) {
    coeffs_.push_back(coeff.to_double());
    for (std::size_t i = 0; i < exps.size(); ++i) {
      if (exps[i] != 0) factors_.push_back({static_cast<std::uint32_t>(i), exps[i]});
    }
    offsets_.push_back(static_cast<std::uint32_t>(factors_.size()));
  }
}

double CompiledPoly::operator()(std::span<const double> x) const {
  CompensatedSum sum;
  for (std::size_t t = 0; t < coeffs_.size(); ++t) {
    double term = coeffs_[t];
    for (std::uint32_t f = offsets_[t]; f < offsets_[t + 1]; ++f) {
      const double v = x[factors_[f].var];
      for (std::uint32_t k = 0; k < factors_[f].power; ++k) term *= v;
    }
    sum.add(term);
  }
  return sum.value();
}

PolyField::PolyField(const MultiPoly& p) : nvars_(p.nvars()) {
  const auto g = is_homogeneous(p);
  if (!g) throw std::invalid_argument("PolyField requires a homogeneous polynomial");
  degree_ = *g;
  value_ = CompiledPoly(p);
  const PolyVec first = grad(p);
  gradient_.reserve(nvars_);
  for (const auto& d : first) gradient_.emplace_back(d);
  hessian_upper_.reserve(nvars_ * (nvars_ + 1) / 2);
  MultiPoly lap(nvars_);
  for (std::size_t i = 0; i < nvars_; ++i) {
    for (std::size_t j = i; j < nvars_; ++j) {
      MultiPoly second = first[i].derivative(j);
      if (i == j) lap += second;
      hessian_upper_.emplace_back(second);
    }
  }
  laplacian_ = CompiledPoly(lap);
}

double PolyField::value(const Eigen::VectorXd& x) const {
  return value_(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
}

Eigen::VectorXd PolyField::gradient(const Eigen::VectorXd& x) const {
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
  Eigen::VectorXd out(static_cast<Eigen::Index>(nvars_));
  for (std::size_t i = 0; i < nvars_; ++i) out[static_cast<Eigen::Index>(i)] = gradient_[i](xs);
  return out;
}

Eigen::MatrixXd PolyField::hessian(const Eigen::VectorXd& x) const {
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
  const auto n = static_cast<Eigen::Index>(nvars_);
  Eigen::MatrixXd h(n, n);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      h(i, j) = hessian_upper_[k++](xs);
      h(j, i) = h(i, j);
    }
  }
  return h;
}

double PolyField::laplacian(const Eigen::VectorXd& x) const {
  return laplacian_(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
}

namespace {

void require_unit(const Eigen::VectorXd& x) {
  if (std::abs(x.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("point is not on the unit sphere (|x| = " + std::to_string(x.norm()) + ")");
  }
}

Eigen::VectorXd to_eigen(std::span<const double> x) {
  return Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
}

PolyField checked_field(const MultiPoly& F, int g, std::size_t n) {
  check_dimension(F, n);
  PolyField field(F);
  if (field.degree() != g) {
    throw std::invalid_argument("polynomial is homogeneous of degree " + std::to_string(field.degree()) +
                                ", not " + std::to_string(g));
  }
  return field;
}

}  // namespace

double sphere_grad_norm_sq_value(const PolyField& F, const Eigen::VectorXd& x) {
  require_unit(x);
  const double g = F.degree();
  const double f = F.value(x);
  return F.gradient(x).squaredNorm() - g * g * f * f;
}

double sphere_grad_norm_sq_value(const MultiPoly& F, int g, std::span<const double> x) {
  return sphere_grad_norm_sq_value(checked_field(F, g, x.size()), to_eigen(x));
}

double sphere_laplacian_value(const PolyField& F, const Eigen::VectorXd& x) {
  require_unit(x);
  const double g = F.degree();
  const double n = static_cast<double>(F.nvars()) - 2.0;
  const double f = F.value(x);
  return F.laplacian(x) - g * (g - 1.0) * f - g * (n + 1.0) * f;
}

double sphere_laplacian_value(const MultiPoly& F, int g, int n, std::span<const double> x) {
  if (static_cast<std::size_t>(n) + 2 != x.size()) {
    throw std::invalid_argument("sphere_laplacian_value: n + 2 must equal the point dimension");
  }
  return sphere_laplacian_value(checked_field(F, g, x.size()), to_eigen(x));
}

}  // namespace isopar
