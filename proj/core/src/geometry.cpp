#include "isopar/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace isopar {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFocalGradient = 1e-8;
constexpr double kClusterGapFloor = 1e-4;

bool allowed_g(int g) { return g == 1 || g == 2 || g == 3 || g == 4 || g == 6; }

}  // namespace

FamilyModel::FamilyModel(FamilySpec spec)
    : spec_(std::move(spec)), field_(spec_.F), laplacian_sign_(laplacian_orientation(spec_)) {
  if (laplacian_sign_ == 0) {
    throw std::invalid_argument(spec_.name + ": Laplacian matches neither +c nor -c");
  }
  c_signed_ = laplacian_sign_ * spec_.c_expected.get_d();
}

Eigen::VectorXd FamilyModel::sphere_gradient(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd grad = field_.gradient(x);
  return grad - grad.dot(x) * x;
}

Eigen::VectorXd FamilyModel::unit_normal(const Eigen::VectorXd& y, int orientation) const {
  const Eigen::VectorXd x = y.normalized();
  const Eigen::VectorXd gs = sphere_gradient(x);
  const double norm = gs.norm();
  if (norm <= kFocalGradient) throw GeometryError("near focal set (|grad^S V| = " + std::to_string(norm) + ")");
  return (orientation >= 0 ? 1.0 : -1.0) * gs / norm;
}

FamilyModelPtr make_model(FamilySpec spec) { return std::make_shared<const FamilyModel>(std::move(spec)); }

Eigen::VectorXd SphereSampler::point(int dim) {
  Eigen::VectorXd v(dim);
  do {
    for (int i = 0; i < dim; ++i) v[i] = normal_(rng_);
  } while (v.norm() < 1e-8);
  return v.normalized();
}

double SphereSampler::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

LevelPoint LevelPoint::flipped() const {
  LevelPoint out = *this;
  out.normal = -normal;
  out.orientation = -orientation;
  return out;
}

LevelPoint level_point_at(FamilyModelPtr model, const Eigen::VectorXd& x, int orientation) {
  LevelPoint pt;
  pt.x = x.normalized();
  pt.level = model->value(pt.x);
  pt.orientation = orientation >= 0 ? 1 : -1;
  pt.normal = model->unit_normal(pt.x, pt.orientation);
  pt.model = std::move(model);
  return pt;
}

LevelPoint project_to_level(FamilyModelPtr model, const Eigen::VectorXd& x0, double s,
                            const ProjectionOptions& options) {
  if (!(s > -1.0 && s < 1.0)) throw std::invalid_argument("level must lie in (-1, 1)");
  if (x0.size() != model->dim()) throw std::invalid_argument("start point has the wrong dimension");
  if (x0.norm() == 0.0) throw std::invalid_argument("start point must be nonzero");

  const double g = model->g();
  const double max_step = kPi / (4.0 * g);
  Eigen::VectorXd x = x0.normalized();
  double residual = model->value(x) - s;
  for (int iter = 0; iter <= options.max_iterations; ++iter) {
    if (std::abs(residual) <= options.tolerance) return level_point_at(model, x);
    const Eigen::VectorXd gs = model->sphere_gradient(x);
    const double rho = gs.norm();
    if (rho <= 1e-12) {
      if (std::abs(std::abs(model->value(x)) - 1.0) < 1e-9) throw GeometryError("started at focal set");
      throw GeometryError("projection hit a critical point of V");
    }
    // Newton step in arc length along the great circle through x in the
    // direction of grad^S V; V changes at rate rho there.
    const Eigen::VectorXd dir = gs / rho;
    const double t = std::clamp(-residual / rho, -max_step, max_step);
    x = (std::cos(t) * x + std::sin(t) * dir).normalized();
    residual = model->value(x) - s;
  }
  throw GeometryError("projection did not converge in " + std::to_string(options.max_iterations) +
                      " iterations (last residual " + std::to_string(residual) + ")");
}

ShapeOperator shape_operator(const LevelPoint& pt) {
  const FamilyModel& model = *pt.model;
  const Eigen::Index N = pt.x.size();
  const Eigen::VectorXd gs = model.sphere_gradient(pt.x);
  const double rho = gs.norm();
  if (rho <= kFocalGradient) throw GeometryError("near focal set");

  Eigen::MatrixXd frame(N, 2);
  frame.col(0) = pt.x;
  frame.col(1) = pt.normal;
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(frame);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(N, N);

  ShapeOperator out;
  out.grad_norm = rho;
  out.tangent_basis = q.rightCols(N - 2);
  const double g = model.g();
  const double f = model.value(pt.x);
  Eigen::MatrixXd hess = model.field().hessian(pt.x);
  hess.diagonal().array() -= g * f;
  const double sign = pt.orientation >= 0 ? 1.0 : -1.0;
  out.matrix = -sign * (out.tangent_basis.transpose() * hess * out.tangent_basis) / rho;
  return out;
}

double arccot(double lambda) { return std::atan2(1.0, lambda); }

std::vector<Cluster> cluster_eigenvalues(std::span<const double> ascending) {
  std::vector<Cluster> out;
  if (ascending.empty()) return out;
  std::vector<double> gaps;
  for (std::size_t i = 1; i < ascending.size(); ++i) gaps.push_back(ascending[i] - ascending[i - 1]);
  std::vector<double> small;
  std::copy_if(gaps.begin(), gaps.end(), std::back_inserter(small), [](double d) { return d <= kClusterGapFloor; });
  double threshold = kClusterGapFloor;
  if (!small.empty()) {
    auto mid = small.begin() + static_cast<std::ptrdiff_t>(small.size() / 2);
    std::nth_element(small.begin(), mid, small.end());
    threshold = std::max(threshold, 10.0 * *mid);
  }

  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    double sum = 0.0;
    for (std::size_t k = start; k < end; ++k) sum += ascending[k];
    Cluster c;
    c.multiplicity = static_cast<int>(end - start);
    c.lambda = sum / c.multiplicity;
    c.theta = arccot(c.lambda);
    out.push_back(c);
    start = end;
  };
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    if (gaps[i] > threshold) flush(i + 1);
  }
  flush(ascending.size());
  std::sort(out.begin(), out.end(), [](const Cluster& a, const Cluster& b) { return a.theta < b.theta; });
  return out;
}

std::vector<Cluster> reverse_orientation(std::span<const Cluster> clusters) {
  std::vector<Cluster> out;
  out.reserve(clusters.size());
  for (auto it = clusters.rbegin(); it != clusters.rend(); ++it) {
    out.push_back({kPi - it->theta, it->multiplicity, -it->lambda});
  }
  return out;
}

double cartan_identity_residual(std::span<const Cluster> clusters) {
  double worst = 0.0;
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < clusters.size(); ++j) {
      if (j == i) continue;
      const double li = clusters[i].lambda, lj = clusters[j].lambda;
      sum += clusters[j].multiplicity * (1.0 + li * lj) / (li - lj);
    }
    worst = std::max(worst, std::abs(sum));
  }
  return worst;
}

double mean_curvature_formula(const LevelPoint& pt) {
  const FamilyModel& model = *pt.model;
  const Eigen::VectorXd& x = pt.x;
  const double g = model.g();
  const double n = model.n();
  const double f = model.value(x);
  const Eigen::VectorXd grad = model.field().gradient(x);
  const Eigen::VectorXd gs = grad - grad.dot(x) * x;
  const double rho = gs.norm();
  if (rho <= kFocalGradient) throw GeometryError("near focal set");
  // rho^2 extends to the homogeneous P = |grad F|^2 - g^2 F^2, and
  // grad P = 2 H grad F - 2 g^2 F grad F; grad^S V is tangent, so
  // <grad^S V, grad^S rho> = <grad^S V, grad P> / (2 rho).
  const Eigen::VectorXd grad_p = 2.0 * model.field().hessian(x) * grad - 2.0 * g * g * f * grad;
  const double cross = gs.dot(grad_p) / (2.0 * rho);
  const double lap = sphere_laplacian_value(model.field(), x);
  const double sign = pt.orientation >= 0 ? 1.0 : -1.0;
  return sign * (cross - rho * lap) / (n * rho * rho);
}

SpectrumReport spectrum(const LevelPoint& pt) {
  const FamilyModel& model = *pt.model;
  const ShapeOperator shape = shape_operator(pt);
  const Eigen::MatrixXd& A = shape.matrix;

  SpectrumReport report;
  report.point = pt;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw GeometryError("eigen-decomposition failed");
  const Eigen::VectorXd ev = solver.eigenvalues();
  report.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  report.clusters = cluster_eigenvalues(report.eigenvalues);
  const int g_obs = static_cast<int>(report.clusters.size());
  report.g_observed = g_obs;
  report.g_allowed = allowed_g(g_obs);

  double spacing = 0.0;
  for (int i = 0; i < g_obs; ++i) {
    const double expected = report.clusters[0].theta + i * kPi / g_obs;
    spacing = std::max(spacing, std::abs(report.clusters[static_cast<std::size_t>(i)].theta - expected));
  }
  double periodicity = 0.0;
  for (int i = 0; i < g_obs; ++i) {
    const auto j = static_cast<std::size_t>((i + 2) % g_obs);
    if (report.clusters[static_cast<std::size_t>(i)].multiplicity != report.clusters[j].multiplicity) {
      periodicity += 1.0;
    }
  }
  const double trace_mean = A.trace() / model.n();
  const double h = mean_curvature_formula(pt);
  const double g = model.g();
  const double v = model.value(pt.x);
  const double n = model.n();

  report.residuals["cartan_identity"] = cartan_identity_residual(report.clusters);
  report.residuals["theta_spacing"] = spacing;
  report.residuals["mult_periodicity"] = periodicity;
  report.residuals["mean_curvature"] = std::abs(trace_mean - h) / std::max(1.0, std::abs(h));
  report.residuals["beltrami_1"] =
      std::abs(sphere_grad_norm_sq_value(model.field(), pt.x) - g * g * (1.0 - v * v));
  report.residuals["beltrami_2"] =
      std::abs(sphere_laplacian_value(model.field(), pt.x) - (model.c_signed() - g * (n + g) * v));
  report.residuals["symmetry"] = (A - A.transpose()).cwiseAbs().maxCoeff();

  report.resolved_orientation = pt.orientation * model.laplacian_sign();
  report.resolved_clusters =
      report.resolved_orientation == pt.orientation ? report.clusters : reverse_orientation(report.clusters);

  // With xi = +grad^S V the first angle is acos(V)/g; the other orientation
  // reverses the list.
  const int g_int = model.g();
  double theta_level = std::numeric_limits<double>::infinity();
  double mult_law = std::numeric_limits<double>::infinity();
  if (g_obs == g_int) {
    std::vector<Cluster> expected;
    for (int i = 0; i < g_int; ++i) {
      const double theta = std::acos(std::clamp(v, -1.0, 1.0)) / g + i * kPi / g;
      expected.push_back({theta, 0, 1.0 / std::tan(theta)});
    }
    if (pt.orientation < 0) expected = reverse_orientation(expected);
    theta_level = 0.0;
    mult_law = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      theta_level = std::max(theta_level, std::abs(report.clusters[i].theta - expected[i].theta));
      if (report.resolved_clusters[i].multiplicity != model.spec().multiplicity(static_cast<int>(i) + 1)) {
        mult_law += 1.0;
      }
    }
  }
  report.residuals["theta_level"] = theta_level;
  report.residuals["multiplicity_law"] = mult_law;
  return report;
}

}  // namespace isopar
