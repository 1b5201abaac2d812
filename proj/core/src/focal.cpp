#include "isopar/focal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace isopar {
namespace {

constexpr double kPi = std::numbers::pi;

// Angular distance from a to the nearest point of b + pi Z.
double distance_mod_pi(double a, double b) { return std::abs(std::remainder(a - b, kPi)); }

std::vector<double> expand(const std::vector<std::pair<double, int>>& values) {
  std::vector<double> out;
  for (const auto& [v, m] : values) out.insert(out.end(), static_cast<std::size_t>(m), v);
  std::sort(out.begin(), out.end());
  return out;
}

double max_abs_difference(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

// Signed rate dV/dt along the normal circle; vanishes exactly at focal points.
double circle_rate(const FamilyModel& model, const LevelPoint& pt, double t) {
  const Eigen::VectorXd y = std::cos(t) * pt.x + std::sin(t) * pt.normal;
  const Eigen::VectorXd dy = -std::sin(t) * pt.x + std::cos(t) * pt.normal;
  return model.field().gradient(y).dot(dy);
}

}  // namespace

Eigen::VectorXd parallel_point(const LevelPoint& pt, double t) {
  return std::cos(t) * pt.x + std::sin(t) * pt.normal;
}

Eigen::VectorXd parallel_normal(const LevelPoint& pt, double t) {
  return -std::sin(t) * pt.x + std::cos(t) * pt.normal;
}

double parallel_spectrum_check(const LevelPoint& pt, double t) {
  const SpectrumReport base = spectrum(pt);
  for (const auto& c : base.clusters) {
    if (distance_mod_pi(t, c.theta) < 0.05) {
      throw GeometryError("t = " + std::to_string(t) + " is within 0.05 of the focal angle " +
                          std::to_string(c.theta));
    }
  }
  const FamilyModel& model = *pt.model;
  const Eigen::VectorXd y = parallel_point(pt, t).normalized();
  const Eigen::VectorXd transported = parallel_normal(pt, t);
  const int orientation = model.sphere_gradient(y).dot(transported) >= 0.0 ? 1 : -1;
  const LevelPoint moved = level_point_at(pt.model, y, orientation);
  const SpectrumReport observed = spectrum(moved);

  std::vector<std::pair<double, int>> expected;
  for (const auto& c : base.clusters) expected.emplace_back(1.0 / std::tan(c.theta - t), c.multiplicity);
  return max_abs_difference(expand(expected), observed.eigenvalues);
}

std::vector<double> admissible_parallel_times(const SpectrumReport& report, int count) {
  std::vector<double> out;
  const int grid = 2 * count;
  for (int j = 0; j < grid && static_cast<int>(out.size()) < count; ++j) {
    const double t = (j + 0.5) * kPi / grid;
    const bool clear = std::none_of(report.clusters.begin(), report.clusters.end(),
                                    [&](const Cluster& c) { return distance_mod_pi(t, c.theta) < 0.05; });
    if (clear) out.push_back(t);
  }
  if (static_cast<int>(out.size()) < count) throw GeometryError("not enough admissible parallel times");
  return out;
}

FocalReport focal_map(const LevelPoint& pt, int cluster, const FocalOptions& options) {
  const SpectrumReport sp = spectrum(pt);
  if (cluster < 1 || cluster > static_cast<int>(sp.clusters.size())) {
    throw std::out_of_range("cluster index " + std::to_string(cluster) + " outside 1.." +
                            std::to_string(sp.clusters.size()));
  }
  const FamilyModel& model = *pt.model;
  const auto ci = static_cast<std::size_t>(cluster - 1);
  const double t = sp.clusters[ci].theta;
  const double ct = std::cos(t), st = std::sin(t);
  const ShapeOperator shape = shape_operator(pt);
  const Eigen::MatrixXd& E = shape.tangent_basis;
  const Eigen::Index N = E.rows(), n = E.cols();
  const double h = options.step;
  const double eta_sign = options.normal_sign >= 0 ? 1.0 : -1.0;

  auto focal = [&](const Eigen::VectorXd& y) {
    const Eigen::VectorXd x = y.normalized();
    return Eigen::VectorXd(ct * x + st * model.unit_normal(x, pt.orientation));
  };
  auto eta = [&](const Eigen::VectorXd& y) {
    const Eigen::VectorXd x = y.normalized();
    return Eigen::VectorXd(eta_sign * (-st * x + ct * model.unit_normal(x, pt.orientation)));
  };

  Eigen::MatrixXd J(N, n), dEta(N, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::VectorXd plus = pt.x + h * E.col(k);
    const Eigen::VectorXd minus = pt.x - h * E.col(k);
    J.col(k) = (focal(plus) - focal(minus)) / (2.0 * h);
    dEta.col(k) = (eta(plus) - eta(minus)) / (2.0 * h);
  }

  FocalReport report;
  report.base = pt.x;
  report.cluster = cluster;
  report.t = t;
  report.focal_point = focal(pt.x);
  report.focal_value = model.value(report.focal_point);
  report.normal = eta(pt.x);
  report.rank_expected = static_cast<int>(n) - sp.clusters[ci].multiplicity;

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  report.singular_values.assign(sv.data(), sv.data() + sv.size());
  // f_t is O(1)-Lipschitz, so scale the threshold by at least 1; a fully
  // collapsed differential (g = 1) would otherwise count noise as rank.
  const double largest = std::max(1.0, sv.size() > 0 ? sv[0] : 0.0);
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv[k] > options.rank_threshold * largest) ++rank;
  }
  report.rank_observed = rank;

  // On the image directions u_k = J v_k / s_k:  A_eta u_k = -(d eta along v_k)^T / s_k.
  if (rank > 0) {
    const Eigen::MatrixXd U = svd.matrixU().leftCols(rank);
    const Eigen::MatrixXd V = svd.matrixV().leftCols(rank);
    const Eigen::VectorXd inv = sv.head(rank).cwiseInverse();
    const Eigen::MatrixXd S = -(U.transpose() * dEta * V) * inv.asDiagonal();
    report.asymmetry = (S - S.transpose()).cwiseAbs().maxCoeff();
    const Eigen::MatrixXd sym = 0.5 * (S + S.transpose());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = solver.eigenvalues();
    report.shape_eigenvalues.assign(ev.data(), ev.data() + ev.size());
    report.trace = sym.trace();
  }

  std::vector<std::pair<double, int>> expected;
  for (std::size_t j = 0; j < sp.clusters.size(); ++j) {
    if (j == ci) continue;
    expected.emplace_back(eta_sign / std::tan(sp.clusters[j].theta - t), sp.clusters[j].multiplicity);
  }
  report.expected_eigenvalues = expand(expected);
  report.eigenvalue_residual = max_abs_difference(report.shape_eigenvalues, report.expected_eigenvalues);
  return report;
}

std::vector<double> focal_parameters(const LevelPoint& pt, int grid_points) {
  const FamilyModel& model = *pt.model;
  const int K = std::max(grid_points, 8);
  const double dt = 2.0 * kPi / K;
  std::vector<double> roots;
  double prev_t = 0.0;
  double prev = circle_rate(model, pt, 0.0);
  for (int k = 1; k <= K; ++k) {
    const double t = k * dt;
    const double cur = circle_rate(model, pt, t);
    if ((prev < 0.0 && cur >= 0.0) || (prev > 0.0 && cur <= 0.0)) {
      double lo = prev_t, hi = t, flo = prev;
      for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = circle_rate(model, pt, mid);
        if ((fm < 0.0) == (flo < 0.0) && fm != 0.0) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(std::fmod(0.5 * (lo + hi), 2.0 * kPi));
    }
    if (cur != 0.0) {
      prev = cur;
      prev_t = t;
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

FocalIdentityReport focal_identity_checks(FamilyModelPtr model, int samples, const FocalIdentityOptions& options) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  FocalIdentityReport report;
  report.seed = options.seed;
  SphereSampler rng(options.seed);
  const double g = model->g();
  const int focal_count = 2 * model->g();
  double residual_sum = 0.0;

  for (int b = 0; b < samples; ++b) {
    LevelPoint pt;
    for (int attempt = 0;; ++attempt) {
      const Eigen::VectorXd x0 = rng.point(model->dim());
      const double s = rng.uniform(-0.9, 0.9);
      try {
        pt = project_to_level(model, x0, s);
        break;
      } catch (const GeometryError&) {
        if (attempt >= 10) throw;
      }
    }
    ++report.base_points;
    const double tau0 = std::acos(std::clamp(model->value(pt.x), -1.0, 1.0)) / g;

    for (int k = 0; k < options.t_per_point; ++k) {
      const double t = rng.uniform(0.0, 2.0 * kPi);
      const double r = std::abs(model->value(parallel_point(pt, t)) - std::cos(g * (tau0 - t)));
      report.max_scalar_residual = std::max(report.max_scalar_residual, r);
      residual_sum += r;
      ++report.circle_samples;
    }

    const std::vector<double> roots = focal_parameters(pt, options.grid_per_g * model->g());
    if (static_cast<int>(roots.size()) != focal_count) {
      ++report.count_mismatches;
      continue;
    }
    bool alternates = true;
    for (std::size_t k = 0; k < roots.size(); ++k) {
      const double v = model->value(parallel_point(pt, roots[k]));
      const double expected_sign = (k % 2 == 0) ? 1.0 : -1.0;
      if (std::abs(v - expected_sign) > 1e-8) alternates = false;
      const double next = k + 1 < roots.size() ? roots[k + 1] : roots[0] + 2.0 * kPi;
      report.max_spacing_residual = std::max(report.max_spacing_residual, std::abs(next - roots[k] - kPi / g));
    }
    if (!alternates) ++report.alternation_failures;
    report.max_offset_residual = std::max(report.max_offset_residual, std::abs(roots[0] - tau0));
  }
  report.mean_scalar_residual = report.circle_samples > 0 ? residual_sum / report.circle_samples : 0.0;
  return report;
}

double gradient_flow_geodesy(const LevelPoint& pt, double arc, const FlowOptions& options) {
  if (arc < 0.0) throw std::invalid_argument("arc must be non-negative");
  const FamilyModel& model = *pt.model;
  const double g = model.g();
  const int steps = std::max(1, static_cast<int>(std::ceil(arc / options.step)));
  const double h = arc / steps;
  const Eigen::VectorXd x0 = pt.x;
  const Eigen::VectorXd xi0 = pt.normal;

  auto field = [&](const Eigen::VectorXd& y) { return model.unit_normal(y, pt.orientation); };
  auto check_margin = [&](const Eigen::VectorXd& y, double reached) {
    // Along +xi, V = cos(g tau) climbs to +1 after tau = acos(V)/g.
    const double tau = std::acos(std::clamp(model.value(y), -1.0, 1.0)) / g;
    const double remaining = pt.orientation >= 0 ? tau : kPi / g - tau;
    if (remaining < options.focal_margin) {
      throw GeometryError("gradient flow entered the focal neighborhood after arc " + std::to_string(reached));
    }
  };

  Eigen::VectorXd x = x0;
  double deviation = 0.0;
  check_margin(x, 0.0);
  for (int k = 0; k < steps; ++k) {
    const Eigen::VectorXd k1 = field(x);
    const Eigen::VectorXd k2 = field(x + 0.5 * h * k1);
    const Eigen::VectorXd k3 = field(x + 0.5 * h * k2);
    const Eigen::VectorXd k4 = field(x + h * k3);
    x = (x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)).normalized();
    check_margin(x, (k + 1) * h);
    const Eigen::VectorXd off_plane = x - x0.dot(x) * x0 - xi0.dot(x) * xi0;
    deviation = std::max(deviation, off_plane.norm());
  }
  return deviation;
}

}  // namespace isopar
