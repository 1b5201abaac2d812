#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "isopar/geometry.hpp"

namespace isopar {

/// f_t(x) = cos t x + sin t xi(x): the point at oriented distance t along
/// the normal great circle.
Eigen::VectorXd parallel_point(const LevelPoint& pt, double t);

/// Unit normal -sin t x + cos t xi(x) transported to f_t(x).
Eigen::VectorXd parallel_normal(const LevelPoint& pt, double t);

/// Spectrum of the parallel hypersurface through f_t(x) (normal transported
/// as above) compared with cot(theta_i - t), multiplicities preserved.
/// Returns the largest eigenvalue discrepancy. Throws GeometryError unless
/// t stays at least 0.05 away from every theta_i modulo pi.
double parallel_spectrum_check(const LevelPoint& pt, double t);

/// `count` values of t in (0, pi) on the grid (j + 1/2) pi / (2 count),
/// skipping those within 0.05 of a theta_i modulo pi. Throws GeometryError
/// if the grid runs out.
std::vector<double> admissible_parallel_times(const SpectrumReport& report, int count);

struct FocalReport {
  Eigen::VectorXd base;
  /// 1-based principal-curvature index.
  int cluster = 0;
  /// theta_i of that cluster; the focal map is f_t at t = theta_i.
  double t = 0.0;
  Eigen::VectorXd focal_point;
  /// V at the focal point (+1 or -1).
  double focal_value = 0.0;
  std::vector<double> singular_values;
  int rank_observed = 0;
  /// n - m_i
  int rank_expected = 0;
  /// eta = h(x) = -sin t x + cos t xi
  Eigen::VectorXd normal;
  /// Ascending eigenvalues of A_eta on the focal submanifold.
  std::vector<double> shape_eigenvalues;
  /// cot(theta_j - theta_i) with multiplicities m_j, j != i, ascending.
  std::vector<double> expected_eigenvalues;
  double eigenvalue_residual = 0.0;
  double trace = 0.0;
  double asymmetry = 0.0;
};

struct FocalOptions {
  /// Central-difference step for the focal differential and d eta.
  double step = 1e-5;
  /// Singular values below rank_threshold * max(1, largest) count as zero.
  double rank_threshold = 1e-7;
  /// +1 uses eta = h(x); -1 uses -eta (A_{-eta} = -A_eta).
  int normal_sign = 1;
};

/// Focal map f_{theta_i} at pt: rank of its differential (by finite
/// differences), normal eta, and the shape operator A_eta of the focal
/// submanifold from finite differences of eta along the non-degenerate
/// directions. Throws std::out_of_range for a bad cluster index.
FocalReport focal_map(const LevelPoint& pt, int cluster, const FocalOptions& options = {});

struct FocalIdentityReport {
  int base_points = 0;
  int circle_samples = 0;
  /// max |V(f_t(x)) - cos(g(tau0 - t))|
  double max_scalar_residual = 0.0;
  double mean_scalar_residual = 0.0;
  /// Circles whose focal-parameter count differs from 2g.
  int count_mismatches = 0;
  /// Circles where V at consecutive focal parameters does not alternate
  /// between +1 and -1 (to 1e-8).
  int alternation_failures = 0;
  /// max | (t_{k+1} - t_k) - pi/g |
  double max_spacing_residual = 0.0;
  /// max | t_1 - tau0 | for the first focal parameter after t = 0.
  double max_offset_residual = 0.0;
  std::uint64_t seed = kDefaultSeed;
};

struct FocalIdentityOptions {
  std::uint64_t seed = kDefaultSeed;
  /// Random t values per base point.
  int t_per_point = 10;
  /// Grid points per full circle for locating focal parameters, times g.
  int grid_per_g = 96;
};

/// Muenzner's scalar law along normal circles and the focal-point count,
/// over `samples` random base points on random levels in [-0.9, 0.9].
FocalIdentityReport focal_identity_checks(FamilyModelPtr model, int samples,
                                          const FocalIdentityOptions& options = {});

/// Focal parameters t in [0, 2 pi) along the normal circle of pt (zeros of
/// d/dt V(f_t(x))), ascending.
std::vector<double> focal_parameters(const LevelPoint& pt, int grid_points);

struct FlowOptions {
  double step = 1e-3;
  /// Minimum angular distance to the focal set along the flow.
  double focal_margin = 0.05;
};

/// Integrates x' = xi(x) (classical RK4, renormalized each step) for the
/// given arc length and returns the largest distance from the great circle
/// through (x0, xi0). Throws GeometryError if the flow comes within the
/// focal margin.
double gradient_flow_geodesy(const LevelPoint& pt, double arc, const FlowOptions& options = {});

}  // namespace isopar
