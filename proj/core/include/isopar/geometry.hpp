#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "isopar/families.hpp"
#include "isopar/polynomial.hpp"

namespace isopar {

/// Numerical failure in the floating-point geometry layer (non-convergence,
/// focal-set degeneracy, inadmissible parameters).
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultSeed = 20240917;

/// A family with its polynomial lowered to floating point.
class FamilyModel {
 public:
  explicit FamilyModel(FamilySpec spec);

  const FamilySpec& spec() const { return spec_; }
  const PolyField& field() const { return field_; }
  int g() const { return spec_.g; }
  int n() const { return spec_.n(); }
  int dim() const { return spec_.ambient_dim; }
  /// sigma with Delta F = sigma * c r^{g-2} (exact check at construction).
  int laplacian_sign() const { return laplacian_sign_; }
  /// sigma * c as a double, the constant in Delta^S V = c - g(n+g) V.
  double c_signed() const { return c_signed_; }

  double value(const Eigen::VectorXd& x) const { return field_.value(x); }
  /// grad^S V at a unit vector x: the tangential part of grad^E F.
  Eigen::VectorXd sphere_gradient(const Eigen::VectorXd& x) const;
  /// Unit normal sigma * grad^S V / |grad^S V| at the projection of y onto
  /// the sphere. Throws GeometryError on the focal set.
  Eigen::VectorXd unit_normal(const Eigen::VectorXd& y, int orientation = 1) const;

 private:
  FamilySpec spec_;
  PolyField field_;
  int laplacian_sign_;
  double c_signed_;
};

using FamilyModelPtr = std::shared_ptr<const FamilyModel>;

FamilyModelPtr make_model(FamilySpec spec);

/// Uniform sampling on spheres via normalized Gaussian draws.
class SphereSampler {
 public:
  explicit SphereSampler(std::uint64_t seed = kDefaultSeed) : rng_(seed) {}

  Eigen::VectorXd point(int dim);
  double uniform(double lo, double hi);

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// A point on the level hypersurface V^{-1}(level) with its unit normal.
struct LevelPoint {
  FamilyModelPtr model;
  Eigen::VectorXd x;
  double level = 0.0;
  /// xi = orientation * grad^S V / |grad^S V|
  Eigen::VectorXd normal;
  int orientation = 1;

  /// The same point with the opposite unit normal.
  LevelPoint flipped() const;
};

/// Builds a LevelPoint at an existing sphere point (no projection).
LevelPoint level_point_at(FamilyModelPtr model, const Eigen::VectorXd& x, int orientation = 1);

struct ProjectionOptions {
  double tolerance = 1e-12;
  int max_iterations = 200;
};

/// Moves x0 (normalized first) along great-circle Newton steps in the
/// direction of grad^S V until |V - s| <= tolerance. Requires -1 < s < 1.
/// Throws GeometryError on non-convergence or when x0 lies on the focal set.
LevelPoint project_to_level(FamilyModelPtr model, const Eigen::VectorXd& x0, double s,
                            const ProjectionOptions& options = {});

struct ShapeOperator {
  /// Symmetric n x n matrix in the basis `tangent_basis`.
  Eigen::MatrixXd matrix;
  /// (n+2) x n orthonormal basis of {x, xi}^perp.
  Eigen::MatrixXd tangent_basis;
  double grad_norm = 0.0;
};

/// <A X, Y> = -Hess^S V(X, Y) / |grad^S V| with
/// Hess^S V(X, Y) = Hess^E F(X, Y) - g F <X, Y> for sphere-tangent X, Y.
/// Throws GeometryError("near focal set") when |grad^S V| <= 1e-8.
ShapeOperator shape_operator(const LevelPoint& pt);

/// One principal curvature lambda = cot(theta) with its multiplicity.
struct Cluster {
  double theta = 0.0;
  int multiplicity = 0;
  double lambda = 0.0;
};

/// Groups ascending eigenvalues: a gap splits two clusters when it exceeds
/// max(1e-4, 10 * median of the gaps below 1e-4). Clusters are returned in
/// increasing theta, i.e. decreasing lambda.
std::vector<Cluster> cluster_eigenvalues(std::span<const double> ascending);

/// theta in (0, pi) with cot(theta) = lambda.
double arccot(double lambda);

/// max_i | sum_{j != i} m_j (1 + l_i l_j) / (l_i - l_j) |
double cartan_identity_residual(std::span<const Cluster> clusters);

/// Mean curvature of the level hypersurface through pt from spherical
/// gradient data: h = (<grad V, grad rho> - rho Delta V) / (n rho^2),
/// rho = |grad^S V|, with the sign of pt's orientation.
double mean_curvature_formula(const LevelPoint& pt);

struct SpectrumReport {
  LevelPoint point;
  /// Ascending eigenvalues of the shape operator.
  std::vector<double> eigenvalues;
  /// Increasing theta.
  std::vector<Cluster> clusters;
  int g_observed = 0;
  /// g_observed in {1, 2, 3, 4, 6}.
  bool g_allowed = false;
  /// cartan_identity, theta_spacing, mult_periodicity, mean_curvature,
  /// beltrami_1, beltrami_2, symmetry, plus theta_level (theta_1 against
  /// acos(V)/g) and multiplicity_law (resolved multiplicities against the
  /// family; a mismatch count). The last two are infinite when g_observed
  /// differs from the family's g.
  std::map<std::string, double> residuals;
  /// Clusters under the orientation matching the family's multiplicity
  /// labeling (the laplacian sign); equals `clusters` when that sign is +1.
  std::vector<Cluster> resolved_clusters;
  int resolved_orientation = 1;
};

SpectrumReport spectrum(const LevelPoint& pt);

/// Clusters seen from the opposite normal: theta -> pi - theta, order reversed.
std::vector<Cluster> reverse_orientation(std::span<const Cluster> clusters);

}  // namespace isopar
