#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "isopar/focal.hpp"
#include "isopar/geometry.hpp"
#include "oracles.hpp"

using namespace isopar;

namespace {

constexpr double kPi = std::numbers::pi;

LevelPoint sample(const FamilyModelPtr& model, double s, std::uint64_t seed) {
  SphereSampler rng(seed);
  return project_to_level(model, rng.point(model->dim()), s);
}

void check_clusters(const std::vector<Cluster>& got, const std::vector<std::pair<double, int>>& expected) {
  REQUIRE(got.size() == expected.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i].theta == doctest::Approx(expected[i].first).epsilon(1e-9));
    CHECK(got[i].multiplicity == expected[i].second);
  }
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("projection onto a level set") {
    const auto model = make_model(family_g2(1, 1));
    const Eigen::Vector4d x0(1.0, 0.0, 1e-3, 0.0);
    const LevelPoint pt = project_to_level(model, x0, 0.0);
    CHECK(std::abs(model->value(pt.x)) <= 1e-10);
    CHECK(pt.x.head(2).squaredNorm() == doctest::Approx(0.5));
    CHECK(pt.x.tail(2).squaredNorm() == doctest::Approx(0.5));
    CHECK(pt.x.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(pt.normal.dot(pt.x) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(pt.normal.norm() == doctest::Approx(1.0));

    const LevelPoint again = project_to_level(model, pt.x, pt.level);
    CHECK(again.x == pt.x);

    CHECK_THROWS_AS(project_to_level(model, x0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(project_to_level(model, Eigen::Vector4d::Zero(), 0.0), std::invalid_argument);
    CHECK_THROWS_WITH_AS(project_to_level(model, Eigen::Vector4d(1, 0, 0, 0), 0.0), "started at focal set",
                         GeometryError);
  }

  TEST_CASE("g = 3, m = 1 projections from 100 seeds") {
    const auto model = make_model(family_g3(AlgebraKind::Real));
    SphereSampler rng;
    for (int k = 0; k < 100; ++k) {
      const LevelPoint pt = project_to_level(model, rng.point(5), 0.0);
      CHECK(std::abs(model->value(pt.x)) < 1e-10);
    }
  }

  TEST_CASE("shape operator spectra at level 0") {
    const auto g1 = sample(make_model(family_g1(2)), 0.0, 1);
    CHECK(shape_operator(g1).matrix.cwiseAbs().maxCoeff() < 1e-12);

    const auto g2 = spectrum(sample(make_model(family_g2(2, 2)), 0.0, 2));
    CHECK(g2.eigenvalues.front() == doctest::Approx(-1.0));
    CHECK(g2.eigenvalues.back() == doctest::Approx(1.0));

    const auto g3 = spectrum(sample(make_model(family_g3(AlgebraKind::Real)), 0.0, 3));
    REQUIRE(g3.eigenvalues.size() == 3);
    CHECK(g3.eigenvalues[0] == doctest::Approx(-std::sqrt(3.0)));
    CHECK(g3.eigenvalues[1] == doctest::Approx(0.0).scale(1.0));
    CHECK(g3.eigenvalues[2] == doctest::Approx(std::sqrt(3.0)));
    check_clusters(g3.clusters, {{kPi / 6, 1}, {kPi / 2, 1}, {5 * kPi / 6, 1}});
  }

  TEST_CASE("g = 3, m = 2 at level 0") {
    const auto sp = spectrum(sample(make_model(family_g3(AlgebraKind::Complex)), 0.0, 4));
    check_clusters(sp.clusters, {{kPi / 6, 2}, {kPi / 2, 2}, {5 * kPi / 6, 2}});
    for (const auto& [name, r] : sp.residuals) {
      CAPTURE(name);
      CHECK(r < 1e-8);
    }
    CHECK(sp.g_allowed);
  }

  TEST_CASE("g2(1,2) at s = cos(pi/4): angles pi/8 and 5pi/8") {
    const auto sp = spectrum(sample(make_model(family_g2(1, 2)), std::cos(kPi / 4), 5));
    // xi = +grad^S V sees the q-sphere directions first.
    check_clusters(sp.clusters, {{kPi / 8, 2}, {5 * kPi / 8, 1}});
    CHECK(sp.resolved_orientation == -1);
    check_clusters(sp.resolved_clusters, {{3 * kPi / 8, 1}, {7 * kPi / 8, 2}});
  }

  TEST_CASE("opposite orientation reverses the spectrum") {
    const auto pt = sample(make_model(family_g3(AlgebraKind::Real)), 0.3, 6);
    const auto a = spectrum(pt), b = spectrum(pt.flipped());
    const auto r = reverse_orientation(a.clusters);
    REQUIRE(r.size() == b.clusters.size());
    for (std::size_t i = 0; i < r.size(); ++i) CHECK(r[i].theta == doctest::Approx(b.clusters[i].theta));
  }

  TEST_CASE("spherical Hessian against finite differences") {
    for (const auto& family : catalog()) {
      CAPTURE(family.name);
      const auto model = make_model(family);
      const LevelPoint pt = sample(model, 0.2, 7);
      const ShapeOperator S = shape_operator(pt);
      const auto V = [&](const Eigen::VectorXd& y) { return model->value(y); };
      const Eigen::MatrixXd fd = oracle::spherical_hessian_fd(V, pt.x, S.tangent_basis, 1e-4);
      const Eigen::MatrixXd analytic = -S.matrix * S.grad_norm * pt.orientation;
      CHECK((fd - analytic).cwiseAbs().maxCoeff() < 1e-6);
    }
  }

  TEST_CASE("sphere gradient norm against finite differences") {
    SphereSampler rng(8);
    for (const auto& family : catalog()) {
      CAPTURE(family.name);
      const auto model = make_model(family);
      const Eigen::VectorXd x = rng.point(model->dim());
      const auto V = [&](const Eigen::VectorXd& y) { return model->value(y); };
      const double fd = oracle::sphere_grad_norm_sq_fd(V, x, oracle::tangent_frame(x), 1e-5);
      const double analytic = sphere_grad_norm_sq_value(model->field(), x);
      CHECK(std::abs(fd - analytic) <= 1e-6 * std::max(1.0, analytic));
    }
  }

  TEST_CASE("eigenvalue clustering") {
    const std::vector<double> ev{-1.0, -1.0 + 1e-12, 0.5, 0.5, 0.5 + 3e-13};
    const auto c = cluster_eigenvalues(ev);
    REQUIRE(c.size() == 2);
    CHECK(c[0].multiplicity == 3);
    CHECK(c[0].lambda == doctest::Approx(0.5));
    CHECK(c[1].multiplicity == 2);
    CHECK(cluster_eigenvalues(std::vector<double>{}).empty());
    CHECK(cluster_eigenvalues(std::vector<double>{0.0, 1e-3}).size() == 2);
    CHECK(arccot(0.0) == doctest::Approx(kPi / 2));
    CHECK(arccot(1.0) == doctest::Approx(kPi / 4));
    CHECK(arccot(-1.0) == doctest::Approx(3 * kPi / 4));
  }

  TEST_CASE("Cartan identity cancels analytically for g = 3") {
    const double r3 = std::sqrt(3.0);
    const std::vector<Cluster> c{{kPi / 6, 4, r3}, {kPi / 2, 4, 0.0}, {5 * kPi / 6, 4, -r3}};
    CHECK(cartan_identity_residual(c) < 1e-14);
    const std::vector<Cluster> bad{{kPi / 6, 1, r3}, {kPi / 3, 1, 1 / r3}};
    CHECK(cartan_identity_residual(bad) > 0.1);
  }

  TEST_CASE("mean curvature formula equals the trace") {
    for (const auto& family : catalog()) {
      CAPTURE(family.name);
      const auto model = make_model(family);
      for (double s : {-0.6, 0.1, 0.8}) {
        const auto pt = sample(model, s, 9);
        const double h = mean_curvature_formula(pt);
        CHECK(shape_operator(pt).matrix.trace() / model->n() == doctest::Approx(h).epsilon(1e-9).scale(1.0));
      }
    }
  }

  TEST_CASE("spectrum is constant along a level set") {
    const auto model = make_model(family_g3(AlgebraKind::Quaternion));
    SphereSampler rng(10);
    const auto ref = spectrum(project_to_level(model, rng.point(model->dim()), -0.4)).clusters;
    for (int k = 0; k < 20; ++k) {
      const auto c = spectrum(project_to_level(model, rng.point(model->dim()), -0.4)).clusters;
      REQUIRE(c.size() == ref.size());
      for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::abs(c[i].theta - ref[i].theta) < 1e-7);
    }
  }
}

TEST_SUITE("focal") {
  TEST_CASE("parallel points") {
    const auto pt = sample(make_model(family_g3(AlgebraKind::Real)), 0.0, 11);
    CHECK((parallel_point(pt, 0.0) - pt.x).norm() < 1e-15);
    CHECK((parallel_point(pt, 2 * kPi) - pt.x).norm() < 1e-14);
    CHECK(parallel_point(pt, 0.7).norm() == doctest::Approx(1.0));
    // tau0 = pi/(2g) at level 0
    const auto g2 = sample(make_model(family_g2(1, 1)), 0.0, 12);
    CHECK(g2.model->value(parallel_point(g2, kPi / 4)) == doctest::Approx(std::cos(2 * (kPi / 4 - kPi / 4))));
  }

  TEST_CASE("parallel curvature law") {
    const auto g3 = sample(make_model(family_g3(AlgebraKind::Real)), 0.0, 13);
    CHECK(parallel_spectrum_check(g3, 0.0) < 1e-12);
    CHECK(parallel_spectrum_check(g3, kPi / 12) < 1e-8);
    const auto g2 = sample(make_model(family_g2(1, 2)), 0.0, 14);
    CHECK(parallel_spectrum_check(g2, kPi / 8) < 1e-8);
    CHECK_THROWS_AS(parallel_spectrum_check(g3, kPi / 6 + 0.01), GeometryError);
    CHECK_THROWS_AS(parallel_spectrum_check(g3, kPi / 6 + kPi), GeometryError);
  }

  TEST_CASE("admissible parallel times") {
    const auto sp = spectrum(sample(make_model(family_g3(AlgebraKind::Complex)), 0.0, 15));
    const auto ts = admissible_parallel_times(sp, 10);
    REQUIRE(ts.size() == 10);
    for (double t : ts) {
      for (const auto& c : sp.clusters) CHECK(std::abs(std::remainder(t - c.theta, kPi)) >= 0.05);
    }
  }

  TEST_CASE("focal map of the real cubic") {
    const auto pt = sample(make_model(family_g3(AlgebraKind::Real)), 0.0, 16);
    const FocalReport f = focal_map(pt, 1);
    CHECK(f.rank_observed == 2);
    CHECK(f.rank_expected == 2);
    REQUIRE(f.shape_eigenvalues.size() == 2);
    CHECK(f.shape_eigenvalues[0] == doctest::Approx(-1 / std::sqrt(3.0)).epsilon(1e-5));
    CHECK(f.shape_eigenvalues[1] == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-5));
    CHECK(std::abs(f.trace) < 1e-6);
    CHECK(f.focal_value == doctest::Approx(1.0));
    FocalOptions neg;
    neg.normal_sign = -1;
    const FocalReport g = focal_map(pt, 1, neg);
    CHECK(g.trace == doctest::Approx(-f.trace).scale(1.0).epsilon(1e-6));
    CHECK(g.eigenvalue_residual < 1e-5);
    CHECK_THROWS_AS(focal_map(pt, 0), std::out_of_range);
    CHECK_THROWS_AS(focal_map(pt, 4), std::out_of_range);
  }

  TEST_CASE("g = 2 focal points lie on a great sphere") {
    const int p = 2, q = 2;
    const auto pt = sample(make_model(family_g2(p, q)), 0.3, 17);
    for (int i = 1; i <= 2; ++i) {
      const FocalReport f = focal_map(pt, i);
      const double first = f.focal_point.head(p + 1).squaredNorm();
      CHECK((first == doctest::Approx(1.0) || first == doctest::Approx(0.0).scale(1.0)));
      CHECK(f.rank_observed == f.rank_expected);
    }
  }

  TEST_CASE("g = 1 focal map collapses") {
    const auto pt = sample(make_model(family_g1(3)), 0.4, 18);
    const FocalReport f = focal_map(pt, 1);
    CHECK(f.rank_observed == 0);
    CHECK(f.rank_expected == 0);
    CHECK(std::abs(f.focal_value - 1.0) < 1e-12);
  }

  TEST_CASE("focal parameters along normal circles") {
    const auto g1 = sample(make_model(family_g1(2)), 0.5, 19);
    CHECK(focal_parameters(g1, 96).size() == 2);
    const auto g3 = sample(make_model(family_g3(AlgebraKind::Real)), -0.2, 20);
    const auto t = focal_parameters(g3, 288);
    REQUIRE(t.size() == 6);
    for (std::size_t k = 0; k < 6; ++k) {
      CHECK(g3.model->value(parallel_point(g3, t[k])) == doctest::Approx(k % 2 == 0 ? 1.0 : -1.0));
      if (k + 1 < 6) CHECK(t[k + 1] - t[k] == doctest::Approx(kPi / 3));
    }
    const auto report = focal_identity_checks(make_model(family_g2(1, 2)), 20);
    CHECK(report.count_mismatches == 0);
    CHECK(report.alternation_failures == 0);
    CHECK(report.max_scalar_residual < 1e-9);
  }

  TEST_CASE("gradient flow follows great circles") {
    const auto g1 = sample(make_model(family_g1(2)), 0.0, 21);
    CHECK(gradient_flow_geodesy(g1, kPi / 4) < 1e-9);
    const auto g3 = sample(make_model(family_g3(AlgebraKind::Real)), 0.0, 22);
    const double a = gradient_flow_geodesy(g3, kPi / 8);
    CHECK(a < 1e-6);
    CHECK(gradient_flow_geodesy(g3.flipped(), kPi / 8) < 1e-6);
    CHECK_THROWS_AS(gradient_flow_geodesy(g3, kPi / 6), GeometryError);
    CHECK_THROWS_AS(gradient_flow_geodesy(g3, -1.0), std::invalid_argument);
  }
}
