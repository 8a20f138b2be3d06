#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "staticmass/errors.hpp"
#include "staticmass/reference_geometry.hpp"

using namespace staticmass;

TEST(ReferenceSpace, Defaults) {
  const ReferenceSpace sphere(1, 3);
  EXPECT_NEAR(sphere.cross_section_volume(), 4 * std::numbers::pi, 1e-14);
  EXPECT_EQ(sphere.cosmological_constant(), -3.0);
  const ReferenceSpace torus(0, 4);
  EXPECT_EQ(torus.cross_section_volume(), 1.0);
  const ReferenceSpace hyperbolic(-1, 3);
  EXPECT_NEAR(hyperbolic.cross_section_volume(), 4 * std::numbers::pi, 1e-14);
  EXPECT_GT(hyperbolic.r_min(), 1.0);
}

TEST(ReferenceSpace, RejectsInvalidInput) {
  EXPECT_THROW(ReferenceSpace(2, 3), DomainError);
  EXPECT_THROW(ReferenceSpace(1, 2), DomainError);
  EXPECT_THROW(ReferenceSpace(1, 3, 1.0), DomainError);
  EXPECT_THROW(ReferenceSpace(0, 3, -1.0), DomainError);
  const ReferenceSpace hyperbolic(-1, 3);
  EXPECT_THROW(hyperbolic.require_radius(0.5), DomainError);
  EXPECT_NO_THROW(hyperbolic.require_radius(1.5));
}

TEST(ReferenceSpace, UnitSphereVolumes) {
  EXPECT_NEAR(unit_sphere_volume(1), 2 * std::numbers::pi, 1e-14);
  EXPECT_NEAR(unit_sphere_volume(2), 4 * std::numbers::pi, 1e-14);
  EXPECT_NEAR(unit_sphere_volume(3), 2 * std::numbers::pi * std::numbers::pi, 1e-13);
  for (int k = 1; k <= 6; ++k) {
    EXPECT_NEAR(unit_sphere_volume(k), oracle::unit_sphere_volume(k), 1e-12);
  }
}

TEST(ReferenceGeometry, PotentialAndSlices) {
  const ReferenceSpace space(-1, 4, 2.5);
  EXPECT_NEAR(static_potential(space, 2.0), std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(slice_area(space, 2.0), 2.5 * 8.0, 1e-14);
  EXPECT_NEAR(ambient_sphere_mean_curvature(space, 2.0), 3 * std::sqrt(3.0) / 2, 1e-15);
}

// Curvature of the reference metric against the finite-difference Ricci
// oracle in explicit polar coordinates.
class CurvatureOracle : public ::testing::TestWithParam<std::tuple<int, int>> {};

TEST_P(CurvatureOracle, MatchesFiniteDifferenceRicci) {
  const auto [eps, n] = GetParam();
  const ReferenceSpace space(eps, n);
  const auto metric =
      oracle::warped_metric(n, eps, [eps](double r) { return 1.0 / (r * r + eps); });
  for (double r : {1.3, 2.0, 3.7}) {
    oracle::Point x(n, 1.1);
    x[0] = r;
    x[1] = 0.7;
    const auto ric = oracle::ricci(metric, x);
    const auto c = curvature_tensors(space, r);
    EXPECT_NEAR(c.ricci_radial, ric.frame_diagonal[0], 1e-6);
    EXPECT_NEAR(c.ricci_tangential, ric.frame_diagonal[1], 1e-6);
    EXPECT_NEAR(c.scalar, ric.scalar, 1e-5);
    EXPECT_NEAR(c.scalar, -n * (n - 1.0), 1e-10);
    EXPECT_NEAR(c.ricci_radial, -(n - 1.0), 1e-10);
  }
}

TEST_P(CurvatureOracle, StaticEquationOracle) {
  const auto [eps, n] = GetParam();
  const ReferenceSpace space(eps, n);
  const auto metric =
      oracle::warped_metric(n, eps, [eps](double r) { return 1.0 / (r * r + eps); });
  for (double r : {1.4, 2.5}) {
    oracle::Point x(n, 1.0);
    x[0] = r;
    const auto o = oracle::static_equation(
        metric, [eps](double t) { return std::sqrt(t * t + eps); }, x);
    EXPECT_NEAR(o.tensor, 0.0, 1e-5);
    EXPECT_NEAR(o.laplace, 0.0, 1e-5);
    const auto res = static_equation_residual(space, r);
    EXPECT_LE(res.tensor, 1e-12 * (1 + r * r));
    EXPECT_LE(res.laplace, 1e-12 * (1 + r * r));
  }
}

INSTANTIATE_TEST_SUITE_P(AllSpaces, CurvatureOracle,
                         ::testing::Combine(::testing::Values(1, 0, -1),
                                            ::testing::Values(3, 4, 5)));

TEST(ReferenceGeometry, WarpedProductAgainstOracleForGenericWarp) {
  // A(r) = 1 / (r^2 + 1 - 0.3/r), a Kottler-Schwarzschild-type warp.
  const int n = 3;
  const auto w2 = [](double r) { return r * r + 1 - 0.3 / r; };
  const auto metric = oracle::warped_metric(n, 1, [&](double r) { return 1.0 / w2(r); });
  const double r = 1.6;
  const auto ric = oracle::ricci(metric, {r, 0.9, 1.2});
  const auto c = warped_product_curvature(n, 1, r, w2(r), 2 * r + 0.3 / (r * r));
  EXPECT_NEAR(c.ricci_radial, ric.frame_diagonal[0], 1e-6);
  EXPECT_NEAR(c.ricci_tangential, ric.frame_diagonal[1], 1e-6);
  EXPECT_NEAR(c.scalar, ric.scalar, 1e-5);
  // Vacuum with negative cosmological constant: R = -n(n-1).
  EXPECT_NEAR(c.scalar, -6.0, 1e-12);
}

TEST(ReferenceGeometry, StaticResidualHundredRadii) {
  for (int eps : {1, 0, -1}) {
    for (int n : {3, 4, 5}) {
      const ReferenceSpace space(eps, n);
      for (int k = 0; k < 100; ++k) {
        const double r = space.r_min() + 1e-3 + 5.0 * k / 99.0;
        const auto res = static_equation_residual(space, r);
        EXPECT_LE(res.tensor, 1e-8);
        EXPECT_LE(res.laplace, 1e-8);
        EXPECT_NEAR(curvature_tensors(space, r).scalar, -n * (n - 1.0), 1e-8);
      }
    }
  }
}
