#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ethrisk/collision.hpp"
#include "ethrisk/errors.hpp"
#include "support/oracles.hpp"

namespace ethrisk {
namespace {

constexpr double kPi = std::numbers::pi;

GaussianPrediction gaussian(Vec2 mean, Covariance2 cov) {
  GaussianPrediction g;
  g.mean = mean;
  g.covariance = cov;
  return g;
}

TEST(OrientedBox, CornersFormRectangle) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto c = oracle::random_box(rng).box().corners();
    for (int k = 0; k < 4; ++k) {
      const Vec2 e1 = c[(k + 1) % 4] - c[k];
      const Vec2 e2 = c[(k + 2) % 4] - c[(k + 1) % 4];
      EXPECT_NEAR(dot(e1, e2), 0.0, 1e-9);
    }
  }
}

TEST(OrientedBox, RejectsNonPositiveExtent) {
  EXPECT_THROW(OrientedBox({0, 0}, 0.0, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(OrientedBox({0, 0}, 0.0, 1.0, -1.0), std::invalid_argument);
}

TEST(SatOverlap, IdenticalAndFarApart) {
  const OrientedBox a({0, 0}, 0.3, 0.5, 0.5);
  EXPECT_TRUE(sat_overlap(a, a));
  EXPECT_FALSE(sat_overlap(a, OrientedBox({100, 0}, 0.0, 0.5, 0.5)));
}

TEST(SatOverlap, TouchingEdgesOverlap) {
  const OrientedBox a({0, 0}, 0.0, 1.0, 0.5);
  const OrientedBox b({2.0, 0}, 0.0, 1.0, 0.5);
  EXPECT_TRUE(sat_overlap(a, b));
  EXPECT_FALSE(sat_overlap(a, OrientedBox({2.0 + 1e-9, 0}, 0.0, 1.0, 0.5)));
}

TEST(SatOverlap, RotatedPairMatchesClippingOracle) {
  const OrientedBox a({0, 0}, 0.0, 1.0, 0.5);
  for (double ang = 0.0; ang < 2 * kPi; ang += 0.05) {
    const Vec2 c{1.2 * std::cos(ang), 1.2 * std::sin(ang)};
    const OrientedBox b(c, kPi / 4, 1.0, 0.5);
    const bool expected = oracle::polygons_intersect(oracle::box_polygon({0, 0}, 0.0, 1.0, 0.5),
                                                     oracle::box_polygon(c, kPi / 4, 1.0, 0.5));
    EXPECT_EQ(sat_overlap(a, b), expected) << ang;
  }
}

TEST(SatOverlap, AgreesWithClippingOracleOnRandomPairs) {
  const auto result = oracle::sat_vs_clipping(10000, 42);
  EXPECT_EQ(result.agree, result.pairs);
  EXPECT_GT(result.overlapping, 1000);
  EXPECT_LT(result.overlapping, 9000);
}

TEST(SatOverlap, Symmetric) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 2000; ++i) {
    const auto a = oracle::random_box(rng).box();
    const auto b = oracle::random_box(rng).box();
    EXPECT_EQ(sat_overlap(a, b), sat_overlap(b, a));
  }
}

TEST(Mahalanobis, Distances) {
  EXPECT_DOUBLE_EQ(mahalanobis_distance({1, 2}, gaussian({1, 2}, {})), 0.0);
  EXPECT_NEAR(mahalanobis_distance({3, 4}, gaussian({0, 0}, {})), 5.0, 1e-12);
  EXPECT_NEAR(mahalanobis_distance({2, 0}, gaussian({0, 0}, {4, 0, 1})), 1.0, 1e-12);
}

TEST(Mahalanobis, SingularCovarianceThrows) {
  EXPECT_THROW(mahalanobis_distance({1, 0}, gaussian({0, 0}, {1, 1, 1})), SingularCovariance);
  EXPECT_THROW(mahalanobis_distance({1, 0}, gaussian({0, 0}, {1e-7, 0, 1e-7})), SingularCovariance);
  EXPECT_THROW(mahalanobis_distance({1, 0}, gaussian({0, 0}, {-1, 0, -1})), SingularCovariance);
}

TEST(Mahalanobis, ProbabilityClosedForm) {
  EXPECT_DOUBLE_EQ(mahalanobis_probability(0.0), 1.0);
  EXPECT_NEAR(mahalanobis_probability(5.0), 3.726653172078671e-6, 1e-18);
  EXPECT_EQ(mahalanobis_probability(std::numeric_limits<double>::infinity()), 0.0);
  double prev = 1.0;
  for (double d = 0.1; d < 10.0; d += 0.1) {
    const double p = mahalanobis_probability(d);
    EXPECT_LT(p, prev);
    prev = p;
  }
}

TEST(Mahalanobis, InflatingCovarianceNeverLowersProbability) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.1, 2.0), off(-3.0, 3.0), scale(1.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double sx = u(rng), sy = u(rng);
    const Covariance2 cov{sx * sx, 0.3 * sx * sy, sy * sy};
    const Vec2 p{off(rng), off(rng)};
    const double base = mahalanobis_probability(mahalanobis_distance(p, gaussian({}, cov)));
    const double wide =
        mahalanobis_probability(mahalanobis_distance(p, gaussian({}, cov.scaled(scale(rng)))));
    EXPECT_GE(wide, base);
  }
}

TEST(Mahalanobis, MonteCarloSurvivalFrequency) {
  const auto mc = oracle::mahalanobis_monte_carlo(60, 200000, 1234);
  EXPECT_LT(mc.max_abs_z, 4.5);
  EXPECT_LE(mc.beyond_3se, 3);
}

TEST(CollisionProbability, GateSkipsMahalanobisStage) {
  CollisionStats stats;
  const OrientedBox ego({0, 0}, 0.0, 2.0, 1.0);
  const auto pred = gaussian({50, 0}, {});
  const OrientedBox other({50, 0}, 0.0, 2.0, 1.0);
  EXPECT_EQ(collision_probability(ego, {0, 0}, pred, other, &stats), 0.0);
  EXPECT_EQ(stats.sat_checks, 1u);
  EXPECT_EQ(stats.mahalanobis_evaluations, 0u);

  // A singular covariance behind a failed gate never reaches the solve.
  const auto singular = gaussian({50, 0}, {0, 0, 0});
  EXPECT_EQ(collision_probability(ego, {0, 0}, singular, other, &stats), 0.0);
}

TEST(CollisionProbability, OverlappingBoxes) {
  CollisionStats stats;
  const OrientedBox ego({0, 0}, 0.0, 2.0, 1.0);
  const OrientedBox other({1, 1}, 0.0, 2.0, 1.0);
  EXPECT_DOUBLE_EQ(collision_probability(ego, {1, 1}, gaussian({1, 1}, {}), other, &stats), 1.0);
  EXPECT_NEAR(collision_probability(ego, {0, 0}, gaussian({1, 1}, {}), other, &stats),
              std::exp(-1.0), 1e-12);
  EXPECT_EQ(stats.mahalanobis_evaluations, 2u);
  EXPECT_THROW(collision_probability(ego, {0, 0}, gaussian({1, 1}, {0, 0, 0}), other),
               SingularCovariance);
}

}  // namespace
}  // namespace ethrisk
