#include "harmhull/hull.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace harmhull;
using namespace harmhull::hull;

namespace {

RegionExpr punctured(int n) { return RegionExpr::minus(n, RegionExpr::point(RealVector::Zero(n))); }

RealVector e1(int n) { return RealVector::Unit(n, 0); }

}  // namespace

TEST(Hull, ConeSliceGeometry) {
  const auto s = real_cone_slice(make_vector({1, {0, 2}, 0, 0}));
  EXPECT_EQ(s.center, make_real({1, 0, 0, 0}));
  EXPECT_DOUBLE_EQ(s.radius, 2.0);
  EXPECT_EQ(s.axis, make_real({0, 1, 0, 0}));
  EXPECT_TRUE(real_cone_slice(make_vector({1, 2, 3, 4})).is_point());
}

TEST(Hull, SliceLiesOnIsotropicCone) {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 50; ++k) {
    const ComplexVector z = oracle::complex_vector(rng, 4, 2.0);
    for (const auto& w : oracle::slice_samples(z, 20, rng)) {
      EXPECT_NEAR(std::abs(square(complexify(w) - z)), 0.0, 1e-10);
    }
  }
}

TEST(Hull, SliceDistanceAndLinearMinimumMatchSampling) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 50; ++k) {
    const ComplexVector z = oracle::complex_vector(rng, 4, 2.0);
    const auto s = real_cone_slice(z);
    const RealVector p = oracle::real_vector(rng, 4, -3, 3);
    const RealVector a = oracle::real_vector(rng, 4, -1, 1);
    double dmin = 1e300, lmin = 1e300;
    for (const auto& w : oracle::slice_samples(z, 4000, rng)) {
      dmin = std::min(dmin, (w - p).squaredNorm());
      lmin = std::min(lmin, a.dot(w));
    }
    EXPECT_LE(slice_distance_sq(s, p), dmin + 1e-12);
    EXPECT_NEAR(slice_distance_sq(s, p), dmin, 0.2);
    EXPECT_LE(slice_min_linear(s, a), lmin + 1e-12);
    EXPECT_NEAR(slice_min_linear(s, a), lmin, 0.1);
  }
}

TEST(Hull, KnownWitnessesForPuncturedSpace) {
  const RegionExpr u = punctured(4);
  const auto excluded = hull_membership(make_vector({1, I, 0, 0}), u, e1(4), 64);
  EXPECT_EQ(excluded.status, HullStatus::ConeFailsObstacle);
  ASSERT_TRUE(excluded.witness.has_value());
  EXPECT_EQ(excluded.witness->kind, Obstacle::Kind::Point);
  const auto certified = hull_membership(make_vector({I / 2.0, 0, 0, 0}), u, e1(4), 64);
  EXPECT_EQ(certified.status, HullStatus::MemberCertified);
  EXPECT_TRUE(certified.certified);
}

TEST(Hull, RealPointsOfUAreMembers) {
  const RegionExpr u = punctured(4);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 50; ++k) {
    const RealVector x = oracle::real_vector(rng, 4, -2, 2);
    EXPECT_EQ(hull_membership(complexify(x), u, e1(4), 16).status, HullStatus::MemberCertified);
  }
}

TEST(Hull, PathObstructionIsReportedAsUnverified) {
  // The slice at z avoids the ball, but the segment from a basepoint beyond
  // the ball sweeps slices through it.
  const RegionExpr u = RegionExpr::minus(4, RegionExpr::ball(make_real({5, 0, 0, 0}), 0.5));
  const ComplexVector z = make_vector({{2, 0}, {0, 0.1}, 0, 0});
  const auto v = hull_membership(z, u, make_real({8, 0, 0, 0}), 64);
  EXPECT_EQ(v.status, HullStatus::ConeOkConnectivityUnverified);
}

TEST(Hull, DimensionAndBasepointErrors) {
  EXPECT_THROW(hull_membership(ComplexVector::Zero(3), punctured(3), e1(3), 8), DomainError);
  EXPECT_THROW(hull_membership(ComplexVector::Zero(2), punctured(2), e1(2), 8), DomainError);
  EXPECT_THROW(hull_membership(ComplexVector::Ones(4), punctured(4), RealVector::Zero(4), 8), DomainError);
  EXPECT_THROW(hull_membership(ComplexVector::Ones(4), punctured(6), e1(6), 8), DimensionMismatch);
}

TEST(Hull, UnsupportedRegionFallsBackToSampling) {
  // a bounded domain: the complement is not a union of obstacles of the class
  const RegionExpr u = RegionExpr::ball(RealVector::Zero(4), 1.0);
  EXPECT_THROW(hull_membership(ComplexVector::Zero(4), u, RealVector::Zero(4), 8), UnsupportedError);
  std::mt19937_64 rng(4);
  const auto inside = hull_membership_sampled(make_vector({0, {0, 0.3}, 0, 0}), u, RealVector::Zero(4), 8, 500, rng);
  EXPECT_FALSE(inside.certified);
  EXPECT_EQ(inside.status, HullStatus::MemberCertified);
  const auto outside = hull_membership_sampled(make_vector({0, {0, 1.5}, 0, 0}), u, RealVector::Zero(4), 8, 500, rng);
  EXPECT_EQ(outside.status, HullStatus::ConeFailsObstacle);
  ASSERT_TRUE(outside.witness_point.has_value());
  EXPECT_FALSE(u.contains(*outside.witness_point));
}

TEST(Hull, ObstacleDecomposition) {
  const RegionExpr u = RegionExpr::intersection_of(
      {RegionExpr::minus(4, RegionExpr::ball(RealVector::Zero(4), 1.0)),
       RegionExpr::halfspace(make_real({0, 0, 0, 1}), -3.0)});
  const auto obs = obstacles_of(u);
  ASSERT_EQ(obs.size(), 2u);
  EXPECT_EQ(obs[0].kind, Obstacle::Kind::Ball);
  EXPECT_FALSE(obs[0].closed);  // the removed ball is open
  EXPECT_EQ(obs[1].kind, Obstacle::Kind::HalfSpace);
  EXPECT_TRUE(obs[1].closed);
  // a point just above the ball's boundary along w4 is in U
  EXPECT_TRUE(u.contains(make_real({0, 0, 0, 1})));
}

TEST(Hull, HalfSpaceObstacleExactTest) {
  const RegionExpr u = RegionExpr::halfspace(make_real({1, 0, 0, 0}), 0.0);  // w1 > 0
  const ComplexVector near = make_vector({{1, 0}, {0, 0.9}, 0, 0});
  const ComplexVector far = make_vector({{1, 5}, 0, 0, 0});
  EXPECT_EQ(hull_membership(near, u, make_real({1, 0, 0, 0}), 32).status, HullStatus::MemberCertified);
  // Im z along e1: the slice lies in {w1 = 1} whatever its radius
  EXPECT_EQ(hull_membership(far, u, make_real({1, 0, 0, 0}), 32).status, HullStatus::MemberCertified);
  const ComplexVector bad = make_vector({1, 0, {0, 1.1}, 0});
  EXPECT_EQ(hull_membership(bad, u, make_real({1, 0, 0, 0}), 32).status, HullStatus::ConeFailsObstacle);
}

TEST(Hull, ConeVerdictAgreesWithSamplingOracle) {
  std::mt19937_64 rng(5);
  std::vector<oracle::BallSpec> balls;
  std::vector<RegionExpr> pieces;
  for (int b = 0; b < 3; ++b) {
    oracle::BallSpec s{oracle::real_vector(rng, 4, -2, 2), oracle::uniform(rng, 0.3, 0.8)};
    balls.push_back(s);
    pieces.push_back(RegionExpr::ball(s.center, s.radius));
  }
  const RegionExpr u = RegionExpr::minus(4, RegionExpr::union_of(pieces));
  int failing = 0;
  for (int k = 0; k < 100; ++k) {
    ComplexVector z(4);
    for (int i = 0; i < 4; ++i) z[i] = Complex(oracle::uniform(rng, -2.5, 2.5), oracle::uniform(rng, -1.5, 1.5));
    if (k % 2 == 1) {
      // real part near a ball centre, so the slice sphere often meets it
      const auto& b = balls[static_cast<std::size_t>(k % 3)];
      for (int i = 0; i < 4; ++i) z[i].real(b.center[i] + oracle::uniform(rng, -0.5, 0.5));
    }
    const bool exact = !cone_obstruction(z, obstacles_of(u)).has_value();
    const bool sampled = oracle::sampled_cone_avoids_balls(z, balls, 5000, rng);
    failing += exact ? 0 : 1;
    EXPECT_EQ(exact, sampled) << "query " << k;
  }
  EXPECT_GT(failing, 5);
  EXPECT_LT(failing, 95);
}

TEST(Hull, TwoDimensionalDiscExamples) {
  const RegionExpr disc = RegionExpr::ball(RealVector::Zero(2), 1.0);
  EXPECT_TRUE(hull_membership_2d(make_vector({{0.5, 0.2}, 0}), disc));
  EXPECT_TRUE(hull_membership_2d(make_vector({0, {0, 0.8}}), disc));
  EXPECT_FALSE(hull_membership_2d(make_vector({0, {0, 1.2}}), disc));
  EXPECT_TRUE(hull_membership_2d(make_vector({0.3, -0.4}), disc));
  EXPECT_THROW(hull_membership_2d(ComplexVector::Zero(3), disc), DimensionMismatch);
}

TEST(Hull, TwoDimensionalMatchesClosedForm) {
  const RegionExpr disc = RegionExpr::ball(RealVector::Zero(2), 1.0);
  const Complex kappa(0.4, 0.3);
  for (int i = 0; i <= 40; ++i)
    for (int j = 0; j <= 40; ++j) {
      const Complex w(-1.5 + 3.0 * i / 40, -1.5 + 3.0 * j / 40);
      const ComplexVector z = make_vector({w, kappa * w});
      EXPECT_EQ(hull_membership_2d(z, disc), oracle::unit_disc_condition(z));
    }
}

TEST(Hull, Extend2dRestrictsToRealValues) {
  const HolomorphicFunction sq{[](Complex w) { return w * w; }, {}};
  std::mt19937_64 rng(6);
  for (int k = 0; k < 50; ++k) {
    const double x1 = oracle::uniform(rng, -2, 2), x2 = oracle::uniform(rng, -2, 2);
    const Complex v = extend_2d(sq, sq, make_vector({x1, x2}));
    EXPECT_NEAR(v.real(), 2 * (x1 * x1 - x2 * x2), 1e-12);
    EXPECT_NEAR(v.imag(), 0.0, 1e-12);
  }
  const HolomorphicFunction ex{[](Complex w) { return std::exp(w); }, {}};
  const HolomorphicFunction zero{[](Complex) { return Complex{}; }, {}};
  EXPECT_NEAR(std::abs(extend_2d(ex, zero, make_vector({I, 0})) - std::exp(I)), 0.0, 1e-15);
  const HolomorphicFunction logf{[](Complex w) { return std::log(w); }, [](Complex w) { return w.real() > 0; }};
  EXPECT_THROW(extend_2d(logf, zero, make_vector({-1.0, 0})), DomainError);
}

TEST(Hull, NewtonianPotential) {
  const RealVector x = RealVector::Zero(4);
  EXPECT_NEAR(std::abs(newtonian_potential(x, make_vector({2, 0, 0, 0})) - 0.25), 0.0, 1e-15);
  EXPECT_THROW(newtonian_potential(x, make_vector({1, I, 0, 0})), DomainError);
  EXPECT_THROW(newtonian_potential(RealVector::Zero(3), ComplexVector::Ones(3)), DomainError);
  // dimension 6: 1 / <z,z>^2
  EXPECT_NEAR(std::abs(newtonian_potential(RealVector::Zero(6), complexify(RealVector::Constant(6, 1.0))) -
                       1.0 / 36.0),
              0.0, 1e-15);
}

TEST(Hull, NewtonianPotentialBlowsUpTowardsCone) {
  // z_k = x + v + w / k with <v,v> = <v,w> = 0 and <w,w> = 1 gives r = k^2.
  const RealVector x = make_real({0.3, -0.2, 1.0, 0.5});
  const ComplexVector v = make_vector({1, I, 0, 0});
  const ComplexVector w = make_vector({0, 0, 1, 0});
  double prev = 0.0;
  for (int k = 1; k <= 2000; k += 7) {
    const double r = std::abs(newtonian_potential(x, complexify(x) + v + w / static_cast<double>(k)));
    EXPECT_NEAR(r, static_cast<double>(k) * k, 1e-6 * k * k);
    EXPECT_GT(r, prev);
    prev = r;
  }
}
