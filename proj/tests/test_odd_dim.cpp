#include "harmhull/odd_dim.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace harmhull;
using namespace harmhull::odd;

namespace {

PathSpec<Complex> circle(Complex c, double r, int steps) {
  return {[c, r](double t) { return c + r * std::polar(1.0, 2.0 * kPi * t); }, steps};
}

const std::function<Complex(const Complex&)> kIdentity = [](const Complex& w) { return w; };

/// z = x + i y with x . y = 0 and |x| < |y|, so z^2 is a negative real.
ComplexVector non_reduced_point(std::mt19937_64& rng) {
  for (;;) {
    const Vector3r y = oracle::real_vector(rng, 3, -2, 2);
    Vector3r x = oracle::real_vector(rng, 3, -2, 2);
    x -= x.dot(y) / y.squaredNorm() * y;
    x *= oracle::uniform(rng, 0.0, 0.95) * y.norm() / std::max(x.norm(), 1e-12);
    if (y.norm() > 0.05) return x.cast<Complex>() + I * y.cast<Complex>();
  }
}

}  // namespace

TEST(Continuation, SqrtAroundZeroFlipsSign) {
  const auto path = circle(0.0, 1.0, 200);
  const BranchValue<Complex> init{1.0, 1.0, 0};
  const auto end = continue_sqrt(kIdentity, path, init);
  EXPECT_NEAR(std::abs(end.value + 1.0), 0.0, 1e-12);
  EXPECT_EQ(end.history, 200);
}

TEST(Continuation, SqrtAwayFromZeroReturns) {
  const auto end = continue_sqrt(kIdentity, circle(3.0, 1.0, 200), {std::sqrt(Complex(4.0)), 4.0, 0});
  EXPECT_NEAR(std::abs(end.value - 2.0), 0.0, 1e-12);
}

TEST(Continuation, LogAroundZeroGains2PiI) {
  const auto end = continue_log(kIdentity, circle(0.0, 1.0, 200), {0.0, 1.0, 0});
  EXPECT_NEAR(std::abs(end.value - 2.0 * kPi * I), 0.0, 1e-12);
}

TEST(Continuation, Errors) {
  EXPECT_THROW(continue_sqrt(kIdentity, circle(0.0, 1.0, 50), {1.0, 1.0, 0}), DomainError);
  // path through the branch point
  EXPECT_THROW(continue_sqrt(kIdentity, circle(1.0, 1.0, 200), {std::sqrt(Complex(2.0)), 2.0, 0}), BranchError);
  // steps too coarse for a large loop
  EXPECT_THROW(continue_sqrt(kIdentity, circle(0.0, 10.0, 100), {std::sqrt(Complex(10.0)), 10.0, 0}), BranchError);
  // inconsistent initial value
  EXPECT_THROW(continue_sqrt(kIdentity, circle(3.0, 1.0, 200), {5.0, 4.0, 0}), DomainError);
}

TEST(Monodromy, LoopAroundIFlipsSign) {
  const Complex m = newtonian_monodromy(f_zeta_loop(I, 0.1, 400));
  EXPECT_NEAR(std::abs(m + 1.0), 0.0, 1e-8);
  const Complex m2 = newtonian_monodromy(f_zeta_loop(I, 0.1, 800));
  EXPECT_LE(std::abs(m - m2), 1e-10);
}

TEST(Monodromy, TrivialLoops) {
  const PathSpec<ComplexVector> constant{[](double) { return make_vector({1, 2, 3}); }, 100};
  EXPECT_NEAR(std::abs(newtonian_monodromy(constant) - 1.0), 0.0, 1e-14);
  const PathSpec<ComplexVector> real_circle{[](double t) {
                                              return make_vector({std::cos(2 * kPi * t), std::sin(2 * kPi * t), 0});
                                            },
                                            200};
  EXPECT_NEAR(std::abs(newtonian_monodromy(real_circle) - 1.0), 0.0, 1e-12);
  // encircling zeta = 0 (a double zero of z^2) and nothing else
  EXPECT_NEAR(std::abs(newtonian_monodromy(f_zeta_loop(0.0, 0.5, 400)) - 1.0), 0.0, 1e-12);
}

TEST(Monodromy, Errors) {
  const PathSpec<ComplexVector> open{[](double t) { return make_vector({1.0 + t, 0, 0}); }, 100};
  EXPECT_THROW(newtonian_monodromy(open), DomainError);
  EXPECT_THROW(newtonian_monodromy(f_zeta_loop(0.0, 1.0, 400)), BranchError);  // passes through +-i
}

TEST(ReducedHull, Examples) {
  const std::vector<Vector3r> origin{Vector3r::Zero()};
  EXPECT_TRUE(reduced_hull_member_3d(make_vector({1, 0, 0}), origin));
  EXPECT_FALSE(reduced_hull_member_3d(make_vector({I, 0, 0}), origin));          // z^2 = -1
  EXPECT_FALSE(reduced_hull_member_3d(make_vector({1, I, 0}), origin));          // z^2 = 0
  EXPECT_TRUE(reduced_hull_member_3d(make_vector({{1, 1}, 0, 0}), origin));     // z^2 = 2i
  EXPECT_TRUE(cone_complement_member_3d(make_vector({I, 0, 0})));
  EXPECT_FALSE(cone_complement_member_3d(make_vector({1, I, 0})));
  EXPECT_THROW(reduced_hull_member_3d(ComplexVector::Zero(4), origin), DimensionMismatch);
}

TEST(ReducedHull, ImpliesConeComplement) {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 500; ++k) {
    const ComplexVector z = oracle::complex_vector(rng, 3, 2.0);
    if (reduced_hull_member_3d(z, {Vector3r::Zero()})) {
      EXPECT_TRUE(cone_complement_member_3d(z));
    }
  }
}

TEST(Kelvin, ConstantMapsToInversePotential) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 100; ++k) {
    const Vector3r x = oracle::real_vector(rng, 3, -2, 2);
    if ((x - Vector3r::UnitX()).norm() < 0.05) continue;
    const double got = kelvin_transform([](const Vector3r&) { return 1.0; }, 1.0, x);
    EXPECT_NEAR(got, 1.0 / (x - Vector3r::UnitX()).norm(), 1e-12 * std::max(1.0, got));
  }
  EXPECT_THROW(kelvin_transform([](const Vector3r&) { return 1.0; }, 0.0, Vector3r::Zero()), DomainError);
  EXPECT_THROW(kelvin_transform([](const Vector3r&) { return 1.0; }, 1.0, Vector3r::UnitX()), DomainError);
}

TEST(Kelvin, PreservesHarmonicity) {
  std::mt19937_64 rng(3);
  const Vector3r a(0.3, -2.0, 0.5);
  const std::vector<std::function<double(const Vector3r&)>> fs{
      [](const Vector3r&) { return 1.0; },
      [a](const Vector3r& w) { return 1.0 / (w - a).norm(); },
      [](const Vector3r& w) { return 2 * w[0] - w[1] + 0.5 * w[2]; }};
  const double eps = 0.4, h = 1e-3;
  for (const auto& f : fs) {
    for (int k = 0; k < 50; ++k) {
      const Vector3r x = oracle::real_vector(rng, 3, -1, 1);
      auto F = [&](const Vector3r& p) { return kelvin_transform(f, eps, p); };
      double lap = -6 * F(x);
      for (int i = 0; i < 3; ++i) lap += F(x + h * Vector3r::Unit(i)) + F(x - h * Vector3r::Unit(i));
      EXPECT_LE(std::abs(lap / (h * h)), 1e-4);
    }
  }
}

TEST(Moebius, ProductIdentityAndInverse) {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 100; ++k) {
    const ComplexVector z = oracle::complex_vector(rng, 3, 1.0);
    const double eps = oracle::uniform(rng, -0.3, 0.3);
    const auto im = moebius_pair(z, eps);
    const Complex lhs = moebius_denominator(z, eps) * (1.0 - 2.0 * eps * im.image[0] + eps * eps * square(im.image));
    EXPECT_NEAR(std::abs(lhs - 1.0), 0.0, 1e-10);
    EXPECT_LE((moebius_inverse(im.image, eps) - z).norm(), 1e-10 * std::max(1.0, z.norm()));
    EXPECT_NEAR(std::abs(im.branch_scale * im.branch_scale - moebius_denominator(z, eps)), 0.0, 1e-12);
  }
}

TEST(Moebius, EpsilonZeroIsIdentity) {
  const ComplexVector z = make_vector({{1, 2}, 3, {0, -1}});
  EXPECT_EQ(moebius_pair(z, 0.0).image, z);
  // 1 + 2 eps z1 + eps^2 z^2 vanishes at z = (-1/eps, 0, 0)
  EXPECT_THROW(moebius_pair(make_vector({-2.0, 0, 0}), 0.5), DomainError);
}

TEST(CurvedExtension, MembershipAndRotationChecks) {
  const Rotation3 id = Rotation3::Identity();
  EXPECT_TRUE(curved_extension_member(make_vector({1, 0, 0}), 0.1, id));
  EXPECT_FALSE(curved_extension_member(make_vector({100, 0, 0}), 0.1, id));  // outside |w| < 1/(3 eps)
  EXPECT_EQ(curved_extension_member(make_vector({I, 0, 0}), 0.0, id),
            reduced_hull_member_3d(make_vector({I, 0, 0}), {Vector3r::Zero()}));
  Rotation3 bad = id;
  bad(0, 0) = -1;  // det -1
  EXPECT_THROW(curved_extension_member(make_vector({1, 0, 0}), 0.1, bad), DomainError);
}

TEST(CoverWitness, ReducedHullPoints) {
  const auto w = cover_witness(make_vector({{1, 1}, 0, 0}));
  EXPECT_TRUE(w.reduced_hull);
  EXPECT_THROW(cover_witness(make_vector({1, I, 0})), DomainError);
}

TEST(CoverWitness, NonReducedRegimeVerified) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 500; ++k) {
    const ComplexVector z = non_reduced_point(rng);
    ASSERT_FALSE(reduced_hull_member_3d(z, {Vector3r::Zero()}));
    ASSERT_TRUE(cone_complement_member_3d(z));
    const auto w = cover_witness(z);
    EXPECT_FALSE(w.reduced_hull);
    EXPECT_NEAR(w.epsilon, 1.0 / (4.0 * z.norm()), 1e-15);
    EXPECT_NEAR((w.rotation.transpose() * w.rotation - Rotation3::Identity()).norm(), 0.0, 1e-12);
    EXPECT_NEAR(w.rotation.determinant(), 1.0, 1e-12);
    // first column along Im z
    EXPECT_NEAR(w.rotation.col(0).dot(z.imag().normalized()), 1.0, 1e-12);
    EXPECT_TRUE(curved_extension_member(z, w.epsilon, w.rotation));
  }
}
