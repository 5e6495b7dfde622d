#include "harmhull/lie_incidence.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace harmhull;
using namespace harmhull::lie;

namespace {

/// B(e0, g e0) with B(u, v) = u^t J v.
Complex form_value(const ComplexMatrix& g) {
  const Eigen::Index n = g.rows();
  const ComplexMatrix j = split_form(n / 2);
  const ComplexVector e0 = ComplexVector::Unit(n, 0);
  return (e0.transpose() * j * g * e0).value();
}

}  // namespace

TEST(Lie, SplitFormAndIdentity) {
  const ComplexMatrix j = split_form(3);
  EXPECT_EQ(j * j, ComplexMatrix::Identity(6, 6));
  EXPECT_EQ(j(0, 3), Complex(1.0));
  EXPECT_EQ(orthogonality_residual(ComplexMatrix::Identity(6, 6)).total, 0.0);
  EXPECT_THROW(orthogonality_residual(ComplexMatrix::Identity(5, 5)), DimensionMismatch);
}

TEST(Lie, SOElementValidation) {
  ComplexMatrix g = ComplexMatrix::Identity(6, 6);
  g(0, 1) = 0.5;
  EXPECT_THROW((SOElement(g)), DomainError);
  std::mt19937_64 rng(1);
  const SOElement h = random_group_element(2, rng);
  EXPECT_LE(max_norm((h * h.inverse()).matrix() - ComplexMatrix::Identity(6, 6)), 1e-12);
  EXPECT_EQ(h.m(), 2);
}

TEST(Lie, AlgebraDimensions) {
  for (int m = 2; m <= 4; ++m) {
    const int h = m + 1;
    EXPECT_EQ(static_cast<int>(orthogonal_algebra_basis(h).size()), h * (2 * h - 1));
    EXPECT_EQ(static_cast<int>(p_algebra_basis(m).size()), 2 * m * m + m + 1);
    EXPECT_EQ(static_cast<int>(q_algebra_basis(m).size()), (3 * m + 2) * (m + 1) / 2);
  }
}

TEST(Lie, AlgebraBasesPreserveTheForm) {
  const ComplexMatrix j = split_form(3);
  for (const auto& x : p_algebra_basis(2)) {
    EXPECT_LE(max_norm(x.transpose() * j + j * x), 1e-12);
    EXPECT_LE(x.col(0).tail(5).cwiseAbs().maxCoeff(), 1e-12);
  }
  for (const auto& y : q_algebra_basis(2)) {
    EXPECT_LE(max_norm(y.transpose() * j + j * y), 1e-12);
    EXPECT_LE(y.bottomLeftCorner(3, 3).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Lie, SampledSubgroupsHaveTheirShape) {
  std::mt19937_64 rng(2);
  for (int m = 2; m <= 3; ++m) {
    const Eigen::Index h = m + 1;
    for (int k = 0; k < 50; ++k) {
      const SOElement p = sample_P(m, rng);
      // p e0 is a multiple of e0
      EXPECT_LE(p.matrix().col(0).tail(2 * h - 1).cwiseAbs().maxCoeff(), 1e-12);
      const SOElement q = sample_Q(m, rng);
      EXPECT_LE(q.matrix().bottomLeftCorner(h, h).cwiseAbs().maxCoeff(), 0.0);
    }
  }
}

TEST(Lie, PFactorValidation) {
  PFactors f;
  f.lambda = 0.0;
  f.p = ComplexVector::Zero(2);
  f.q = ComplexVector::Zero(2);
  f.so2m = ComplexMatrix::Identity(4, 4);
  EXPECT_THROW(p_from_factors(2, f), DomainError);
  f.lambda = 2.0;
  EXPECT_NO_THROW(p_from_factors(2, f));
  f.p = ComplexVector::Zero(3);
  EXPECT_THROW(p_from_factors(2, f), DimensionMismatch);
  ComplexMatrix e = ComplexMatrix::Zero(3, 3);
  e(0, 1) = 1.0;
  EXPECT_THROW(q_from_factors(ComplexMatrix::Identity(3, 3), e), DomainError);
}

TEST(Lie, PQPProductsHaveVanishingC11) {
  std::mt19937_64 rng(3);
  for (int m = 2; m <= 3; ++m) {
    for (int k = 0; k < 200; ++k) {
      const SOElement g = sample_P(m, rng) * sample_Q(m, rng) * sample_P(m, rng);
      const auto v = pqp_member(g);
      EXPECT_TRUE(v.member);
      EXPECT_LE(std::abs(v.c11), 1e-9);
      EXPECT_LE(std::abs(form_value(g.matrix())), 1e-9);
    }
  }
}

TEST(Lie, GenericElementsAreNotInPQP) {
  std::mt19937_64 rng(4);
  int generic = 0;
  for (int k = 0; k < 300; ++k) {
    const SOElement g = random_group_element(2, rng);
    const auto v = pqp_member(g);
    EXPECT_NEAR(std::abs(v.c11 - form_value(g.matrix())), 0.0, 1e-13);
    generic += std::abs(v.c11) > 1e-6 ? 1 : 0;
  }
  EXPECT_GE(generic, 297);
}

TEST(Lie, PqpMemberRejectsNonOrthogonal) {
  ComplexMatrix g = ComplexMatrix::Identity(6, 6);
  g(2, 3) = 1.0;
  EXPECT_THROW(pqp_member(g), DomainError);
}

TEST(Lie, ChartRelationIsNegativeDotProduct) {
  std::mt19937_64 rng(5);
  for (int m = 2; m <= 3; ++m) {
    for (int k = 0; k < 100; ++k) {
      const ComplexVector x = oracle::complex_vector(rng, m, 1.0), y = oracle::complex_vector(rng, m, 1.0);
      const ComplexVector xp = oracle::complex_vector(rng, m, 1.0), yp = oracle::complex_vector(rng, m, 1.0);
      const auto r = null_related(x, y, xp, yp, m);
      EXPECT_NEAR(std::abs(r.c11 + r.dot), 0.0, 1e-12);
      EXPECT_NEAR(std::abs(r.dot - ((x - xp).transpose() * (y - yp)).value()), 0.0, 1e-13);
    }
  }
}

TEST(Lie, NullRelatedPairsAreDetected) {
  std::mt19937_64 rng(6);
  for (int k = 0; k < 100; ++k) {
    const int m = 2 + k % 2;
    const ComplexVector x = oracle::complex_vector(rng, m, 1.0), y = oracle::complex_vector(rng, m, 1.0);
    const ComplexVector xp = oracle::complex_vector(rng, m, 1.0);
    const ComplexVector a = x - xp;
    ComplexVector d = oracle::complex_vector(rng, m, 1.0);
    d -= (bilinear(a, d) / bilinear(a, a)) * a;
    const auto r = null_related(x, y, xp, y - d, m);
    EXPECT_TRUE(r.related);
    EXPECT_TRUE(pqp_member(affine_chart(xp, y - d, m).inverse() * affine_chart(x, y, m)).member);
  }
}

TEST(Lie, AffineChartIsOrthogonalAndInjective) {
  const ComplexVector x = make_vector({1, I}), y = make_vector({0.5, -2.0});
  const SOElement g = affine_chart(x, y, 2);
  EXPECT_EQ(g.matrix()(1, 0), Complex(1.0));
  EXPECT_EQ(g.matrix()(4, 0), Complex(0.5));
  EXPECT_THROW(affine_chart(x, make_vector({1, 2, 3}), 2), DimensionMismatch);
}

TEST(Lie, NumericalRank) {
  std::vector<ComplexMatrix> t{ComplexMatrix::Identity(2, 2), 2.0 * ComplexMatrix::Identity(2, 2),
                               ComplexMatrix::Ones(2, 2)};
  EXPECT_EQ(numerical_rank(t), 2);
  EXPECT_EQ(numerical_rank({}), 0);
}

TEST(Lie, PqpRankMatchesDimension) {
  std::mt19937_64 rng(7);
  const auto r2 = pqp_rank_estimate(2, 5, rng);
  EXPECT_EQ(r2.rank, 14);
  EXPECT_EQ(r2.expected, 14);
  const auto r3 = pqp_rank_estimate(3, 5, rng);
  EXPECT_EQ(r3.rank, 27);
  EXPECT_EQ(r3.expected, 27);
  EXPECT_THROW(pqp_rank_estimate(1, 5, rng), DomainError);
  EXPECT_THROW(pqp_rank_estimate(2, 2, rng), DomainError);
}
