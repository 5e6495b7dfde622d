#pragma once

// The homogeneous model G = SO(2m+2, C) preserving the split form x^t y on
// C^{2m+2}, its parabolic subgroups P (stabilizer of the first null line) and
// Q (block upper triangular), the double coset set PQP = {C11 = 0}, the
// affine chart on G/P and null separation.
//
// Index layout of C^{2m+2}: 0 = x0, 1..m = x1..xm, m+1 = y0, m+2..2m+1 = y1..ym.
// The (m+1)-blocks A, B, C, D are therefore [0, m] x [0, m] etc.

#include "harmhull/core.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <map>
#include <random>
#include <vector>

namespace harmhull::lie {

/// [[0, I], [I, 0]] in blocks of size `half`.
inline ComplexMatrix split_form(Eigen::Index half) {
  ComplexMatrix j = ComplexMatrix::Zero(2 * half, 2 * half);
  j.topRightCorner(half, half).setIdentity();
  j.bottomLeftCorner(half, half).setIdentity();
  return j;
}

struct OrthogonalityResidual {
  double total = 0.0;        // max |g^t J g - J|
  double ac = 0.0;           // max |A^t C + C^t A|
  double ad_cb = 0.0;        // max |A^t D + C^t B - I|
  double bd = 0.0;           // max |B^t D + D^t B|
};

inline OrthogonalityResidual orthogonality_residual(const ComplexMatrix& g) {
  if (g.rows() != g.cols() || g.rows() % 2 != 0 || g.rows() < 6) {
    throw DimensionMismatch("orthogonality_residual: expected a square matrix of even size >= 6");
  }
  const Eigen::Index h = g.rows() / 2;
  const ComplexMatrix a = g.topLeftCorner(h, h), b = g.topRightCorner(h, h);
  const ComplexMatrix c = g.bottomLeftCorner(h, h), d = g.bottomRightCorner(h, h);
  OrthogonalityResidual r;
  r.total = (g.transpose() * split_form(h) * g - split_form(h)).cwiseAbs().maxCoeff();
  r.ac = (a.transpose() * c + c.transpose() * a).cwiseAbs().maxCoeff();
  r.ad_cb = (a.transpose() * d + c.transpose() * b - ComplexMatrix::Identity(h, h)).cwiseAbs().maxCoeff();
  r.bd = (b.transpose() * d + d.transpose() * b).cwiseAbs().maxCoeff();
  return r;
}

inline double max_norm(const ComplexMatrix& g) { return g.cwiseAbs().maxCoeff(); }

/// An element of SO(2m+2, C), m >= 2.
class SOElement {
 public:
  /// Validates g^t J g = J to `tol` relative to max(1, |g|_max^2).
  explicit SOElement(ComplexMatrix g, double tol = 1e-8) : g_(std::move(g)) {
    const double res = orthogonality_residual(g_).total;
    const double scale = std::max(1.0, max_norm(g_) * max_norm(g_));
    if (res > tol * scale) {
      throw DomainError("matrix is not in SO(2m+2, C): orthogonality residual " + std::to_string(res));
    }
  }

  const ComplexMatrix& matrix() const { return g_; }
  int m() const { return static_cast<int>(g_.rows() / 2 - 1); }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return g_(i, j); }

  /// g^{-1} = J g^t J
  SOElement inverse() const {
    const ComplexMatrix j = split_form(g_.rows() / 2);
    return SOElement(j * g_.transpose() * j);
  }

  friend SOElement operator*(const SOElement& a, const SOElement& b) { return SOElement(a.g_ * b.g_); }

  static SOElement identity(int m) { return SOElement(ComplexMatrix::Identity(2 * (m + 1), 2 * (m + 1))); }

 private:
  ComplexMatrix g_;
};

inline void require_m(int m) {
  if (m < 2) throw DomainError("m must be at least 2");
}

/// Basis {J (E_ij - E_ji)} of the Lie algebra {X : X^t J + J X = 0} of size 2*half.
inline std::vector<ComplexMatrix> orthogonal_algebra_basis(Eigen::Index half) {
  const Eigen::Index n = 2 * half;
  const ComplexMatrix j = split_form(half);
  std::vector<ComplexMatrix> basis;
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a + 1; b < n; ++b) {
      ComplexMatrix s = ComplexMatrix::Zero(n, n);
      s(a, b) = 1.0;
      s(b, a) = -1.0;
      basis.push_back(j * s);
    }
  }
  return basis;
}

namespace detail {

/// Basis of the subalgebra cut out by requiring the listed entries to vanish.
inline std::vector<ComplexMatrix> constrained_subalgebra(const std::vector<ComplexMatrix>& basis,
                                                         const std::vector<std::pair<Eigen::Index, Eigen::Index>>& zeros) {
  Eigen::MatrixXd constraints(static_cast<Eigen::Index>(zeros.size()), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t r = 0; r < zeros.size(); ++r)
    for (std::size_t k = 0; k < basis.size(); ++k)
      constraints(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) =
          basis[k](zeros[r].first, zeros[r].second).real();
  const Eigen::MatrixXd kernel = Eigen::FullPivLU<Eigen::MatrixXd>(constraints).kernel();
  std::vector<ComplexMatrix> out;
  for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
    ComplexMatrix x = ComplexMatrix::Zero(basis.front().rows(), basis.front().cols());
    for (std::size_t k = 0; k < basis.size(); ++k) x += kernel(static_cast<Eigen::Index>(k), c) * basis[k];
    out.push_back(std::move(x));
  }
  return out;
}

template <class Rng>
Complex uniform_complex(Rng& rng, double half_width = 1.0) {
  std::uniform_real_distribution<double> u(-half_width, half_width);
  const double re = u(rng);
  return {re, u(rng)};
}

template <class Rng>
ComplexMatrix random_combination(const std::vector<ComplexMatrix>& basis, Rng& rng, double norm) {
  ComplexMatrix x = ComplexMatrix::Zero(basis.front().rows(), basis.front().cols());
  for (const auto& b : basis) x += uniform_complex(rng) * b;
  const double f = x.norm();
  return f > 0.0 ? ComplexMatrix(x * (norm / f)) : x;
}

}  // namespace detail

/// Lie algebra of P: form-compatible X with X e_0 in span(e_0).
inline std::vector<ComplexMatrix> p_algebra_basis(int m) {
  require_m(m);
  const Eigen::Index n = 2 * (m + 1);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> zeros;
  for (Eigen::Index i = 1; i < n; ++i) zeros.emplace_back(i, 0);
  return detail::constrained_subalgebra(orthogonal_algebra_basis(m + 1), zeros);
}

/// Lie algebra of Q: form-compatible X with vanishing lower-left block.
inline std::vector<ComplexMatrix> q_algebra_basis(int m) {
  require_m(m);
  const Eigen::Index h = m + 1;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> zeros;
  for (Eigen::Index i = h; i < 2 * h; ++i)
    for (Eigen::Index j = 0; j < h; ++j) zeros.emplace_back(i, j);
  return detail::constrained_subalgebra(orthogonal_algebra_basis(h), zeros);
}

/// exp of a random Lie algebra element of so(2m+2) with Frobenius norm `norm`.
template <class Rng>
SOElement random_group_element(int m, Rng& rng, double norm = 1.5) {
  require_m(m);
  const ComplexMatrix x = detail::random_combination(orthogonal_algebra_basis(m + 1), rng, norm);
  return SOElement(x.exp());
}

/// Explicit parameters of an element of P.
struct PFactors {
  Complex lambda{1.0, 0.0};
  ComplexVector p;           // C^m
  ComplexVector q;           // C^m
  ComplexMatrix so2m;        // 2m x 2m, preserves [[0, I_m], [I_m, 0]]
};

/// diag-block(lambda, SO(2m), 1/lambda) times the unipotent factor in p, q.
inline SOElement p_from_factors(int m, const PFactors& f) {
  require_m(m);
  if (f.lambda == 0.0) throw DomainError("lambda must be nonzero");
  require_same_dim(f.p.size(), m, "P factor p");
  require_same_dim(f.q.size(), m, "P factor q");
  if (f.so2m.rows() != 2 * m || f.so2m.cols() != 2 * m) throw DimensionMismatch("P factor SO(2m) block size");
  const Eigen::Index n = 2 * (m + 1);
  const Eigen::Index y0 = m + 1;
  auto hat = [m](Eigen::Index a) { return a < m ? 1 + a : m + 2 + (a - m); };

  ComplexMatrix levi = ComplexMatrix::Zero(n, n);
  levi(0, 0) = f.lambda;
  levi(y0, y0) = 1.0 / f.lambda;
  for (Eigen::Index a = 0; a < 2 * m; ++a)
    for (Eigen::Index b = 0; b < 2 * m; ++b) levi(hat(a), hat(b)) = f.so2m(a, b);

  ComplexMatrix unip = ComplexMatrix::Identity(n, n);
  unip(0, y0) = -bilinear(f.p, f.q);
  for (Eigen::Index k = 0; k < m; ++k) {
    unip(0, 1 + k) = -f.q[k];
    unip(0, m + 2 + k) = -f.p[k];
    unip(1 + k, y0) = f.p[k];
    unip(m + 2 + k, y0) = f.q[k];
  }
  return SOElement(levi * unip);
}

template <class Rng>
PFactors random_p_factors(int m, Rng& rng) {
  require_m(m);
  PFactors f;
  f.lambda = std::exp(detail::uniform_complex(rng, 0.5));
  f.p.resize(m);
  f.q.resize(m);
  for (int k = 0; k < m; ++k) {
    f.p[k] = detail::uniform_complex(rng);
    f.q[k] = detail::uniform_complex(rng);
  }
  const ComplexMatrix x = detail::random_combination(orthogonal_algebra_basis(m), rng, 1.0);
  f.so2m = x.exp();
  return f;
}

template <class Rng>
SOElement sample_P(int m, Rng& rng) {
  return p_from_factors(m, random_p_factors(m, rng));
}

/// (A, A E; 0, (A^t)^{-1}) with E skew.
inline SOElement q_from_factors(const ComplexMatrix& a, const ComplexMatrix& e) {
  const Eigen::Index h = a.rows();
  if (a.cols() != h || e.rows() != h || e.cols() != h) throw DimensionMismatch("Q factors must be square of equal size");
  if ((e + e.transpose()).cwiseAbs().maxCoeff() > 0.0) throw DomainError("E must be skew-symmetric");
  ComplexMatrix g = ComplexMatrix::Zero(2 * h, 2 * h);
  g.topLeftCorner(h, h) = a;
  g.topRightCorner(h, h) = a * e;
  g.bottomRightCorner(h, h) = a.transpose().inverse();
  return SOElement(g);
}

template <class Rng>
SOElement sample_Q(int m, Rng& rng) {
  require_m(m);
  const Eigen::Index h = m + 1;
  ComplexMatrix a(h, h);
  for (;;) {
    for (Eigen::Index i = 0; i < h; ++i)
      for (Eigen::Index j = 0; j < h; ++j) a(i, j) = detail::uniform_complex(rng);
    const Eigen::VectorXd sv = Eigen::JacobiSVD<ComplexMatrix>(a).singularValues();
    if (sv[h - 1] > 0.0 && sv[0] / sv[h - 1] <= 1e6) break;
  }
  ComplexMatrix e = ComplexMatrix::Zero(h, h);
  for (Eigen::Index i = 0; i < h; ++i)
    for (Eigen::Index j = i + 1; j < h; ++j) {
      e(i, j) = detail::uniform_complex(rng);
      e(j, i) = -e(i, j);
    }
  return q_from_factors(a, e);
}

struct PQPVerdict {
  Complex c11;
  bool member = false;
};

/// Reads C11 (global row m+1, column 0) and compares it to eq_tol * |g|_max.
inline PQPVerdict pqp_member(const ComplexMatrix& g, const Tolerances& tol = {}) {
  const double res = orthogonality_residual(g).total;
  const double scale = max_norm(g);
  if (res > 1e-8 * std::max(1.0, scale * scale)) {
    throw DomainError("pqp_member: input is not orthogonal (residual " + std::to_string(res) + ")");
  }
  const Eigen::Index h = g.rows() / 2;
  PQPVerdict v;
  v.c11 = g(h, 0);
  v.member = std::abs(v.c11) <= tol.eq_tol * scale;
  return v;
}

inline PQPVerdict pqp_member(const SOElement& g, const Tolerances& tol = {}) { return pqp_member(g.matrix(), tol); }

/// (x, y) -> [[1, 0, 0, 0], [x, I, 0, 0], [-x^t y, -y^t, 1, -x^t], [y, 0, 0, I]]
inline SOElement affine_chart(const ComplexVector& x, const ComplexVector& y, int m) {
  require_m(m);
  require_same_dim(x.size(), m, "affine_chart x");
  require_same_dim(y.size(), m, "affine_chart y");
  const Eigen::Index n = 2 * (m + 1);
  const Eigen::Index y0 = m + 1;
  ComplexMatrix g = ComplexMatrix::Identity(n, n);
  g(y0, 0) = -bilinear(x, y);
  for (Eigen::Index k = 0; k < m; ++k) {
    g(1 + k, 0) = x[k];
    g(m + 2 + k, 0) = y[k];
    g(y0, 1 + k) = -y[k];
    g(y0, m + 2 + k) = -x[k];
  }
  return SOElement(g);
}

struct NullRelation {
  bool related = false;
  Complex dot;  // (x - x')^t (y - y')
  Complex c11;  // C11 of chart(x', y')^{-1} chart(x, y)
};

/// (x, y) ~ (x', y') by the dot-product test, cross-checked against PQP
/// membership of chart(x', y')^{-1} chart(x, y).
inline NullRelation null_related(const ComplexVector& x, const ComplexVector& y, const ComplexVector& xp,
                                 const ComplexVector& yp, int m, const Tolerances& tol = {}) {
  NullRelation r;
  r.dot = bilinear(x - xp, y - yp);
  r.related = std::abs(r.dot) <= tol.eq_tol;
  const SOElement rel = affine_chart(xp, yp, m).inverse() * affine_chart(x, y, m);
  const PQPVerdict v = pqp_member(rel, tol);
  r.c11 = v.c11;
  if (v.member != r.related) {
    // Only a genuine disagreement in value is an error; the two thresholds
    // may straddle a borderline value.
    const double gap = std::abs(v.c11 + r.dot);
    if (gap > 10.0 * tol.eq_tol * std::max(1.0, max_norm(rel.matrix()))) {
      throw InternalConsistencyError("null_related: dot-product test and PQP test disagree");
    }
  }
  return r;
}

/// Numerical rank of a set of tangent vectors (singular values above rel * largest).
inline int numerical_rank(const std::vector<ComplexMatrix>& tangents, double rel = 1e-8) {
  if (tangents.empty()) return 0;
  const Eigen::Index len = tangents.front().size();
  ComplexMatrix cols(len, static_cast<Eigen::Index>(tangents.size()));
  for (std::size_t k = 0; k < tangents.size(); ++k)
    cols.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const Eigen::VectorXcd>(tangents[k].data(), len);
  const Eigen::VectorXd sv = Eigen::JacobiSVD<ComplexMatrix>(cols).singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  return static_cast<int>((sv.array() > rel * sv[0]).count());
}

/// Tangent vectors of (p, q, p') -> p q p' at the given point, pulled back to
/// the identity: g^{-1} dg for dp = pX, dq = qY, dp' = p'Z.
inline std::vector<ComplexMatrix> pqp_differential(const SOElement& p, const SOElement& q, const SOElement& pp,
                                                   const std::vector<ComplexMatrix>& p_alg,
                                                   const std::vector<ComplexMatrix>& q_alg) {
  const ComplexMatrix qpp = q.matrix() * pp.matrix();
  const ComplexMatrix g_inv = (p * q * pp).inverse().matrix();
  std::vector<ComplexMatrix> out;
  for (const auto& x : p_alg) out.push_back(g_inv * p.matrix() * x * qpp);
  for (const auto& y : q_alg) out.push_back(g_inv * p.matrix() * q.matrix() * y * pp.matrix());
  for (const auto& z : p_alg) out.push_back(z);
  return out;
}

struct RankEstimate {
  int rank = 0;               // modal rank over trials
  int expected = 0;           // m (2m + 3)
  std::vector<int> observed;  // per-trial ranks
};

template <class Rng>
RankEstimate pqp_rank_estimate(int m, int trials, Rng& rng) {
  if (m < 2 || m > 4) throw DomainError("pqp_rank_estimate supports m in {2, 3, 4}");
  if (trials < 5) throw DomainError("pqp_rank_estimate needs at least 5 trials");
  const auto p_alg = p_algebra_basis(m);
  const auto q_alg = q_algebra_basis(m);
  RankEstimate est;
  est.expected = m * (2 * m + 3);
  std::map<int, int> counts;
  for (int t = 0; t < trials; ++t) {
    const SOElement p = sample_P(m, rng);
    const SOElement q = sample_Q(m, rng);
    const SOElement pp = sample_P(m, rng);
    const int r = numerical_rank(pqp_differential(p, q, pp, p_alg, q_alg));
    est.observed.push_back(r);
    ++counts[r];
  }
  est.rank = std::max_element(counts.begin(), counts.end(), [](const auto& a, const auto& b) {
               return a.second < b.second || (a.second == b.second && a.first < b.first);
             })->first;
  return est;
}

}  // namespace harmhull::lie
