#pragma once

// Odd dimensions (n = 3): branch-tracked continuation of square roots and
// logarithms along paths, the monodromy of the complexified Newtonian
// potential, reduced hulls, Kelvin and Moebius transforms, and explicit
// witnesses for the cover of the cone complement by curved extension sets.

#include "harmhull/core.hpp"

#include <Eigen/Geometry>

#include <functional>
#include <optional>
#include <vector>

namespace harmhull::odd {

using Vector3r = Eigen::Vector3d;
using Rotation3 = Eigen::Matrix3d;

/// Largest position change allowed between consecutive samples.
inline constexpr double kMaxStep = 0.1;
/// Radicand magnitude treated as a branch point.
inline constexpr double kBranchFloor = 1e-8;
/// Two candidate roots closer than this (relative) to the predecessor are ambiguous.
inline constexpr double kAmbiguityRatio = 0.1;

inline double distance(Complex a, Complex b) { return std::abs(a - b); }
inline double distance(const ComplexVector& a, const ComplexVector& b) { return (a - b).norm(); }

/// Path t in [0, 1] -> position, sampled at t = k / steps.
template <class Position>
struct PathSpec {
  std::function<Position(double)> at;
  int steps = 100;

  Position sample(int k) const { return at(static_cast<double>(k) / steps); }
};

template <class Position>
struct BranchValue {
  Complex value;
  Position position;
  int history = 0;  // number of continuation steps taken to reach `position`
};

namespace detail {

template <class Position>
void check_path(const PathSpec<Position>& path) {
  if (path.steps < 100) throw DomainError("continuation path needs at least 100 steps");
  if (!path.at) throw DomainError("continuation path is empty");
}

template <class Position>
void check_step(const Position& a, const Position& b, int k) {
  if (distance(a, b) >= kMaxStep) {
    throw BranchError("path step " + std::to_string(k) + " is too large (" + std::to_string(distance(a, b)) +
                      "); increase the number of steps");
  }
}

}  // namespace detail

/// Continues sqrt(g) along the path, picking at each sample the root nearer
/// the previous value.
template <class Position>
BranchValue<Position> continue_sqrt(const std::function<Complex(const Position&)>& g,
                                    const PathSpec<Position>& path, const BranchValue<Position>& initial,
                                    const Tolerances& tol = {}) {
  detail::check_path(path);
  Position prev_pos = path.sample(0);
  const Complex g0 = g(prev_pos);
  if (std::abs(g0) <= kBranchFloor) throw BranchError("radicand vanishes at the path start");
  if (std::abs(initial.value * initial.value - g0) > tol.eq_tol * (1.0 + std::abs(g0))) {
    throw DomainError("initial branch value is not a square root of the radicand at the path start");
  }
  Complex prev = initial.value;
  for (int k = 1; k <= path.steps; ++k) {
    Position pos = path.sample(k);
    detail::check_step(prev_pos, pos, k);
    const Complex gv = g(pos);
    if (std::abs(gv) <= kBranchFloor) {
      throw BranchError("radicand nearly vanishes at path step " + std::to_string(k) + " (branch point hit)");
    }
    const Complex r = std::sqrt(gv);
    const double d_plus = std::abs(r - prev);
    const double d_minus = std::abs(r + prev);
    if (std::abs(d_plus - d_minus) < kAmbiguityRatio * std::max(d_plus, d_minus)) {
      throw BranchError("ambiguous square-root branch at path step " + std::to_string(k) +
                        "; increase the number of steps");
    }
    prev = d_plus <= d_minus ? r : -r;
    prev_pos = std::move(pos);
  }
  return {prev, prev_pos, initial.history + path.steps};
}

/// Continues log(g) along the path by unwrapping the argument. Used to show
/// the 2D logarithmic potential has no single-valued branch.
template <class Position>
BranchValue<Position> continue_log(const std::function<Complex(const Position&)>& g,
                                   const PathSpec<Position>& path, const BranchValue<Position>& initial,
                                   const Tolerances& tol = {}) {
  detail::check_path(path);
  Position prev_pos = path.sample(0);
  Complex prev_g = g(prev_pos);
  if (std::abs(prev_g) <= kBranchFloor) throw BranchError("log argument vanishes at the path start");
  if (std::abs(std::exp(initial.value) - prev_g) > tol.eq_tol * (1.0 + std::abs(prev_g))) {
    throw DomainError("initial branch value is not a logarithm of g at the path start");
  }
  Complex prev = initial.value;
  for (int k = 1; k <= path.steps; ++k) {
    Position pos = path.sample(k);
    detail::check_step(prev_pos, pos, k);
    const Complex gv = g(pos);
    if (std::abs(gv) <= kBranchFloor) throw BranchError("log argument nearly vanishes (branch point hit)");
    const double turn = std::arg(gv / prev_g);
    if (std::abs(turn) > kPi / 2) throw BranchError("argument jump too large; increase the number of steps");
    prev = Complex(std::log(std::abs(gv)), prev.imag() + turn);
    prev_g = gv;
    prev_pos = std::move(pos);
  }
  return {prev, prev_pos, initial.history + path.steps};
}

/// The loop theta -> F(center + radius e^{i theta}) with F(zeta) = (zeta, zeta^2, 0).
inline PathSpec<ComplexVector> f_zeta_loop(Complex center, double radius, int steps) {
  return {[center, radius](double t) {
            const Complex zeta = center + radius * std::polar(1.0, 2.0 * kPi * t);
            ComplexVector z(3);
            z << zeta, zeta * zeta, 0.0;
            return z;
          },
          steps};
}

/// Final / initial ratio of r(z) = 1 / sqrt(z . z) continued around a closed loop.
/// Starts from the principal root unless a basepoint value is supplied.
inline Complex newtonian_monodromy(const PathSpec<ComplexVector>& loop,
                                   std::optional<BranchValue<ComplexVector>> basepoint = std::nullopt,
                                   const Tolerances& tol = {}) {
  detail::check_path(loop);
  const ComplexVector start = loop.sample(0);
  if (start.size() != 3) throw DimensionMismatch("newtonian_monodromy expects a loop in C^3");
  if (distance(start, loop.sample(loop.steps)) > tol.eq_tol * (1.0 + start.norm())) {
    throw DomainError("newtonian_monodromy needs a closed loop");
  }
  const std::function<Complex(const ComplexVector&)> radicand = [](const ComplexVector& z) { return square(z); };
  if (std::abs(radicand(start)) <= kBranchFloor) throw BranchError("loop starts on the cone z^2 = 0");
  const BranchValue<ComplexVector> init =
      basepoint ? *basepoint : BranchValue<ComplexVector>{std::sqrt(radicand(start)), start, 0};
  const auto end = continue_sqrt(radicand, loop, init, tol);
  // r = 1 / sqrt, so the multiplier of r is the inverse ratio of the roots.
  return init.value / end.value;
}

/// (z - x) . (z - x) not in R_{<=0} for every obstacle x.
inline bool reduced_hull_member_3d(const ComplexVector& z, const std::vector<Vector3r>& obstacles,
                                   const Tolerances& tol = {}) {
  if (z.size() != 3) throw DimensionMismatch("reduced_hull_member_3d expects a point of C^3");
  for (const auto& x : obstacles) {
    const Complex s = square(z - complexify(x));
    const bool nonpositive_real = std::abs(s.imag()) <= tol.eq_tol && s.real() <= 0.0;
    if (nonpositive_real) return false;
  }
  return true;
}

/// z . z != 0: the cone complement for U = R^3 minus the origin.
inline bool cone_complement_member_3d(const ComplexVector& z, const Tolerances& tol = {}) {
  if (z.size() != 3) throw DimensionMismatch("expected a point of C^3");
  return std::abs(square(z)) > tol.eq_tol;
}

/// F(X) = f(((X1 - eps |X|^2), X2, X3) / D) / sqrt(D), D = 1 - 2 eps X1 + eps^2 |X|^2.
inline double kelvin_transform(const std::function<double(const Vector3r&)>& f, double eps, const Vector3r& x) {
  if (eps == 0.0) throw DomainError("kelvin_transform needs eps != 0");
  const double n2 = x.squaredNorm();
  const double d = 1.0 - 2.0 * eps * x[0] + eps * eps * n2;
  if (!(d > 0.0)) throw DomainError("kelvin_transform: 1 - 2 eps X1 + eps^2 |X|^2 must be positive");
  const Vector3r arg((x[0] - eps * n2) / d, x[1] / d, x[2] / d);
  double value = 0.0;
  try {
    value = f(arg);
  } catch (const DomainError&) {
    throw;
  } catch (const std::exception& e) {
    throw DomainError(std::string("kelvin_transform: transformed argument outside f's domain: ") + e.what());
  }
  return value / std::sqrt(d);
}

struct MoebiusImage {
  ComplexVector image;   // Z
  Complex branch_scale;  // principal sqrt(1 + 2 eps z1 + eps^2 z^2)
  bool branch_ok = true; // |z|^2 < 1 / (9 eps^2), where the principal branch is safe
};

inline Complex moebius_denominator(const ComplexVector& z, double eps) {
  return 1.0 + 2.0 * eps * z[0] + eps * eps * square(z);
}

/// Z = (z1 + eps z^2, z2, z3) / (1 + 2 eps z1 + eps^2 z^2)
inline MoebiusImage moebius_pair(const ComplexVector& z, double eps, const Tolerances& tol = {}) {
  if (z.size() != 3) throw DimensionMismatch("moebius_pair expects a point of C^3");
  const Complex den = moebius_denominator(z, eps);
  if (std::abs(den) <= tol.eq_tol) throw DomainError("moebius_pair: denominator vanishes");
  MoebiusImage out;
  out.image.resize(3);
  out.image << (z[0] + eps * square(z)) / den, z[1] / den, z[2] / den;
  out.branch_scale = std::sqrt(den);
  out.branch_ok = eps == 0.0 || z.squaredNorm() < 1.0 / (9.0 * eps * eps);
  return out;
}

/// z = (Z1 - eps Z^2, Z2, Z3) / (1 - 2 eps Z1 + eps^2 Z^2)
inline ComplexVector moebius_inverse(const ComplexVector& big_z, double eps, const Tolerances& tol = {}) {
  if (big_z.size() != 3) throw DimensionMismatch("moebius_inverse expects a point of C^3");
  const Complex den = 1.0 - 2.0 * eps * big_z[0] + eps * eps * square(big_z);
  if (std::abs(den) <= tol.eq_tol) throw DomainError("moebius_inverse: denominator vanishes");
  ComplexVector z(3);
  z << (big_z[0] - eps * square(big_z)) / den, big_z[1] / den, big_z[2] / den;
  return z;
}

inline void check_rotation(const Rotation3& a, const Tolerances& tol = {}) {
  const double orth = (a.transpose() * a - Rotation3::Identity()).cwiseAbs().maxCoeff();
  if (orth > tol.eq_tol || std::abs(a.determinant() - 1.0) > tol.eq_tol) {
    throw DomainError("rotation must satisfy A^t A = I and det A = 1");
  }
}

/// z in A{ |w|^2 < 1/(9 eps^2) and w^2 / (1 + 2 eps w1 + eps^2 w^2) not in R_{<=0} }.
/// eps = 0 is the limiting set, the reduced hull of R^3 minus the origin.
inline bool curved_extension_member(const ComplexVector& z, double eps, const Rotation3& a,
                                    const Tolerances& tol = {}) {
  if (z.size() != 3) throw DimensionMismatch("curved_extension_member expects a point of C^3");
  check_rotation(a, tol);
  const ComplexVector w = a.transpose().cast<Complex>() * z;
  if (eps == 0.0) return reduced_hull_member_3d(w, {Vector3r::Zero()}, tol);
  if (!(w.squaredNorm() < 1.0 / (9.0 * eps * eps))) return false;
  const Complex ratio = square(w) / moebius_denominator(w, eps);
  return std::abs(ratio.imag()) > tol.eq_tol || ratio.real() > 0.0;
}

struct CoverWitness {
  Rotation3 rotation = Rotation3::Identity();
  double epsilon = 0.0;
  /// z already lies in the reduced hull; rotation and epsilon are sentinels.
  bool reduced_hull = false;
};

/// A proper rotation whose first column is the unit vector `first`.
inline Rotation3 rotation_with_first_column(const Vector3r& first, const Vector3r& hint = Vector3r::Zero()) {
  const Vector3r e1 = first.normalized();
  Vector3r e2 = hint - hint.dot(e1) * e1;
  if (e2.norm() < 1e-8) {
    Eigen::Index k = 0;
    e1.cwiseAbs().minCoeff(&k);
    e2 = Vector3r::Unit(k) - e1[k] * e1;
  }
  e2.normalize();
  Rotation3 a;
  a.col(0) = e1;
  a.col(1) = e2;
  a.col(2) = e1.cross(e2);
  return a;
}

/// For z in the cone complement, either confirms reduced-hull membership or
/// returns a rotation A (with A e1 along Im z) and eps = 1 / (4 |z|) such that
/// z lies in the rotated curved extension set.
inline CoverWitness cover_witness(const ComplexVector& z, const Tolerances& tol = {}) {
  if (z.size() != 3) throw DimensionMismatch("cover_witness expects a point of C^3");
  if (!cone_complement_member_3d(z, tol)) throw DomainError("cover_witness: z^2 = 0, z is not in the cone complement");
  CoverWitness w;
  if (reduced_hull_member_3d(z, {Vector3r::Zero()}, tol)) {
    w.reduced_hull = true;
    return w;
  }
  // Here z^2 is a negative real: <x, y> = 0 and |x| < |y|.
  const Vector3r x = z.real();
  const Vector3r y = z.imag();
  w.rotation = rotation_with_first_column(y, x);
  w.epsilon = 1.0 / (4.0 * z.norm());
  if (!curved_extension_member(z, w.epsilon, w.rotation, tol)) {
    throw InternalConsistencyError("cover_witness: constructed witness failed verification");
  }
  return w;
}

}  // namespace harmhull::odd
