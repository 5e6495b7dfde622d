#pragma once

// Harmonic hull membership in even dimensions: the real slice of the
// isotropic cone, exact avoidance predicates against a class of obstacles,
// path-sampled connectivity, the 2D formula and Newtonian potentials.

#include "harmhull/core.hpp"
#include "harmhull/region.hpp"

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace harmhull::hull {

/// V(z) cap R^n: {w : |w - center| = radius, <w - center, axis> = 0}, or the
/// single point `center` when radius == 0.
struct ConeSliceSphere {
  RealVector center;
  double radius = 0.0;
  RealVector axis;  // empty when radius == 0

  bool is_point() const { return radius == 0.0; }
};

inline ConeSliceSphere real_cone_slice(const ComplexVector& z) {
  if (z.size() < 2) throw DimensionMismatch("real_cone_slice: dimension must be at least 2");
  ConeSliceSphere s;
  s.center = z.real();
  const RealVector y = z.imag();
  s.radius = y.norm();
  if (s.radius > 0.0) s.axis = y / s.radius;
  return s;
}

/// Squared distance from p to the slice sphere.
inline double slice_distance_sq(const ConeSliceSphere& s, const RealVector& p) {
  require_same_dim(p.size(), s.center.size(), "slice_distance");
  const RealVector d = p - s.center;
  if (s.is_point()) return d.squaredNorm();
  const double a = d.dot(s.axis);
  const double q = (d - a * s.axis).norm();
  return a * a + (q - s.radius) * (q - s.radius);
}

/// Smallest value of normal . w over w on the slice.
inline double slice_min_linear(const ConeSliceSphere& s, const RealVector& normal) {
  require_same_dim(normal.size(), s.center.size(), "slice_min_linear");
  double m = normal.dot(s.center);
  if (!s.is_point()) m -= s.radius * (normal - normal.dot(s.axis) * s.axis).norm();
  return m;
}

/// A closed or open piece of the complement of U.
struct Obstacle {
  enum class Kind { Point, Ball, HalfSpace };
  Kind kind = Kind::Point;
  RealVector vec;        // location, ball center, or half-space normal
  double scalar = 0.0;   // ball radius or half-space offset
  bool closed = true;    // ball: |w-c| <= r vs < r; half-space: a.w <= b vs < b

  static Obstacle point(RealVector p) { return {Kind::Point, std::move(p), 0.0, true}; }
  static Obstacle ball(RealVector c, double r, bool closed = true) { return {Kind::Ball, std::move(c), r, closed}; }
  /// {w : a.w <= b} (closed) or {w : a.w < b} (open)
  static Obstacle below(RealVector a, double b, bool closed = true) {
    return {Kind::HalfSpace, std::move(a), b, closed};
  }

  bool contains(const RealVector& w) const {
    switch (kind) {
      case Kind::Point:
        return w == vec;
      case Kind::Ball: {
        const double d2 = (w - vec).squaredNorm();
        return closed ? d2 <= scalar * scalar : d2 < scalar * scalar;
      }
      case Kind::HalfSpace: {
        const double v = vec.dot(w);
        return closed ? v <= scalar : v < scalar;
      }
    }
    return false;
  }

  std::string describe() const;
};

inline std::string Obstacle::describe() const {
  auto vec_str = [](const RealVector& v) {
    std::string s = "(";
    for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
  };
  switch (kind) {
    case Kind::Point:
      return "point " + vec_str(vec);
    case Kind::Ball:
      return std::string(closed ? "closed" : "open") + " ball center " + vec_str(vec) + " radius " +
             std::to_string(scalar);
    case Kind::HalfSpace:
      return std::string("half-space normal ") + vec_str(vec) + (closed ? " <= " : " < ") + std::to_string(scalar);
  }
  return {};
}

/// Exact closed-form test that the slice does not meet the obstacle.
inline bool sphere_avoids(const ConeSliceSphere& s, const Obstacle& o) {
  switch (o.kind) {
    case Obstacle::Kind::Point:
      return slice_distance_sq(s, o.vec) > 0.0;
    case Obstacle::Kind::Ball: {
      const double d2 = slice_distance_sq(s, o.vec);
      const double r2 = o.scalar * o.scalar;
      return o.closed ? d2 > r2 : d2 >= r2;
    }
    case Obstacle::Kind::HalfSpace: {
      const double m = slice_min_linear(s, o.vec);
      return o.closed ? m > o.scalar : m >= o.scalar;
    }
  }
  return false;
}

namespace detail {

inline std::vector<Obstacle> complement_obstacles(const RegionExpr& u);

/// Decompose a region X (the removed set) into a union of obstacles.
inline std::vector<Obstacle> positive_obstacles(const RegionExpr& x) {
  std::vector<Obstacle> out;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, RegionExpr::Point>) {
          out.push_back(Obstacle::point(n.location));
        } else if constexpr (std::is_same_v<T, RegionExpr::Ball>) {
          out.push_back(Obstacle::ball(n.center, n.radius, false));
        } else if constexpr (std::is_same_v<T, RegionExpr::HalfSpace>) {
          out.push_back(Obstacle::below(-n.normal, -n.offset, false));
        } else if constexpr (std::is_same_v<T, RegionExpr::Union>) {
          for (const auto& c : n.children) {
            auto part = positive_obstacles(c);
            out.insert(out.end(), part.begin(), part.end());
          }
        } else if constexpr (std::is_same_v<T, RegionExpr::Complement>) {
          out = complement_obstacles(n.child.front());
        } else {
          throw UnsupportedError(
              "region outside the exact class: removed set must be a union of points, balls and half-spaces");
        }
      },
      x.node());
  return out;
}

/// Decompose R^n \ U into a union of obstacles.
inline std::vector<Obstacle> complement_obstacles(const RegionExpr& u) {
  std::vector<Obstacle> out;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, RegionExpr::All>) {
        } else if constexpr (std::is_same_v<T, RegionExpr::HalfSpace>) {
          out.push_back(Obstacle::below(n.normal, n.offset, true));
        } else if constexpr (std::is_same_v<T, RegionExpr::Intersection>) {
          for (const auto& c : n.children) {
            auto part = complement_obstacles(c);
            out.insert(out.end(), part.begin(), part.end());
          }
        } else if constexpr (std::is_same_v<T, RegionExpr::Complement>) {
          out = positive_obstacles(n.child.front());
        } else {
          throw UnsupportedError(
              "region outside the exact class: complement must be a finite union of points, closed balls and "
              "half-space complements");
        }
      },
      u.node());
  return out;
}

}  // namespace detail

/// The obstacle decomposition of R^n \ U, or UnsupportedError.
inline std::vector<Obstacle> obstacles_of(const RegionExpr& u) { return detail::complement_obstacles(u); }

enum class HullStatus { MemberCertified = 0, ConeFailsObstacle = 1, ConeOkConnectivityUnverified = 2 };

inline const char* to_string(HullStatus s) {
  switch (s) {
    case HullStatus::MemberCertified:
      return "MemberCertified";
    case HullStatus::ConeFailsObstacle:
      return "ConeFailsObstacle";
    case HullStatus::ConeOkConnectivityUnverified:
      return "ConeOkConnectivityUnverified";
  }
  return "?";
}

struct HullVerdict {
  HullStatus status = HullStatus::ConeOkConnectivityUnverified;
  std::optional<Obstacle> witness;
  std::optional<RealVector> witness_point;  // sampled mode only
  bool certified = true;                    // exact predicate; false for the sampling fallback
  std::string details;
};

/// First obstacle met by V(z) cap R^n, if any.
inline std::optional<Obstacle> cone_obstruction(const ComplexVector& z, const std::vector<Obstacle>& obstacles) {
  const ConeSliceSphere s = real_cone_slice(z);
  for (const auto& o : obstacles)
    if (!sphere_avoids(s, o)) return o;
  return std::nullopt;
}

namespace detail {

inline void check_even_dimension(Eigen::Index n) {
  if (n % 2 != 0) {
    throw DomainError("harmonic hull is not defined in odd dimension " + std::to_string(n) +
                      "; use the reduced hull (oddhull check) instead");
  }
  if (n < 4) throw DomainError("hull_membership needs n >= 4; use hull_membership_2d for n = 2");
}

inline void check_basepoint(const RegionExpr& u, const RealVector& x0) {
  require_same_dim(x0.size(), u.dimension(), "hull_membership basepoint");
  if (!u.contains(x0)) throw DomainError("basepoint is not in U");
}

}  // namespace detail

/// Pointwise harmonic hull query: exact cone test at z, then the same test at
/// K samples of the segment from the basepoint to z.
inline HullVerdict hull_membership(const ComplexVector& z, const RegionExpr& u, const RealVector& basepoint,
                                   int samples) {
  detail::check_even_dimension(z.size());
  require_same_dim(z.size(), u.dimension(), "hull_membership");
  detail::check_basepoint(u, basepoint);
  if (samples < 1) throw DomainError("hull_membership needs at least one path sample");
  const std::vector<Obstacle> obstacles = obstacles_of(u);

  HullVerdict v;
  if (auto hit = cone_obstruction(z, obstacles)) {
    v.status = HullStatus::ConeFailsObstacle;
    v.details = "real cone slice meets " + hit->describe();
    v.witness = std::move(hit);
    return v;
  }
  const ComplexVector x0 = complexify(basepoint);
  for (int k = 1; k <= samples; ++k) {
    const double t = static_cast<double>(k) / samples;
    if (auto hit = cone_obstruction(x0 + t * (z - x0), obstacles)) {
      v.status = HullStatus::ConeOkConnectivityUnverified;
      v.details = "segment sample t=" + std::to_string(t) + " meets " + hit->describe();
      return v;
    }
  }
  v.status = HullStatus::MemberCertified;
  v.details = "cone condition holds at z and at " + std::to_string(samples) + " segment samples";
  return v;
}

/// Uniform point on the slice sphere (or its center when degenerate).
template <class Rng>
RealVector sample_slice(const ConeSliceSphere& s, Rng& rng) {
  if (s.is_point()) return s.center;
  std::normal_distribution<double> gauss;
  const Eigen::Index n = s.center.size();
  for (;;) {
    RealVector g(n);
    for (Eigen::Index i = 0; i < n; ++i) g[i] = gauss(rng);
    g -= g.dot(s.axis) * s.axis;
    const double len = g.norm();
    if (len > 1e-12) return s.center + s.radius * g / len;
  }
}

/// Fallback for regions outside the exact class: the cone condition is
/// checked on random samples of each slice with exact region membership.
/// The result is never certified.
template <class Rng>
HullVerdict hull_membership_sampled(const ComplexVector& z, const RegionExpr& u, const RealVector& basepoint,
                                    int path_samples, int sphere_samples, Rng& rng) {
  detail::check_even_dimension(z.size());
  require_same_dim(z.size(), u.dimension(), "hull_membership_sampled");
  detail::check_basepoint(u, basepoint);

  auto first_outside = [&](const ComplexVector& w) -> std::optional<RealVector> {
    const ConeSliceSphere s = real_cone_slice(w);
    for (int i = 0; i < sphere_samples; ++i) {
      RealVector p = sample_slice(s, rng);
      if (!u.contains(p)) return p;
      if (s.is_point()) break;
    }
    return std::nullopt;
  };

  HullVerdict v;
  v.certified = false;
  if (auto p = first_outside(z)) {
    v.status = HullStatus::ConeFailsObstacle;
    v.witness_point = std::move(p);
    v.details = "sampled, not certified: slice sample outside U";
    return v;
  }
  const ComplexVector x0 = complexify(basepoint);
  for (int k = 1; k <= path_samples; ++k) {
    if (first_outside(x0 + (static_cast<double>(k) / path_samples) * (z - x0))) {
      v.status = HullStatus::ConeOkConnectivityUnverified;
      v.details = "sampled, not certified: segment sample fails";
      return v;
    }
  }
  v.status = HullStatus::MemberCertified;
  v.details = "sampled, not certified";
  return v;
}

/// U in R^2 = C assumed simply connected: z1 + i z2 in U and z1 - i z2 in conj(U).
inline bool hull_membership_2d(const ComplexVector& z, const RegionExpr& u) {
  if (z.size() != 2) throw DimensionMismatch("hull_membership_2d: expected a point of C^2");
  require_same_dim(u.dimension(), 2, "hull_membership_2d region");
  const Complex p = z[0] + I * z[1];
  const Complex q = std::conj(z[0] - I * z[1]);
  return u.contains(make_real({p.real(), p.imag()})) && u.contains(make_real({q.real(), q.imag()}));
}

/// A holomorphic function of one variable with an optional domain predicate.
struct HolomorphicFunction {
  std::function<Complex(Complex)> fn;
  std::function<bool(Complex)> domain;

  Complex operator()(Complex w) const {
    if (domain && !domain(w)) throw DomainError("argument outside the holomorphic function's domain");
    return fn(w);
  }
};

/// u~(z1, z2) = f(z1 + i z2) + g(z1 - i z2)
inline Complex extend_2d(const HolomorphicFunction& f, const HolomorphicFunction& g, const ComplexVector& z) {
  if (z.size() != 2) throw DimensionMismatch("extend_2d: expected a point of C^2");
  return f(z[0] + I * z[1]) + g(z[0] - I * z[1]);
}

/// r_x(z) = 1 / <z - x, z - x>^(m-1) in dimension 2m.
inline Complex newtonian_potential(const RealVector& x, const ComplexVector& z, const Tolerances& tol = {}) {
  require_same_dim(x.size(), z.size(), "newtonian_potential");
  if (z.size() % 2 != 0 || z.size() < 4) throw DomainError("newtonian_potential needs even dimension 2m >= 4");
  const int m = static_cast<int>(z.size() / 2);
  const Complex s = square(z - complexify(x));
  if (std::abs(s) <= tol.eq_tol) throw DomainError("newtonian_potential: z lies on the isotropic cone V(x)");
  Complex p{1.0, 0.0};
  for (int k = 0; k < m - 1; ++k) p *= s;
  return 1.0 / p;
}

}  // namespace harmhull::hull
