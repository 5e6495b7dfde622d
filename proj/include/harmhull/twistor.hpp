#pragma once

// Twistor lines in CP^3 attached to points of C^4, their incidence, the
// Pluecker embedding of Gr_2(C^4) into CP^5, the real structure theta and the
// fibration tau: CP^3 -> S^4.

#include "harmhull/core.hpp"

#include <array>
#include <optional>

namespace harmhull::twistor {

using Vector4r = Eigen::Matrix<double, 4, 1>;
using Vector5r = Eigen::Matrix<double, 5, 1>;
using Vector6r = Eigen::Matrix<double, 6, 1>;

/// A point of S^4 in R^5.
class SpherePoint {
 public:
  explicit SpherePoint(const Vector5r& coords, const Tolerances& tol = {}) : coords_(coords) {
    if (std::abs(coords_.squaredNorm() - 1.0) > tol.eq_tol) {
      throw DomainError("sphere point must have unit norm");
    }
  }
  const Vector5r& coords() const { return coords_; }
  double operator[](Eigen::Index i) const { return coords_[i]; }

 private:
  Vector5r coords_;
};

inline void require_dim4(const ComplexVector& z, const char* what) {
  if (z.size() != 4) throw DimensionMismatch(std::string(what) + ": expected a point of C^4");
}

/// The 2x2 matrix [[z1+iz2, iz3+z4],[iz3-z4, z1-iz2]] whose determinant is <z,z>.
inline Eigen::Matrix2cd line_matrix(const ComplexVector& z) {
  require_dim4(z, "line_matrix");
  Eigen::Matrix2cd m;
  m << z[0] + I * z[1], I * z[2] + z[3],
       I * z[2] - z[3], z[0] - I * z[1];
  return m;
}

/// [zeta1, zeta2] -> [(z1+iz2)zeta1 + (iz3+z4)zeta2, (iz3-z4)zeta1 + (z1-iz2)zeta2, zeta1, zeta2]
inline ProjectivePoint embed_line(const ComplexVector& z, Complex zeta1, Complex zeta2) {
  if (zeta1 == 0.0 && zeta2 == 0.0) throw DomainError("embed_line: [zeta1, zeta2] must be nonzero");
  const Eigen::Matrix2cd m = line_matrix(z);
  ComplexVector out(4);
  out << m(0, 0) * zeta1 + m(0, 1) * zeta2, m(1, 0) * zeta1 + m(1, 1) * zeta2, zeta1, zeta2;
  return ProjectivePoint(out);
}

class TwistorLine {
 public:
  explicit TwistorLine(ComplexVector base) : base_(std::move(base)) { require_dim4(base_, "TwistorLine"); }

  const ComplexVector& base() const { return base_; }
  ProjectivePoint at(Complex zeta1, Complex zeta2) const { return embed_line(base_, zeta1, zeta2); }

 private:
  ComplexVector base_;
};

struct Incidence {
  bool intersect = false;
  Complex determinant{};
  std::optional<ProjectivePoint> point;
  /// Homogeneous parameter of the common point (shared by both lines).
  std::optional<std::array<Complex, 2>> zeta;
};

/// L_z and L_z' meet iff <z-z', z-z'> = 0. The common point is the image of
/// the kernel of line_matrix(z - z').
inline Incidence lines_intersect(const ComplexVector& z, const ComplexVector& zp, const Tolerances& tol = {}) {
  require_dim4(z, "lines_intersect");
  require_dim4(zp, "lines_intersect");
  const ComplexVector w = z - zp;
  const Eigen::Matrix2cd k = line_matrix(w);
  Incidence result;
  result.determinant = k.determinant();
  if (std::abs(result.determinant) > tol.eq_tol) return result;

  result.intersect = true;
  // Kernel of a (numerically) rank <= 1 matrix: pivot on the larger row.
  const double n0 = k.row(0).norm();
  const double n1 = k.row(1).norm();
  std::array<Complex, 2> zeta{Complex{1.0, 0.0}, Complex{0.0, 0.0}};
  if (std::max(n0, n1) > tol.eq_tol) {
    const Eigen::Index r = n0 >= n1 ? 0 : 1;
    zeta = {-k(r, 1), k(r, 0)};
    const double s = std::hypot(std::abs(zeta[0]), std::abs(zeta[1]));
    zeta[0] /= s;
    zeta[1] /= s;
  }
  result.zeta = zeta;
  result.point = embed_line(z, zeta[0], zeta[1]);
  return result;
}

/// theta[Z1,Z2,Z3,Z4] = [-conj Z2, conj Z1, -conj Z4, conj Z3]
inline ProjectivePoint theta(const ProjectivePoint& z) {
  if (z.dim() != 4) throw DimensionMismatch("theta: expected a point of CP^3");
  ComplexVector out(4);
  out << -std::conj(z[1]), std::conj(z[0]), -std::conj(z[3]), std::conj(z[2]);
  return ProjectivePoint(out);
}

// Pluecker coordinates are ordered (phi12, phi13, phi14, phi23, phi24, phi34).
inline constexpr std::array<std::array<int, 2>, 6> kPlueckerPairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

inline ProjectivePoint pluecker_of_plane(const ProjectivePoint& z, const ProjectivePoint& w,
                                         const Tolerances& tol = {}) {
  if (z.dim() != 4 || w.dim() != 4) throw DimensionMismatch("pluecker_of_plane: expected points of CP^3");
  if (proj_equal(z, w, tol)) throw DomainError("pluecker_of_plane: points are linearly dependent");
  ComplexVector phi(6);
  for (std::size_t k = 0; k < kPlueckerPairs.size(); ++k) {
    const auto [i, j] = kPlueckerPairs[k];
    phi[static_cast<Eigen::Index>(k)] = z[i] * w[j] - z[j] * w[i];
  }
  return ProjectivePoint(phi);
}

inline ProjectivePoint pluecker_of_real(const Vector4r& x) {
  ComplexVector phi(6);
  phi << x.squaredNorm(), Complex(-x[3], -x[2]), Complex(x[0], x[1]), Complex(-x[0], x[1]),
      Complex(-x[3], x[2]), 1.0;
  return ProjectivePoint(phi);
}

/// phi12 phi34 - phi13 phi24 + phi14 phi23 on the given representative.
inline Complex quadric_form(const ComplexVector& phi) {
  if (phi.size() != 6) throw DimensionMismatch("quadric_form: expected 6 Pluecker coordinates");
  return phi[0] * phi[5] - phi[1] * phi[4] + phi[2] * phi[3];
}

/// Quadric form normalized by the squared Hermitian norm, so it is scale-free.
inline Complex quadric_residual(const ProjectivePoint& phi) {
  return quadric_form(phi.homogeneous()) / phi.homogeneous().squaredNorm();
}

/// RP^5 -> CP^5, on which the quadric restricts to xi0^2 - xi1^2 - ... - xi5^2.
inline ProjectivePoint rp5_embed(const Vector6r& xi) {
  if (xi.norm() == 0.0) throw DomainError("rp5_embed: xi must be nonzero");
  ComplexVector phi(6);
  phi << xi[0] - xi[5], Complex(-xi[4], -xi[3]), Complex(xi[1], xi[2]), Complex(-xi[1], xi[2]),
      Complex(-xi[4], xi[3]), xi[0] + xi[5];
  return ProjectivePoint(phi);
}

inline double lorentz_form(const Vector6r& xi) {
  return xi[0] * xi[0] - xi.tail<5>().squaredNorm();
}

/// The four conditions for a Pluecker point to be real (lie in the image of
/// rp5_embed). Returns the largest violation on the normalized representative.
inline double reality_residual(const ProjectivePoint& phi) {
  const ComplexVector p = phi.normalized();
  // Fix the phase so that phi12 (or phi34) is real before comparing.
  const Complex pivot = std::abs(p[0]) >= std::abs(p[5]) ? p[0] : p[5];
  const ComplexVector q = p * (std::abs(pivot) / pivot);
  double r = std::abs(std::conj(q[0]) - q[0]);
  r = std::max(r, std::abs(std::conj(q[1]) - q[4]));
  r = std::max(r, std::abs(std::conj(q[2]) + q[3]));
  r = std::max(r, std::abs(std::conj(q[5]) - q[5]));
  return r;
}

inline SpherePoint tau(const ProjectivePoint& z) {
  if (z.dim() != 4) throw DimensionMismatch("tau: expected a point of CP^3");
  const Complex z1 = z[0], z2 = z[1], z3 = z[2], z4 = z[3];
  const auto c = [](Complex v) { return std::conj(v); };
  const double denom = z.homogeneous().squaredNorm();
  const Complex v0 = z1 * c(z3) + z2 * c(z4) + z3 * c(z1) + z4 * c(z2);
  const Complex v1 = I * (-z1 * c(z3) + z2 * c(z4) + z3 * c(z1) - z4 * c(z2));
  const Complex v2 = I * (-z1 * c(z4) - z2 * c(z3) + z3 * c(z2) + z4 * c(z1));
  const Complex v3 = z1 * c(z4) - z2 * c(z3) - z3 * c(z2) + z4 * c(z1);
  const double v4 = -std::norm(z1) - std::norm(z2) + std::norm(z3) + std::norm(z4);
  Vector5r out;
  out << v0.real(), v1.real(), v2.real(), v3.real(), v4;
  return SpherePoint(out / denom);
}

/// x -> (2x, 1 - |x|^2) / (1 + |x|^2)
inline SpherePoint inverse_stereographic(const Vector4r& x) {
  const double n2 = x.squaredNorm();
  Vector5r out;
  out << 2.0 * x, 1.0 - n2;
  return SpherePoint(out / (1.0 + n2));
}

}  // namespace harmhull::twistor
