#pragma once

// Complex scalars and vectors, the symmetric bilinear form, projective points
// and the shared tolerance policy.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace harmhull {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr Complex I{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

/// Precondition or domain violation (singular point, pole, branch point...).
struct DomainError : Error {
  using Error::Error;
};

struct PoleError : DomainError {
  using DomainError::DomainError;
};

struct BranchError : DomainError {
  using DomainError::DomainError;
};

struct UnsupportedError : Error {
  using Error::Error;
};

/// Two independent computations of the same quantity disagreed.
struct InternalConsistencyError : Error {
  using Error::Error;
};

struct Tolerances {
  double eq_tol = 1e-10;
  double proj_tol = 1e-9;
  double fd_step = 1e-4;

  Tolerances() = default;
  Tolerances(double eq, double proj, double fd) : eq_tol(eq), proj_tol(proj), fd_step(fd) {
    if (!(eq > 0.0) || !(proj > 0.0) || !(fd > 0.0)) {
      throw DomainError("tolerances must be strictly positive");
    }
  }
};

inline ComplexVector make_vector(std::initializer_list<Complex> values) {
  ComplexVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const auto& c : values) v[i++] = c;
  return v;
}

inline RealVector make_real(std::initializer_list<double> values) {
  RealVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double c : values) v[i++] = c;
  return v;
}

inline void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                            " vs " + std::to_string(b) + ")");
  }
}

/// <z,w> = sum z_i w_i, no conjugation.
inline Complex bilinear(const ComplexVector& z, const ComplexVector& w) {
  require_same_dim(z.size(), w.size(), "bilinear");
  Complex sum{0.0, 0.0};
  for (Eigen::Index i = 0; i < z.size(); ++i) sum += z[i] * w[i];
  return sum;
}

/// <z,z>
inline Complex square(const ComplexVector& z) { return bilinear(z, z); }

/// Homogeneous coordinates up to nonzero complex scale.
class ProjectivePoint {
 public:
  explicit ProjectivePoint(ComplexVector homogeneous) : coords_(std::move(homogeneous)) {
    if (coords_.size() < 2) throw DimensionMismatch("projective point needs at least 2 coordinates");
    if (coords_.norm() == 0.0) throw DomainError("projective point cannot be the zero vector");
  }

  ProjectivePoint(std::initializer_list<Complex> values) : ProjectivePoint(make_vector(values)) {}

  const ComplexVector& homogeneous() const { return coords_; }
  Eigen::Index dim() const { return coords_.size(); }
  Complex operator[](Eigen::Index i) const { return coords_[i]; }

  /// Representative with unit Hermitian norm.
  ComplexVector normalized() const { return coords_ / coords_.norm(); }

 private:
  ComplexVector coords_;
};

/// All 2x2 minors of [P;Q] below proj_tol after normalizing both rows.
inline bool proj_equal(const ProjectivePoint& p, const ProjectivePoint& q, const Tolerances& tol = {}) {
  require_same_dim(p.dim(), q.dim(), "proj_equal");
  const ComplexVector a = p.normalized();
  const ComplexVector b = q.normalized();
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    for (Eigen::Index j = i + 1; j < a.size(); ++j) {
      if (std::abs(a[i] * b[j] - a[j] * b[i]) > tol.proj_tol) return false;
    }
  }
  return true;
}

inline RealVector real_part(const ComplexVector& z) { return z.real(); }
inline RealVector imag_part(const ComplexVector& z) { return z.imag(); }
inline ComplexVector complexify(const RealVector& x) { return x.cast<Complex>(); }

}  // namespace harmhull
