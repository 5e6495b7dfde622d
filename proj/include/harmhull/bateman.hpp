#pragma once

// Contour-integral representation of harmonic functions on R^4 and their
// holomorphic extension to C^4:
//
//   u(z) = \oint f((z1 + i z2) + (i z3 + z4) zeta, (i z3 - z4) + (z1 - i z2) zeta, zeta) dzeta
//
// evaluated by the trapezoidal rule on a circle, with an independent residue
// calculus oracle for rational f and a finite-difference Laplacian.

#include "harmhull/core.hpp"
#include "harmhull/rational.hpp"

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace harmhull::bateman {

/// f(s, t, zeta). Rational integrands carry an expression tree so their poles
/// in zeta can be located; general callables cannot be pole-checked.
class BatemanIntegrand {
 public:
  using Callable = std::function<Complex(Complex, Complex, Complex)>;

  BatemanIntegrand(std::string name, RationalExpr expr) : name_(std::move(name)), expr_(std::move(expr)) {}
  BatemanIntegrand(std::string name, Callable fn) : name_(std::move(name)), fn_(std::move(fn)) {}

  const std::string& name() const { return name_; }
  bool is_rational() const { return expr_.has_value(); }
  const RationalExpr& expression() const {
    if (!expr_) throw UnsupportedError("integrand '" + name_ + "' is not rational");
    return *expr_;
  }

  Complex operator()(Complex s, Complex t, Complex zeta) const {
    return expr_ ? expr_->evaluate(s, t, zeta) : fn_(s, t, zeta);
  }

 private:
  std::string name_;
  std::optional<RationalExpr> expr_;
  Callable fn_;
};

/// Circle |zeta - center| = radius with `nodes` quadrature points.
struct Contour {
  Complex center{0.0, 0.0};
  double radius = 1.0;
  int nodes = 64;

  Contour() = default;
  Contour(Complex c, double r, int n) : center(c), radius(r), nodes(n) {
    if (!(r > 0.0)) throw DomainError("contour radius must be positive");
    if (n < 16) throw DomainError("contour needs at least 16 nodes");
  }

  Complex point(double angle) const { return center + radius * std::polar(1.0, angle); }
};

/// Coefficients of the affine maps zeta -> s(zeta) = s0 + s1 zeta, t(zeta) = t0 + t1 zeta.
struct AffineArguments {
  Complex s0, s1, t0, t1;
};

inline AffineArguments affine_arguments(const ComplexVector& z) {
  if (z.size() != 4) throw DimensionMismatch("Bateman integral needs a point of C^4");
  return {z[0] + I * z[1], I * z[2] + z[3], I * z[2] - z[3], z[0] - I * z[1]};
}

/// The integrand restricted to the line through z, as num/den in zeta.
inline RationalFunction restricted(const BatemanIntegrand& f, const ComplexVector& z) {
  const AffineArguments a = affine_arguments(z);
  return f.expression().substitute(a.s0, a.s1, a.t0, a.t1);
}

namespace detail {

/// Winding number of p around 0 along |zeta - c| = r, from at least `samples`
/// points, refining any segment whose argument jumps by more than pi/4.
/// Returns nullopt when p (nearly) vanishes on the circle.
inline std::optional<int> winding_number(const Polynomial& p, Complex c, double r, int samples) {
  double scale = 0.0;
  {
    double rk = 1.0;
    for (const auto& a : p.coeffs()) {
      scale += std::abs(a) * rk;
      rk *= std::max(1.0, std::abs(c) + r);
    }
  }
  const double floor = 1e-13 * scale;
  bool degenerate = false;

  const std::function<double(double, Complex, double, Complex, int)> sweep =
      [&](double a0, Complex v0, double a1, Complex v1, int depth) -> double {
    const double d = std::arg(v1 / v0);
    if (std::abs(d) <= kPi / 4 || depth > 30) return d;
    const double am = 0.5 * (a0 + a1);
    const Complex vm = p(c + r * std::polar(1.0, am));
    if (std::abs(vm) <= floor) {
      degenerate = true;
      return 0.0;
    }
    return sweep(a0, v0, am, vm, depth + 1) + sweep(am, vm, a1, v1, depth + 1);
  };

  double total = 0.0;
  double a_prev = 0.0;
  Complex v_prev = p(c + r);
  if (std::abs(v_prev) <= floor) return std::nullopt;
  for (int k = 1; k <= samples; ++k) {
    const double a = 2.0 * kPi * k / samples;
    const Complex v = p(c + r * std::polar(1.0, a));
    if (std::abs(v) <= floor) return std::nullopt;
    total += sweep(a_prev, v_prev, a, v, 0);
    if (degenerate) return std::nullopt;
    a_prev = a;
    v_prev = v;
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

}  // namespace detail

/// Relative width of the pole-free band demanded around the contour.
inline constexpr double kPoleMargin = 0.1;

/// Throws PoleError if the denominator of the restricted integrand has a zero
/// within kPoleMargin * radius of the contour. Zeros are counted in the
/// annulus by the argument principle, sampling the denominator at 4N points on
/// each bounding circle.
inline void check_pole_margin(const RationalFunction& rf, const Contour& gamma) {
  const Polynomial den = rf.den.trimmed();
  if (den.is_zero()) throw PoleError("integrand denominator vanishes identically on this line");
  if (den.degree() == 0) return;
  const int samples = 4 * gamma.nodes;
  const auto inner = detail::winding_number(den, gamma.center, (1.0 - kPoleMargin) * gamma.radius, samples);
  const auto outer = detail::winding_number(den, gamma.center, (1.0 + kPoleMargin) * gamma.radius, samples);
  if (!inner || !outer || *outer != *inner) {
    throw PoleError("integrand has a pole within " + std::to_string(kPoleMargin) +
                    " * radius of the contour");
  }
}

struct BatemanValue {
  Complex value;
  /// The integrand is not rational, so no pole bound was checked.
  bool pole_check_skipped = false;
};

/// Trapezoidal rule over N equispaced nodes of the circle.
inline BatemanValue bateman_eval(const BatemanIntegrand& f, const Contour& gamma, const ComplexVector& z) {
  const AffineArguments a = affine_arguments(z);
  BatemanValue out;
  if (f.is_rational()) {
    check_pole_margin(restricted(f, z), gamma);
  } else {
    out.pole_check_skipped = true;
  }
  Complex sum{0.0, 0.0};
  for (int k = 0; k < gamma.nodes; ++k) {
    const Complex e = std::polar(1.0, 2.0 * kPi * k / gamma.nodes);
    const Complex zeta = gamma.center + gamma.radius * e;
    sum += f(a.s0 + a.s1 * zeta, a.t0 + a.t1 * zeta, zeta) * e;
  }
  // dzeta = i r e^{i theta} dtheta, dtheta = 2 pi / N
  out.value = sum * (I * gamma.radius * 2.0 * kPi / static_cast<double>(gamma.nodes));
  return out;
}

inline BatemanValue bateman_eval(const BatemanIntegrand& f, const Contour& gamma, const RealVector& x) {
  return bateman_eval(f, gamma, complexify(x));
}

/// 2 pi i times the sum of residues at poles strictly inside the contour.
/// Poles come from the roots of the restricted denominator; simple and double
/// poles are supported.
inline Complex residue_oracle(const BatemanIntegrand& f, const Contour& gamma, const ComplexVector& z) {
  const RationalFunction rf = restricted(f, z);
  const Polynomial num = rf.num.trimmed();
  const Polynomial den = rf.den.trimmed();
  if (den.is_zero()) throw PoleError("integrand denominator vanishes identically on this line");

  struct Cluster {
    Complex where;
    int order;
  };
  std::vector<Cluster> poles;
  for (const Complex r : den.roots()) {
    const double join = 1e-6 * std::max(1.0, std::abs(r));
    bool merged = false;
    for (auto& c : poles) {
      if (std::abs(c.where - r) <= join) {
        c.where = (c.where * static_cast<double>(c.order) + r) / static_cast<double>(c.order + 1);
        ++c.order;
        merged = true;
        break;
      }
    }
    if (!merged) poles.push_back({r, 1});
  }

  Complex total{0.0, 0.0};
  for (const auto& pole : poles) {
    const double dist = std::abs(pole.where - gamma.center);
    if (std::abs(dist - gamma.radius) <= 1e-8 * gamma.radius) throw PoleError("pole on the contour");
    if (dist > gamma.radius) continue;
    if (pole.order == 1) {
      total += num(pole.where) / den.derivative()(pole.where);
    } else if (pole.order == 2) {
      const Polynomial rest = den.deflate(pole.where).deflate(pole.where);
      const Complex e = rest(pole.where);
      const Complex de = rest.derivative()(pole.where);
      total += (num.derivative()(pole.where) * e - num(pole.where) * de) / (e * e);
    } else {
      throw UnsupportedError("pole of order " + std::to_string(pole.order) + " is not supported");
    }
  }
  return 2.0 * kPi * I * total;
}

/// sum_i (u(x + h e_i) - 2 u(x) + u(x - h e_i)) / h^2
inline Complex fd_laplacian(const std::function<Complex(const RealVector&)>& u, const RealVector& x, double h) {
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  auto eval = [&](const RealVector& p) {
    try {
      return u(p);
    } catch (const std::exception& e) {
      throw DomainError(std::string("fd_laplacian: evaluation failed on the stencil: ") + e.what());
    }
  };
  const Complex center = eval(x);
  Complex acc{0.0, 0.0};
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    RealVector p = x;
    p[i] += h;
    const Complex up = eval(p);
    p[i] = x[i] - h;
    const Complex down = eval(p);
    acc += (up - 2.0 * center + down) / (h * h);
  }
  return acc;
}

/// Axis-aligned box in R^4.
struct Box {
  RealVector lo;
  RealVector hi;

  static Box cube(double lo, double hi, int n = 4) {
    return {RealVector::Constant(n, lo), RealVector::Constant(n, hi)};
  }
};

/// Largest |fd Laplacian of u| over `count` uniform samples in the box.
template <class Rng>
double harmonicity_certificate(const BatemanIntegrand& f, const Contour& gamma, const Box& box, int count, Rng& rng,
                               const Tolerances& tol = {}) {
  require_same_dim(box.lo.size(), 4, "harmonicity_certificate box");
  require_same_dim(box.hi.size(), 4, "harmonicity_certificate box");
  const auto u = [&](const RealVector& x) { return bateman_eval(f, gamma, x).value; };
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < count; ++k) {
    RealVector x(4);
    for (int i = 0; i < 4; ++i) x[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * unit(rng);
    worst = std::max(worst, std::abs(fd_laplacian(u, x, tol.fd_step)));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Built-in integrands.

inline BatemanIntegrand one_over_zeta() {
  return {"one_over_zeta", RationalExpr::constant(1.0) / RationalExpr::zeta()};
}
inline BatemanIntegrand s_over_zeta() { return {"s_over_zeta", RationalExpr::s() / RationalExpr::zeta()}; }
inline BatemanIntegrand t_over_zeta() { return {"t_over_zeta", RationalExpr::t() / RationalExpr::zeta()}; }
inline BatemanIntegrand st_over_zeta() {
  return {"st_over_zeta", RationalExpr::s() * RationalExpr::t() / RationalExpr::zeta()};
}
inline BatemanIntegrand s2_over_zeta() {
  return {"s2_over_zeta", RationalExpr::s().pow(2) / RationalExpr::zeta()};
}

/// s^k t^l / zeta with k + l <= 4.
inline BatemanIntegrand sktl_over_zeta(int k, int l) {
  if (k < 0 || l < 0 || k + l > 4) throw DomainError("sktl_over_zeta needs k, l >= 0 and k + l <= 4");
  return {"sktl_over_zeta:" + std::to_string(k) + "," + std::to_string(l),
          RationalExpr::s().pow(k) * RationalExpr::t().pow(l) / RationalExpr::zeta()};
}

/// 1 / (zeta - a): independent of z, nonzero only when a lies inside the contour.
inline BatemanIntegrand inv_zeta_minus(Complex a) {
  return {"inv_zeta_minus_a", RationalExpr::constant(1.0) / (RationalExpr::zeta() - RationalExpr::constant(a))};
}

/// 1 / ((s - a)(t - b) zeta)
inline BatemanIntegrand inv_s_minus_t_minus_zeta(Complex a, Complex b) {
  return {"inv_s_minus_a_t_minus_b_zeta",
          RationalExpr::constant(1.0) / ((RationalExpr::s() - RationalExpr::constant(a)) *
                                         (RationalExpr::t() - RationalExpr::constant(b)) * RationalExpr::zeta())};
}

/// exp(s) / zeta, a non-rational integrand (no pole bound available).
inline BatemanIntegrand exp_s_over_zeta() {
  return {"exp_s_over_zeta", BatemanIntegrand::Callable([](Complex s, Complex, Complex zeta) {
            return std::exp(s) / zeta;
          })};
}

/// The rational catalogue with the given parameters for the two
/// parametrized families.
inline std::vector<BatemanIntegrand> builtin_catalogue(Complex zeta_pole = {2.0, 0.0}, Complex a = {10.0, 0.0},
                                                       Complex b = {10.0, 0.0}) {
  std::vector<BatemanIntegrand> out{one_over_zeta(), s_over_zeta(), t_over_zeta(), st_over_zeta(), s2_over_zeta()};
  for (int k = 0; k <= 4; ++k)
    for (int l = 0; k + l <= 4; ++l) out.push_back(sktl_over_zeta(k, l));
  out.push_back(inv_zeta_minus(zeta_pole));
  out.push_back(inv_s_minus_t_minus_zeta(a, b));
  return out;
}

namespace detail {

inline std::vector<double> parse_params(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    try {
      out.push_back(std::stod(text.substr(pos, comma - pos)));
    } catch (const std::exception&) {
      throw DomainError("bad integrand parameter list '" + text + "'");
    }
    pos = comma + 1;
  }
  return out;
}

}  // namespace detail

/// Resolves a built-in name (optionally "name:p1,p2,...") or else parses a
/// rational expression in s, t, zeta.
inline BatemanIntegrand integrand_from_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::vector<double> p =
      colon == std::string::npos ? std::vector<double>{} : detail::parse_params(spec.substr(colon + 1));
  auto need = [&](std::size_t n) {
    if (p.size() != n) throw DomainError("integrand '" + name + "' expects " + std::to_string(n) + " parameters");
  };
  if (name == "one_over_zeta") return need(0), one_over_zeta();
  if (name == "s_over_zeta") return need(0), s_over_zeta();
  if (name == "t_over_zeta") return need(0), t_over_zeta();
  if (name == "st_over_zeta") return need(0), st_over_zeta();
  if (name == "s2_over_zeta") return need(0), s2_over_zeta();
  if (name == "exp_s_over_zeta") return need(0), exp_s_over_zeta();
  if (name == "sktl_over_zeta") {
    need(2);
    return sktl_over_zeta(static_cast<int>(p[0]), static_cast<int>(p[1]));
  }
  if (name == "inv_zeta_minus_a") {
    need(2);
    return inv_zeta_minus({p[0], p[1]});
  }
  if (name == "inv_s_minus_a_t_minus_b_zeta") {
    need(4);
    return inv_s_minus_t_minus_zeta({p[0], p[1]}, {p[2], p[3]});
  }
  return {spec, RationalExprParser::parse(spec)};
}

}  // namespace harmhull::bateman
