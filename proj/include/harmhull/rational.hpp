#pragma once

// Polynomials in one complex variable and rational expression trees in
// (s, t, zeta), with substitution of affine-linear s(zeta), t(zeta).

#include "harmhull/core.hpp"

#include <Eigen/Eigenvalues>

#include <cctype>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace harmhull {

/// Coefficients in ascending order of degree.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Complex> coeffs) : c_(std::move(coeffs)) {}
  static Polynomial constant(Complex v) { return Polynomial({v}); }
  /// a + b * zeta
  static Polynomial linear(Complex a, Complex b) { return Polynomial({a, b}); }

  const std::vector<Complex>& coeffs() const { return c_; }

  /// Degree after discarding leading coefficients that are negligible relative
  /// to the largest one; -1 for the zero polynomial.
  int degree(double rel = 1e-14) const {
    const double scale = max_abs();
    for (int k = static_cast<int>(c_.size()) - 1; k >= 0; --k)
      if (std::abs(c_[k]) > rel * scale) return k;
    return -1;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : c_) m = std::max(m, std::abs(v));
    return m;
  }

  bool is_zero() const { return degree() < 0; }

  Polynomial trimmed(double rel = 1e-14) const {
    const int d = degree(rel);
    return Polynomial(std::vector<Complex>(c_.begin(), c_.begin() + (d + 1)));
  }

  Complex operator()(Complex x) const {
    Complex acc{0.0, 0.0};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return Polynomial({Complex{}});
    std::vector<Complex> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
    return Polynomial(std::move(d));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Complex> r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t k = 0; k < a.c_.size(); ++k) r[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) r[k] += b.c_[k];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator-(const Polynomial& a) {
    std::vector<Complex> r(a.c_);
    for (auto& v : r) v = -v;
    return Polynomial(std::move(r));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.c_.empty() || b.c_.empty()) return Polynomial({Complex{}});
    std::vector<Complex> r(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(r));
  }

  /// Quotient by (zeta - root), remainder discarded.
  Polynomial deflate(Complex root) const {
    const Polynomial p = trimmed();
    const auto& c = p.c_;
    if (c.size() <= 1) return Polynomial({Complex{}});
    std::vector<Complex> q(c.size() - 1);
    Complex carry = c.back();
    for (std::size_t k = c.size() - 1; k-- > 0;) {
      q[k] = carry;
      carry = c[k] + carry * root;
    }
    return Polynomial(std::move(q));
  }

  /// Roots via eigenvalues of the companion matrix.
  std::vector<Complex> roots() const {
    const Polynomial p = trimmed();
    const int d = p.degree();
    if (d <= 0) return {};
    const auto& c = p.c_;
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(d, d);
    for (int k = 1; k < d; ++k) companion(k, k - 1) = 1.0;
    for (int k = 0; k < d; ++k) companion(k, d - 1) = -c[k] / c[d];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
    std::vector<Complex> r(es.eigenvalues().data(), es.eigenvalues().data() + d);
    // One Newton step against the original coefficients.
    const Polynomial dp = p.derivative();
    for (auto& z : r) {
      const Complex slope = dp(z);
      if (std::abs(slope) > 0.0) z -= p(z) / slope;
    }
    return r;
  }

 private:
  std::vector<Complex> c_;
};

/// num / den, both polynomials in zeta.
struct RationalFunction {
  Polynomial num;
  Polynomial den;

  Complex operator()(Complex z) const { return num(z) / den(z); }
};

/// Rational expression tree in the three variables (s, t, zeta).
class RationalExpr {
 public:
  enum class Var { S, T, Zeta };
  enum class Op { Add, Sub, Mul, Div };

  static RationalExpr constant(Complex v) { return RationalExpr(Node{Const{v}}); }
  static RationalExpr s() { return RationalExpr(Node{Variable{Var::S}}); }
  static RationalExpr t() { return RationalExpr(Node{Variable{Var::T}}); }
  static RationalExpr zeta() { return RationalExpr(Node{Variable{Var::Zeta}}); }

  friend RationalExpr operator+(RationalExpr a, RationalExpr b) { return binary(Op::Add, std::move(a), std::move(b)); }
  friend RationalExpr operator-(RationalExpr a, RationalExpr b) { return binary(Op::Sub, std::move(a), std::move(b)); }
  friend RationalExpr operator*(RationalExpr a, RationalExpr b) { return binary(Op::Mul, std::move(a), std::move(b)); }
  friend RationalExpr operator/(RationalExpr a, RationalExpr b) { return binary(Op::Div, std::move(a), std::move(b)); }
  friend RationalExpr operator-(RationalExpr a) { return constant(0.0) - std::move(a); }

  RationalExpr pow(int k) const {
    if (k < 0) return constant(1.0) / pow(-k);
    RationalExpr r = constant(1.0);
    for (int i = 0; i < k; ++i) r = r * *this;
    return r;
  }

  Complex evaluate(Complex s_val, Complex t_val, Complex zeta_val) const {
    return std::visit(
        [&](const auto& n) -> Complex {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Const>) {
            return n.value;
          } else if constexpr (std::is_same_v<T, Variable>) {
            return n.var == Var::S ? s_val : n.var == Var::T ? t_val : zeta_val;
          } else {
            const Complex a = n.lhs->evaluate(s_val, t_val, zeta_val);
            const Complex b = n.rhs->evaluate(s_val, t_val, zeta_val);
            switch (n.op) {
              case Op::Add:
                return a + b;
              case Op::Sub:
                return a - b;
              case Op::Mul:
                return a * b;
              case Op::Div:
                return a / b;
            }
            return {};
          }
        },
        *node_);
  }

  /// Substitute s = s0 + s1 zeta, t = t0 + t1 zeta and collect num/den in zeta.
  RationalFunction substitute(Complex s0, Complex s1, Complex t0, Complex t1) const {
    return std::visit(
        [&](const auto& n) -> RationalFunction {
          using T = std::decay_t<decltype(n)>;
          const Polynomial one = Polynomial::constant(1.0);
          if constexpr (std::is_same_v<T, Const>) {
            return {Polynomial::constant(n.value), one};
          } else if constexpr (std::is_same_v<T, Variable>) {
            switch (n.var) {
              case Var::S:
                return {Polynomial::linear(s0, s1), one};
              case Var::T:
                return {Polynomial::linear(t0, t1), one};
              case Var::Zeta:
                return {Polynomial::linear(0.0, 1.0), one};
            }
            return {};
          } else {
            const RationalFunction a = n.lhs->substitute(s0, s1, t0, t1);
            const RationalFunction b = n.rhs->substitute(s0, s1, t0, t1);
            switch (n.op) {
              case Op::Add:
                return add(a, b, false);
              case Op::Sub:
                return add(a, b, true);
              case Op::Mul:
                return {a.num * b.num, a.den * b.den};
              case Op::Div:
                return {a.num * b.den, a.den * b.num};
            }
            return {};
          }
        },
        *node_);
  }

 private:
  struct Const {
    Complex value;
  };
  struct Variable {
    Var var;
  };
  struct Binary {
    Op op;
    std::shared_ptr<const RationalExpr> lhs;
    std::shared_ptr<const RationalExpr> rhs;
  };
  using Node = std::variant<Const, Variable, Binary>;

  explicit RationalExpr(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

  static RationalExpr binary(Op op, RationalExpr a, RationalExpr b) {
    return RationalExpr(Node{Binary{op, std::make_shared<const RationalExpr>(std::move(a)),
                                    std::make_shared<const RationalExpr>(std::move(b))}});
  }

  static bool is_one(const Polynomial& p) { return p.coeffs().size() == 1 && p.coeffs()[0] == Complex(1.0); }

  static RationalFunction add(const RationalFunction& a, const RationalFunction& b, bool subtract) {
    const Polynomial bn = subtract ? -b.num : b.num;
    if (is_one(a.den) && is_one(b.den)) return {a.num + bn, a.den};
    return {a.num * b.den + bn * a.den, a.den * b.den};
  }

  std::shared_ptr<const Node> node_;
};

/// Parses expressions such as "s*t/zeta", "1/((s-2)*(t-3)*zeta)", "(1+2*i)*s^2/zeta".
/// Identifiers: s, t, zeta (alias z), i. Exponents must be integer literals.
class RationalExprParser {
 public:
  static RationalExpr parse(std::string_view text) {
    RationalExprParser p(text);
    RationalExpr e = p.expr();
    p.skip_ws();
    if (p.pos_ != p.text_.size()) p.fail("unexpected trailing input");
    return e;
  }

 private:
  explicit RationalExprParser(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::string& why) const {
    throw DomainError("cannot parse integrand expression at offset " + std::to_string(pos_) + ": " + why);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RationalExpr expr() {
    RationalExpr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = lhs + term();
      } else if (accept('-')) {
        lhs = lhs - term();
      } else {
        return lhs;
      }
    }
  }

  RationalExpr term() {
    RationalExpr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = lhs * unary();
      } else if (accept('/')) {
        lhs = lhs / unary();
      } else {
        return lhs;
      }
    }
  }

  RationalExpr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  RationalExpr power() {
    RationalExpr base = primary();
    if (accept('^')) {
      skip_ws();
      bool negative = accept('-');
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("exponent must be an integer literal");
      const int k = std::stoi(std::string(text_.substr(start, pos_ - start)));
      return base.pow(negative ? -k : k);
    }
    return base;
  }

  RationalExpr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (accept('(')) {
      RationalExpr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      const double v = std::stod(std::string(text_.substr(pos_)), &used);
      pos_ += used;
      return RationalExpr::constant(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
      const std::string_view id = text_.substr(start, pos_ - start);
      if (id == "s") return RationalExpr::s();
      if (id == "t") return RationalExpr::t();
      if (id == "zeta" || id == "z") return RationalExpr::zeta();
      if (id == "i") return RationalExpr::constant(I);
      pos_ = start;
      fail("unknown identifier '" + std::string(id) + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace harmhull
