#pragma once

// Constructive description of open subsets of R^n with exact membership.

#include "harmhull/core.hpp"

#include <memory>
#include <variant>
#include <vector>

namespace harmhull {

class RegionExpr {
 public:
  struct All {};
  /// Open ball.
  struct Ball {
    RealVector center;
    double radius;
  };
  /// The single point {location}; meaningful as an obstacle via Complement.
  struct Point {
    RealVector location;
  };
  /// {w : normal . w > offset}
  struct HalfSpace {
    RealVector normal;
    double offset;
  };
  struct Union {
    std::vector<RegionExpr> children;
  };
  struct Intersection {
    std::vector<RegionExpr> children;
  };
  struct Complement {
    std::vector<RegionExpr> child;  // exactly one element
  };
  using Node = std::variant<All, Ball, Point, HalfSpace, Union, Intersection, Complement>;

  static RegionExpr all(int dimension) { return RegionExpr(dimension, All{}); }

  static RegionExpr ball(RealVector center, double radius) {
    if (!(radius > 0.0)) throw DomainError("ball radius must be positive");
    const int n = static_cast<int>(center.size());
    return RegionExpr(n, Ball{std::move(center), radius});
  }

  static RegionExpr point(RealVector location) {
    const int n = static_cast<int>(location.size());
    return RegionExpr(n, Point{std::move(location)});
  }

  static RegionExpr halfspace(RealVector normal, double offset) {
    if (normal.norm() == 0.0) throw DomainError("half-space normal must be nonzero");
    const int n = static_cast<int>(normal.size());
    return RegionExpr(n, HalfSpace{std::move(normal), offset});
  }

  static RegionExpr union_of(std::vector<RegionExpr> children) {
    const int n = common_dimension(children);
    return RegionExpr(n, Union{std::move(children)});
  }

  static RegionExpr intersection_of(std::vector<RegionExpr> children) {
    const int n = common_dimension(children);
    return RegionExpr(n, Intersection{std::move(children)});
  }

  static RegionExpr complement(RegionExpr child) {
    const int n = child.dimension();
    return RegionExpr(n, Complement{{std::move(child)}});
  }

  /// R^n minus the given region.
  static RegionExpr minus(int dimension, RegionExpr removed) {
    require_same_dim(dimension, removed.dimension(), "RegionExpr::minus");
    return complement(std::move(removed));
  }

  int dimension() const { return dimension_; }
  const Node& node() const { return *node_; }

  bool contains(const RealVector& w) const {
    require_same_dim(w.size(), dimension_, "RegionExpr::contains");
    return std::visit([&](const auto& n) { return contains_impl(n, w); }, *node_);
  }

 private:
  RegionExpr(int dimension, Node node)
      : dimension_(dimension), node_(std::make_shared<const Node>(std::move(node))) {
    if (dimension_ < 1) throw DimensionMismatch("region dimension must be positive");
  }

  static int common_dimension(const std::vector<RegionExpr>& children) {
    if (children.empty()) throw DomainError("union/intersection needs at least one child");
    const int n = children.front().dimension();
    for (const auto& c : children) require_same_dim(c.dimension(), n, "RegionExpr");
    return n;
  }

  static bool contains_impl(const All&, const RealVector&) { return true; }
  static bool contains_impl(const Ball& b, const RealVector& w) {
    return (w - b.center).squaredNorm() < b.radius * b.radius;
  }
  static bool contains_impl(const Point& p, const RealVector& w) { return w == p.location; }
  static bool contains_impl(const HalfSpace& h, const RealVector& w) { return h.normal.dot(w) > h.offset; }
  static bool contains_impl(const Union& u, const RealVector& w) {
    for (const auto& c : u.children)
      if (c.contains(w)) return true;
    return false;
  }
  static bool contains_impl(const Intersection& u, const RealVector& w) {
    for (const auto& c : u.children)
      if (!c.contains(w)) return false;
    return true;
  }
  static bool contains_impl(const Complement& c, const RealVector& w) { return !c.child.front().contains(w); }

  int dimension_;
  std::shared_ptr<const Node> node_;
};

}  // namespace harmhull
