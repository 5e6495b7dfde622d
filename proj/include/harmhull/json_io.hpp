#pragma once

// JSON encodings: complex scalars as [re, im], vectors as arrays, matrices as
// nested arrays, regions as {"dimension": n, "region": <node>}.

#include "harmhull/core.hpp"
#include "harmhull/region.hpp"

#include "json.hpp"

#include <string>

namespace harmhull::json_io {

using json = nlohmann::json;

struct FormatError : Error {
  using Error::Error;
};

inline json to_json(Complex c) { return json::array({c.real(), c.imag()}); }

inline Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw FormatError("expected a complex number as [re, im], got " + j.dump());
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json to_json(const ComplexVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v[i]));
  return out;
}

inline json to_json(const RealVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

inline json to_json(const ComplexMatrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

inline ComplexVector complex_vector_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw FormatError("expected a non-empty array of [re, im] pairs");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = complex_from_json(j[i]);
  return v;
}

inline RealVector real_vector_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw FormatError("expected a non-empty array of numbers");
  RealVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw FormatError("expected a number, got " + j[i].dump());
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

inline json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
}

namespace detail {

inline RegionExpr region_node(const json& j, int n) {
  if (!j.is_object() || j.size() != 1) throw FormatError("region node must be an object with one key: " + j.dump());
  const auto& [key, body] = *j.items().begin();
  auto vec = [n](const json& v) {
    RealVector r = real_vector_from_json(v);
    if (r.size() != n) throw FormatError("region vector has wrong dimension: " + v.dump());
    return r;
  };
  auto children = [&](const json& arr) {
    if (!arr.is_array() || arr.empty()) throw FormatError("'" + key + "' expects a non-empty array");
    std::vector<RegionExpr> out;
    for (const auto& c : arr) out.push_back(region_node(c, n));
    return out;
  };
  auto number = [](const json& o, const char* field) {
    if (!o.contains(field) || !o[field].is_number()) throw FormatError(std::string("missing number '") + field + "'");
    return o[field].get<double>();
  };
  if (key == "all") return RegionExpr::all(n);
  if (key == "ball") return RegionExpr::ball(vec(body.at("center")), number(body, "radius"));
  if (key == "point") return RegionExpr::point(vec(body));
  if (key == "halfspace") return RegionExpr::halfspace(vec(body.at("normal")), number(body, "offset"));
  if (key == "union") return RegionExpr::union_of(children(body));
  if (key == "intersection") return RegionExpr::intersection_of(children(body));
  if (key == "complement") return RegionExpr::complement(region_node(body, n));
  throw FormatError("unknown region node '" + key + "'");
}

inline json region_node_json(const RegionExpr& r) {
  return std::visit(
      [&](const auto& n) -> json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, RegionExpr::All>) {
          return {{"all", true}};
        } else if constexpr (std::is_same_v<T, RegionExpr::Ball>) {
          return {{"ball", {{"center", to_json(n.center)}, {"radius", n.radius}}}};
        } else if constexpr (std::is_same_v<T, RegionExpr::Point>) {
          return {{"point", to_json(n.location)}};
        } else if constexpr (std::is_same_v<T, RegionExpr::HalfSpace>) {
          return {{"halfspace", {{"normal", to_json(n.normal)}, {"offset", n.offset}}}};
        } else if constexpr (std::is_same_v<T, RegionExpr::Union>) {
          json arr = json::array();
          for (const auto& c : n.children) arr.push_back(region_node_json(c));
          return {{"union", arr}};
        } else if constexpr (std::is_same_v<T, RegionExpr::Intersection>) {
          json arr = json::array();
          for (const auto& c : n.children) arr.push_back(region_node_json(c));
          return {{"intersection", arr}};
        } else {
          return {{"complement", region_node_json(n.child.front())}};
        }
      },
      r.node());
}

}  // namespace detail

inline RegionExpr region_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dimension") || !j.contains("region")) {
    throw FormatError("region file must have 'dimension' and 'region'");
  }
  if (!j["dimension"].is_number_integer() || j["dimension"].get<int>() < 1) {
    throw FormatError("'dimension' must be a positive integer");
  }
  try {
    return detail::region_node(j["region"], j["dimension"].get<int>());
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed region: ") + e.what());
  }
}

inline json to_json(const RegionExpr& r) {
  return {{"dimension", r.dimension()}, {"region", detail::region_node_json(r)}};
}

}  // namespace harmhull::json_io
