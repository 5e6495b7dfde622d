#pragma once

// Command-line front end. run() never writes to stdout itself; the caller
// prints CommandResult::text if set, otherwise the JSON payload.

#include "harmhull/bateman.hpp"
#include "harmhull/hull.hpp"
#include "harmhull/json_io.hpp"
#include "harmhull/lie_incidence.hpp"
#include "harmhull/odd_dim.hpp"
#include "harmhull/twistor.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace harmhull::cli {

using json_io::json;

enum class Status { ok, error };

struct CommandResult {
  Status status = Status::ok;
  json payload = json::object();
  std::string message;
  int exit_code = 0;
  std::string text;  // raw output (CSV, help) printed instead of the payload
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

struct UsageError : Error {
  using Error::Error;
};

namespace detail {

inline std::vector<double> csv_numbers(const std::string& text, std::size_t expected, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string(what) + ": '" + item + "' is not a number");
    }
  }
  if (expected != 0 && out.size() != expected) {
    throw UsageError(std::string(what) + " expects " + std::to_string(expected) + " comma-separated values");
  }
  return out;
}

inline int positive_int(double v, const char* what) {
  if (v < 1.0 || v != static_cast<double>(static_cast<int>(v))) {
    throw UsageError(std::string(what) + " must be a positive integer");
  }
  return static_cast<int>(v);
}

inline ComplexVector complex_arg(const std::string& text, Eigen::Index dim, const char* what) {
  ComplexVector v = json_io::complex_vector_from_json(json_io::parse(text));
  if (dim != 0 && v.size() != dim) {
    throw UsageError(std::string(what) + " must have " + std::to_string(dim) + " entries");
  }
  return v;
}

inline RealVector real_arg(const std::string& text, Eigen::Index dim, const char* what) {
  RealVector v = json_io::real_vector_from_json(json_io::parse(text));
  if (dim != 0 && v.size() != dim) {
    throw UsageError(std::string(what) + " must have " + std::to_string(dim) + " entries");
  }
  return v;
}

/// Inline JSON if the argument starts with '{', otherwise a file path.
inline RegionExpr load_region(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\n");
  if (first != std::string::npos && arg[first] == '{') return json_io::region_from_json(json_io::parse(arg));
  std::ifstream in(arg);
  if (!in) throw UsageError("cannot read domain file '" + arg + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return json_io::region_from_json(json_io::parse(buf.str()));
}

inline bateman::Contour contour_arg(const std::string& text) {
  const auto c = csv_numbers(text, 4, "--contour");
  return bateman::Contour({c[0], c[1]}, c[2], positive_int(c[3], "contour node count"));
}

inline json verdict_json(const hull::HullVerdict& v) {
  json out{{"status", hull::to_string(v.status)},
           {"code", static_cast<int>(v.status)},
           {"exact", v.certified},
           {"details", v.details}};
  out["witness"] = v.witness ? json(v.witness->describe()) : json(nullptr);
  out["witness_point"] = v.witness_point ? json_io::to_json(*v.witness_point) : json(nullptr);
  return out;
}

inline json real_matrix_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(json_io::to_json(RealVector(m.row(i).transpose())));
  return out;
}

// Options shared between the subcommand definitions and their handlers.
struct Options {
  std::string domain, point, basepoint, z, zp, x, twistor, w, loop = "0,1,0.1,400", contour = "0,0,1,64";
  std::string f, box = "-0.5,0.5", epsilon, rotation, origin, dir_u, dir_v, range = "-1,1", out;
  int samples = 64, sphere_samples = 2000, grid = 201, count = 100, m = 2, trials = 10;
  unsigned long long seed = 1;
  bool sampled = false, log = false;
};

inline json hull_check(const Options& o) {
  const RegionExpr u = load_region(o.domain);
  const ComplexVector z = complex_arg(o.point, u.dimension(), "--point");
  const RealVector x0 = real_arg(o.basepoint, u.dimension(), "--basepoint");
  if (o.sampled) {
    std::mt19937_64 rng(o.seed);
    return verdict_json(hull::hull_membership_sampled(z, u, x0, o.samples, o.sphere_samples, rng));
  }
  return verdict_json(hull::hull_membership(z, u, x0, o.samples));
}

/// Grid over z(a, b) = origin + a u + b v; rows follow b, columns follow a.
inline std::pair<json, std::string> hull_slice(const Options& o) {
  const RegionExpr u = load_region(o.domain);
  const Eigen::Index n = u.dimension();
  const ComplexVector origin = complex_arg(o.origin, n, "--origin");
  const ComplexVector du = complex_arg(o.dir_u, n, "--u");
  const ComplexVector dv = complex_arg(o.dir_v, n, "--v");
  const RealVector x0 = real_arg(o.basepoint, n, "--basepoint");
  const auto r = csv_numbers(o.range, 2, "--range");
  if (o.grid < 2) throw UsageError("--grid must be at least 2");
  if (!(r[1] > r[0])) throw UsageError("--range must be increasing");

  std::array<int, 3> counts{0, 0, 0};
  std::ostringstream csv;
  const double step = (r[1] - r[0]) / (o.grid - 1);
  for (int j = 0; j < o.grid; ++j) {
    for (int i = 0; i < o.grid; ++i) {
      const ComplexVector z = origin + (r[0] + i * step) * du + (r[0] + j * step) * dv;
      const int code = static_cast<int>(hull::hull_membership(z, u, x0, o.samples).status);
      ++counts[static_cast<std::size_t>(code)];
      csv << (i ? "," : "") << code;
    }
    csv << '\n';
  }
  json payload{{"rows", o.grid}, {"cols", o.grid}, {"counts", counts}};
  if (!o.out.empty()) {
    std::ofstream file(o.out);
    if (!file) throw UsageError("cannot write '" + o.out + "'");
    file << csv.str();
    payload["file"] = o.out;
    return {payload, {}};
  }
  return {payload, csv.str()};
}

inline json bateman_eval_cmd(const Options& o) {
  const auto f = bateman::integrand_from_spec(o.f);
  const auto v = bateman::bateman_eval(f, contour_arg(o.contour), complex_arg(o.point, 4, "--point"));
  return {{"value", json_io::to_json(v.value)}, {"pole_check_skipped", v.pole_check_skipped}};
}

inline json bateman_certify_cmd(const Options& o) {
  const auto f = bateman::integrand_from_spec(o.f);
  const auto b = csv_numbers(o.box, 2, "--box");
  if (!(b[1] > b[0])) throw UsageError("--box must satisfy lo < hi");
  if (o.count < 1) throw UsageError("--count must be positive");
  std::mt19937_64 rng(o.seed);
  const double worst =
      bateman::harmonicity_certificate(f, contour_arg(o.contour), bateman::Box::cube(b[0], b[1]), o.count, rng);
  return {{"max_residual", worst}, {"count", o.count}, {"pole_check_skipped", !f.is_rational()}};
}

inline json monodromy_cmd(const Options& o) {
  const auto l = csv_numbers(o.loop, 4, "--loop");
  const Complex c{l[0], l[1]};
  const double r = l[2];
  const int steps = positive_int(l[3], "loop step count");
  if (!(r > 0.0)) throw UsageError("loop radius must be positive");
  if (!o.log) return {{"multiplier", json_io::to_json(odd::newtonian_monodromy(odd::f_zeta_loop(c, r, steps)))}};

  // z1 + i z2 runs around the zeta loop, z1 - i z2 stays at 1; g = z . z.
  odd::PathSpec<ComplexVector> path{[c, r](double t) {
                                      const Complex zeta = c + r * std::polar(1.0, 2.0 * kPi * t);
                                      ComplexVector z(2);
                                      z << (zeta + 1.0) / 2.0, (zeta - 1.0) / (2.0 * I);
                                      return z;
                                    },
                                    steps};
  const std::function<Complex(const ComplexVector&)> g = [](const ComplexVector& z) { return square(z); };
  const ComplexVector start = path.sample(0);
  const odd::BranchValue<ComplexVector> init{std::log(g(start)), start, 0};
  const auto end = odd::continue_log(g, path, init);
  return {{"increment", json_io::to_json(end.value - init.value)}};
}

inline json oddhull_cmd(const Options& o) {
  const ComplexVector z = complex_arg(o.point, 3, "--point");
  if (!o.epsilon.empty() || !o.rotation.empty()) {
    if (o.epsilon.empty() || o.rotation.empty()) throw UsageError("--epsilon and --rotation go together");
    const double eps = csv_numbers(o.epsilon, 1, "--epsilon")[0];
    const auto rv = csv_numbers(o.rotation, 9, "--rotation");
    odd::Rotation3 a;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a(i, j) = rv[static_cast<std::size_t>(3 * i + j)];
    return {{"member", odd::curved_extension_member(z, eps, a)}, {"epsilon", eps}, {"rotation", real_matrix_json(a)}};
  }
  const bool reduced = odd::reduced_hull_member_3d(z, {odd::Vector3r::Zero()});
  const bool cone = odd::cone_complement_member_3d(z);
  json out{{"member", reduced}, {"cone_complement", cone}, {"witness", nullptr}};
  if (cone) {
    const auto w = odd::cover_witness(z);
    out["witness"] = {{"reduced_hull", w.reduced_hull},
                      {"epsilon", w.epsilon},
                      {"rotation", real_matrix_json(w.rotation)}};
  }
  return out;
}

inline json incidence_cmd(const Options& o) {
  const auto inc = twistor::lines_intersect(complex_arg(o.z, 4, "--z"), complex_arg(o.zp, 4, "--zp"));
  return {{"intersect", inc.intersect},
          {"point", inc.point ? json_io::to_json(inc.point->homogeneous()) : json(nullptr)},
          {"determinant", json_io::to_json(inc.determinant)}};
}

inline json tau_cmd(const Options& o) {
  if (o.twistor.empty() == o.x.empty()) throw UsageError("tau needs exactly one of --twistor or --x");
  if (!o.twistor.empty()) {
    const auto s = twistor::tau(ProjectivePoint(complex_arg(o.twistor, 4, "--twistor")));
    return {{"sphere", json_io::to_json(RealVector(s.coords()))}};
  }
  const RealVector x = real_arg(o.x, 4, "--x");
  const auto s = twistor::inverse_stereographic(x);
  return {{"sphere", json_io::to_json(RealVector(s.coords()))}};
}

inline json pluecker_cmd(const Options& o) {
  ProjectivePoint phi = [&] {
    if (!o.x.empty()) return twistor::pluecker_of_real(real_arg(o.x, 4, "--x"));
    if (o.z.empty() || o.w.empty()) throw UsageError("pluecker needs --x, or --z and --w");
    return twistor::pluecker_of_plane(ProjectivePoint(complex_arg(o.z, 4, "--z")),
                                      ProjectivePoint(complex_arg(o.w, 4, "--w")));
  }();
  return {{"phi", json_io::to_json(phi.homogeneous())},
          {"quadric_residual", json_io::to_json(twistor::quadric_residual(phi))},
          {"reality_residual", twistor::reality_residual(phi)}};
}

inline json pqp_sample_cmd(const Options& o) {
  if (o.count < 1) throw UsageError("--count must be positive");
  std::mt19937_64 rng(o.seed);
  double worst = 0.0;
  int members = 0;
  for (int k = 0; k < o.count; ++k) {
    const lie::SOElement g = lie::sample_P(o.m, rng) * lie::sample_Q(o.m, rng) * lie::sample_P(o.m, rng);
    const auto v = lie::pqp_member(g);
    worst = std::max(worst, std::abs(v.c11));
    members += v.member ? 1 : 0;
  }
  return {{"max_abs_c11", worst}, {"count", o.count}, {"members", members}};
}

inline json pqp_rank_cmd(const Options& o) {
  std::mt19937_64 rng(o.seed);
  const auto est = lie::pqp_rank_estimate(o.m, o.trials, rng);
  return {{"rank", est.rank}, {"expected", est.expected}, {"observed", est.observed}};
}

}  // namespace detail

/// argv[0] is the program name.
inline CommandResult run(const std::vector<std::string>& argv) {
  detail::Options o;
  CLI::App app{"Harmonic hull, twistor and Bateman toolkit", "harmhull"};
  app.require_subcommand(1);

  auto* hull_cmd = app.add_subcommand("hull", "Harmonic hull queries in even dimension");
  hull_cmd->require_subcommand(1);
  auto* hull_check = hull_cmd->add_subcommand("check", "Pointwise hull membership verdict");
  hull_check->add_option("--domain", o.domain, "Region JSON file (or inline JSON)")->required();
  hull_check->add_option("--point", o.point, "Query point of C^n as [[re,im],...]")->required();
  hull_check->add_option("--basepoint", o.basepoint, "Real basepoint in U as [x1,...]")->required();
  hull_check->add_option("--samples", o.samples, "Segment samples")->capture_default_str();
  hull_check->add_flag("--sampled", o.sampled, "Sampling fallback for regions outside the exact class");
  hull_check->add_option("--sphere-samples", o.sphere_samples, "Samples per slice sphere (--sampled)")->capture_default_str();
  hull_check->add_option("--seed", o.seed, "RNG seed (--sampled)")->capture_default_str();

  auto* hull_slice = hull_cmd->add_subcommand("slice", "CSV grid of verdict codes over a 2-parameter slice");
  hull_slice->add_option("--domain", o.domain, "Region JSON file (or inline JSON)")->required();
  hull_slice->add_option("--origin", o.origin, "Slice origin in C^n")->required();
  hull_slice->add_option("--u", o.dir_u, "First direction in C^n")->required();
  hull_slice->add_option("--v", o.dir_v, "Second direction in C^n")->required();
  hull_slice->add_option("--basepoint", o.basepoint, "Real basepoint in U")->required();
  hull_slice->add_option("--range", o.range, "Parameter range \"lo,hi\"")->capture_default_str();
  hull_slice->add_option("--grid", o.grid, "Grid points per axis")->capture_default_str();
  hull_slice->add_option("--samples", o.samples, "Segment samples")->capture_default_str();
  hull_slice->add_option("--out", o.out, "Write CSV here instead of stdout");

  auto* bat = app.add_subcommand("bateman", "Bateman contour integrals");
  bat->require_subcommand(1);
  auto* bat_eval = bat->add_subcommand("eval", "Evaluate u(z) by trapezoidal quadrature");
  bat_eval->add_option("--f", o.f, "Built-in name, name:params, or expression in s,t,zeta")->required();
  bat_eval->add_option("--contour", o.contour, "\"c_re,c_im,rho,N\"")->capture_default_str();
  bat_eval->add_option("--point", o.point, "Point of C^4 as [[re,im],...]")->required();
  auto* bat_cert = bat->add_subcommand("certify", "Finite-difference harmonicity check on a box");
  bat_cert->add_option("--f", o.f, "Built-in name, name:params, or expression")->required();
  bat_cert->add_option("--contour", o.contour, "\"c_re,c_im,rho,N\"")->capture_default_str();
  bat_cert->add_option("--box", o.box, "Cube \"lo,hi\" in R^4")->capture_default_str();
  bat_cert->add_option("--count", o.count, "Sample points")->capture_default_str();
  bat_cert->add_option("--seed", o.seed, "RNG seed")->capture_default_str();

  auto* mono = app.add_subcommand("monodromy", "Branch continuation around a zeta-plane loop");
  mono->add_option("--loop", o.loop, "\"center_re,center_im,radius,steps\"")->capture_default_str();
  mono->add_flag("--log", o.log, "Track log(z.z) on a loop in C^2 instead of 1/sqrt(z.z) in C^3");

  auto* odd_cmd = app.add_subcommand("oddhull", "Reduced hull in R^3 minus the origin");
  odd_cmd->require_subcommand(1);
  auto* odd_check = odd_cmd->add_subcommand("check", "Membership and covering witness");
  odd_check->add_option("--point", o.point, "Point of C^3")->required();
  odd_check->add_option("--epsilon", o.epsilon, "Curved extension parameter");
  odd_check->add_option("--rotation", o.rotation, "Nine comma-separated reals, row-major");

  auto* inc = app.add_subcommand("incidence", "Do two twistor lines meet?");
  inc->add_option("--z", o.z, "Point of C^4")->required();
  inc->add_option("--zp", o.zp, "Point of C^4")->required();

  auto* tau = app.add_subcommand("tau", "Fibration CP^3 -> S^4");
  tau->add_option("--twistor", o.twistor, "Homogeneous point of CP^3");
  tau->add_option("--x", o.x, "Real point of R^4 (inverse stereographic image)");

  auto* pl = app.add_subcommand("pluecker", "Pluecker coordinates of a twistor line");
  pl->add_option("--x", o.x, "Real point of R^4");
  pl->add_option("--z", o.z, "First spanning vector in C^4");
  pl->add_option("--w", o.w, "Second spanning vector in C^4");

  auto* pqp = app.add_subcommand("pqp", "PQP products in SO(2m+2, C)");
  pqp->require_subcommand(1);
  auto* pqp_sample = pqp->add_subcommand("sample", "Max |C11| over random p q p' products");
  pqp_sample->add_option("--m", o.m, "m")->capture_default_str();
  pqp_sample->add_option("--count", o.count, "Products")->capture_default_str();
  pqp_sample->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  auto* pqp_rank = pqp->add_subcommand("rank", "Numerical rank of the multiplication map");
  pqp_rank->add_option("--m", o.m, "m")->capture_default_str();
  pqp_rank->add_option("--trials", o.trials, "Trials")->capture_default_str();
  pqp_rank->add_option("--seed", o.seed, "RNG seed")->capture_default_str();

  CommandResult result;
  auto fail = [&](int code, const std::string& msg) {
    result.status = Status::error;
    result.exit_code = code;
    result.message = msg;
    result.payload = json{{"error", msg}};
    return result;
  };

  if (argv.size() > 1 && !argv[1].empty() && argv[1][0] != '-' && app.get_subcommand_no_throw(argv[1]) == nullptr) {
    return fail(kExitUsage, "unknown command '" + argv[1] + "'; see --help");
  }
  try {
    std::vector<std::string> args(argv.size() > 1 ? argv.begin() + 1 : argv.end(), argv.end());
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    result.text = app.help("", CLI::AppFormatMode::All);
    return result;
  } catch (const CLI::ParseError& e) {
    return fail(kExitUsage, e.what());
  }

  try {
    if (hull_check->parsed()) {
      result.payload = detail::hull_check(o);
    } else if (hull_slice->parsed()) {
      std::tie(result.payload, result.text) = detail::hull_slice(o);
    } else if (bat_eval->parsed()) {
      result.payload = detail::bateman_eval_cmd(o);
    } else if (bat_cert->parsed()) {
      result.payload = detail::bateman_certify_cmd(o);
    } else if (mono->parsed()) {
      result.payload = detail::monodromy_cmd(o);
    } else if (odd_check->parsed()) {
      result.payload = detail::oddhull_cmd(o);
    } else if (inc->parsed()) {
      result.payload = detail::incidence_cmd(o);
    } else if (tau->parsed()) {
      result.payload = detail::tau_cmd(o);
    } else if (pl->parsed()) {
      result.payload = detail::pluecker_cmd(o);
    } else if (pqp_sample->parsed()) {
      result.payload = detail::pqp_sample_cmd(o);
    } else if (pqp_rank->parsed()) {
      result.payload = detail::pqp_rank_cmd(o);
    } else {
      return fail(kExitUsage, "no command given");
    }
  } catch (const UsageError& e) {
    return fail(kExitUsage, e.what());
  } catch (const json_io::FormatError& e) {
    return fail(kExitUsage, e.what());
  } catch (const Error& e) {
    return fail(kExitDomain, e.what());
  }
  return result;
}

/// Serialized form of a payload: compact JSON, doubles in shortest round-trip form.
inline std::string render(const json& payload) { return payload.dump(); }

}  // namespace harmhull::cli
