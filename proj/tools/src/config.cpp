#include "membrana_cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "membrana/errors.hpp"
#include "membrana/expression.hpp"

namespace membrana::cli {

using nlohmann::json;

CoefField Coefficient::sample(const Geometry& g, Side side) const {
  const Expression e(source);
  return CoefField::sample(g, side, [&e](double x) { return e(x); });
}

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!known.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

double number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
  return v.get<double>();
}

std::vector<double> numbers(const json& v, const std::string& key) {
  if (!v.is_array()) throw ConfigError("'" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(number(x, key));
  return out;
}

std::size_t count(const json& v, const std::string& key) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError("'" + key + "' must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

Coefficient coefficient(const json& v, const std::string& key) {
  Coefficient c;
  if (v.is_number()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    c.source = os.str();
  } else if (v.is_string()) {
    c.source = v.get<std::string>();
  } else {
    throw ConfigError("'" + key + "' must be a number or an expression string");
  }
  try {
    (void)Expression(c.source);
  } catch (const Error& e) {
    throw ConfigError("'" + key + "': " + e.what());
  }
  return c;
}

GeometrySpec geometry(const json& v) {
  reject_unknown(v, {"kind", "dim", "bounds", "radii", "n"}, "geometry");
  const std::string kind = v.value("kind", "two_interval");
  if (!v.contains("n")) throw ConfigError("geometry: 'n' is required");
  const auto& n = v.at("n");
  if (!n.is_array() || n.size() != 2) throw ConfigError("geometry: 'n' must be [n1, n2]");
  const std::size_t n1 = count(n[0], "geometry.n");
  const std::size_t n2 = count(n[1], "geometry.n");
  if (kind == "two_interval") {
    if (v.contains("radii") || v.contains("dim")) {
      throw ConfigError("geometry: two_interval takes 'bounds', not 'radii' or 'dim'");
    }
    if (!v.contains("bounds")) throw ConfigError("geometry: 'bounds' is required");
    const auto b = numbers(v.at("bounds"), "geometry.bounds");
    if (b.size() != 3) throw ConfigError("geometry: 'bounds' must be [lower, interface, upper]");
    return GeometrySpec::two_interval(b[0], b[1], b[2], n1, n2);
  }
  if (kind == "concentric_radial") {
    if (v.contains("bounds")) throw ConfigError("geometry: concentric_radial takes 'radii'");
    if (!v.contains("radii") || !v.contains("dim")) {
      throw ConfigError("geometry: 'dim' and 'radii' are required");
    }
    const auto r = numbers(v.at("radii"), "geometry.radii");
    if (r.size() != 2) throw ConfigError("geometry: 'radii' must be [r1, r2]");
    if (!v.at("dim").is_number_integer()) throw ConfigError("geometry: 'dim' must be an integer");
    return GeometrySpec::concentric_radial(v.at("dim").get<int>(), r[0], r[1], n1, n2);
  }
  throw ConfigError("geometry: unknown kind '" + kind + "'");
}

BoundaryCondition boundary(const json& v, const std::string& where) {
  reject_unknown(v, {"g", "h"}, where);
  BoundaryCondition bc;
  if (v.contains("g")) bc.g = number(v.at("g"), where + ".g");
  if (v.contains("h")) bc.h = number(v.at("h"), where + ".h");
  return bc;
}

Tolerances tolerances(const json& v) {
  reject_unknown(v,
                 {"eigen_rq", "eigen_residual", "eigen_max_iterations", "logistic", "near_gate",
                  "h_bisection", "bound_slack", "max_fit_residual", "resolution_factor",
                  "interior_delta", "uniqueness"},
                 "tolerances");
  Tolerances t;
  auto positive = [&](const char* key, double& slot) {
    if (!v.contains(key)) return;
    slot = number(v.at(key), std::string("tolerances.") + key);
    if (!(slot > 0.0)) throw ConfigError(std::string("tolerances.") + key + " must be positive");
  };
  positive("eigen_rq", t.eigen_rq);
  positive("eigen_residual", t.eigen_residual);
  positive("logistic", t.logistic);
  positive("near_gate", t.near_gate);
  positive("h_bisection", t.h_bisection);
  positive("bound_slack", t.bound_slack);
  positive("max_fit_residual", t.max_fit_residual);
  positive("resolution_factor", t.resolution_factor);
  positive("interior_delta", t.interior_delta);
  positive("uniqueness", t.uniqueness);
  if (v.contains("eigen_max_iterations")) {
    t.eigen_max_iterations = static_cast<int>(count(v.at("eigen_max_iterations"), "eigen_max_iterations"));
  }
  return t;
}

const std::set<std::string> kTopLevel = {
    "geometry", "problem",     "side",         "robin",        "gamma",  "d",
    "d_list",   "c1",          "c2",           "c",            "beta1",  "beta2",
    "beta",     "alpha1",      "alpha2",       "alpha",        "lambda2", "lambda_list",
    "lambda1_list", "lambda2_list", "m_list",  "large_m",      "sweep",  "output",
    "seed",     "cases",       "levels",       "tolerances"};

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  reject_unknown(root, kTopLevel, "config");

  RunConfig cfg;
  try {
    if (root.contains("geometry")) cfg.geometry = geometry(root.at("geometry"));
    cfg.problem = root.value("problem", "membrane");
    if (cfg.problem != "membrane" && cfg.problem != "scalar") {
      throw ConfigError("'problem' must be membrane or scalar");
    }
    if (root.contains("side")) {
      const auto& s = root.at("side");
      if (s == 1) cfg.side = Side::One;
      else if (s == 2) cfg.side = Side::Two;
      else throw ConfigError("'side' must be 1 or 2");
    }
    if (root.contains("robin")) {
      const auto& r = root.at("robin");
      reject_unknown(r, {"lower", "upper"}, "robin");
      if (r.contains("lower")) cfg.robin.lower = boundary(r.at("lower"), "robin.lower");
      if (r.contains("upper")) cfg.robin.upper = boundary(r.at("upper"), "robin.upper");
    }
    if (root.contains("gamma")) {
      const auto g = numbers(root.at("gamma"), "gamma");
      if (g.size() != 2 || !(g[0] > 0.0) || !(g[1] > 0.0)) {
        throw ConfigError("'gamma' must be [gamma1, gamma2], both positive");
      }
      cfg.gamma1 = g[0];
      cfg.gamma2 = g[1];
    }
    if (root.contains("d")) {
      cfg.d = number(root.at("d"), "d");
      if (!(cfg.d > 0.0)) throw ConfigError("'d' must be positive");
    }
    if (root.contains("d_list")) cfg.d_list = numbers(root.at("d_list"), "d_list");
    // Scalar problems name their coefficient without a side index.
    auto coef = [&](const char* key, Coefficient& slot) {
      if (root.contains(key)) slot = coefficient(root.at(key), key);
    };
    coef("c1", cfg.c1);
    coef("c2", cfg.c2);
    coef("beta1", cfg.beta1);
    coef("beta2", cfg.beta2);
    coef("alpha1", cfg.alpha1);
    coef("alpha2", cfg.alpha2);
    if (root.contains("c")) cfg.c1 = cfg.c2 = coefficient(root.at("c"), "c");
    if (root.contains("beta")) cfg.beta1 = cfg.beta2 = coefficient(root.at("beta"), "beta");
    if (root.contains("alpha")) cfg.alpha1 = cfg.alpha2 = coefficient(root.at("alpha"), "alpha");
    if (root.contains("lambda2")) cfg.lambda2 = number(root.at("lambda2"), "lambda2");
    if (root.contains("lambda_list")) cfg.lambda_list = numbers(root.at("lambda_list"), "lambda_list");
    if (root.contains("lambda1_list")) cfg.lambda1_list = numbers(root.at("lambda1_list"), "lambda1_list");
    if (root.contains("lambda2_list")) cfg.lambda2_list = numbers(root.at("lambda2_list"), "lambda2_list");
    if (root.contains("m_list")) cfg.m_list = numbers(root.at("m_list"), "m_list");
    if (root.contains("large_m")) cfg.large_m = number(root.at("large_m"), "large_m");
    if (root.contains("sweep")) {
      if (!root.at("sweep").is_string()) throw ConfigError("'sweep' must be a string");
      cfg.sweep = root.at("sweep").get<std::string>();
    }
    if (root.contains("output")) {
      if (!root.at("output").is_string()) throw ConfigError("'output' must be a string");
      cfg.output = root.at("output").get<std::string>();
    }
    if (root.contains("seed")) cfg.seed = count(root.at("seed"), "seed");
    if (root.contains("cases")) cfg.cases = static_cast<int>(count(root.at("cases"), "cases"));
    if (root.contains("levels")) cfg.levels = static_cast<int>(count(root.at("levels"), "levels"));
    if (root.contains("tolerances")) cfg.tolerances = tolerances(root.at("tolerances"));
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  }

  // Geometry errors surface here rather than in the middle of a solve.
  try {
    (void)build_geometry(cfg.geometry);
    validate(cfg.robin);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace membrana::cli
