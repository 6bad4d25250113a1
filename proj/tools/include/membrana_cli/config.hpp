// Run configuration: one JSON document per run, validated before any solve.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "membrana/fields.hpp"
#include "membrana/geometry.hpp"

namespace membrana::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A coefficient is either a number or an expression in x (or r).
struct Coefficient {
  std::string source = "0";
  CoefField sample(const Geometry& g, Side side) const;
};

struct Tolerances {
  double eigen_rq = 1e-12;
  double eigen_residual = 1e-10;
  int eigen_max_iterations = 10000;
  double logistic = 1e-10;
  double near_gate = 1e-6;
  double h_bisection = 1e-10;
  double bound_slack = 1e-8;
  double max_fit_residual = 0.1;
  double resolution_factor = 10.0;
  double interior_delta = 0.2;
  double uniqueness = 1e-8;
};

struct RunConfig {
  GeometrySpec geometry;
  std::string problem = "membrane";  // or "scalar"
  Side side = Side::One;             // scalar problems
  RobinSpec robin;                   // scalar problems
  double gamma1 = 1.0;
  double gamma2 = 1.0;
  double d = 1.0;
  std::vector<double> d_list;
  Coefficient c1, c2;
  Coefficient beta1{"1"}, beta2{"1"};
  Coefficient alpha1{"1"}, alpha2{"1"};
  std::optional<double> lambda2;
  std::vector<double> lambda_list;
  std::vector<double> lambda1_list;
  std::vector<double> lambda2_list;
  std::vector<double> m_list;
  double large_m = 1e12;
  std::string sweep = "eigen";  // sweep-d: eigen | logistic; sweep-lambda: theta | lambda1
  std::string output = ".";
  std::uint64_t seed = 42;
  int cases = 100;
  int levels = 5;
  Tolerances tolerances;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

}  // namespace membrana::cli
