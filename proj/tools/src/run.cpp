#include "membrana_cli/run.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "membrana/asymptotics.hpp"
#include "membrana/checks.hpp"
#include "membrana/eigen.hpp"
#include "membrana/errors.hpp"
#include "membrana/logistic.hpp"
#include "membrana_cli/config.hpp"

namespace membrana::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Failed check suites unwind through here to pick exit code 3.
struct CheckFailure {};

class Outputs {
 public:
  explicit Outputs(const std::string& dir) : dir_(dir) { fs::create_directories(dir_); }

  template <class Writer>
  fs::path write(const std::string& name, Writer&& writer) const {
    const fs::path path = dir_ / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
    writer(os);
    return path;
  }

  void json(const std::string& name, const ordered_json& j) const {
    write(name, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  }

 private:
  fs::path dir_;
};

EigenOptions eigen_options(const Tolerances& t) {
  EigenOptions o;
  o.rq_tol = t.eigen_rq;
  o.residual_tol = t.eigen_residual;
  o.max_iterations = t.eigen_max_iterations;
  return o;
}

LogisticOptions logistic_options(const Tolerances& t) {
  LogisticOptions o;
  o.tol = t.logistic;
  o.near_gate = t.near_gate;
  o.eigen = eigen_options(t);
  return o;
}

SweepOptions sweep_options(const Tolerances& t) {
  SweepOptions o;
  o.resolution_factor = t.resolution_factor;
  o.interior_delta = t.interior_delta;
  o.logistic = logistic_options(t);
  return o;
}

MembraneLogistic membrane_logistic(const RunConfig& cfg, const Geometry& g) {
  MembraneLogistic p;
  p.d = cfg.d;
  p.beta1 = cfg.beta1.sample(g, Side::One);
  p.beta2 = cfg.beta2.sample(g, Side::Two);
  p.alpha1 = cfg.alpha1.sample(g, Side::One);
  p.alpha2 = cfg.alpha2.sample(g, Side::Two);
  p.gamma1 = cfg.gamma1;
  p.gamma2 = cfg.gamma2;
  return p;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

void write_table(const Outputs& out, const std::string& stem, const SweepTable& t) {
  out.write(stem + ".csv", [&](std::ostream& os) { write_sweep_csv(os, t); });
  out.write(stem + ".json", [&](std::ostream& os) { write_sweep_json(os, t); });
}

void print_table(std::ostream& os, const SweepTable& t) {
  os << std::setprecision(10);
  for (const auto& r : t.rows) {
    os << r.regime << ' ' << r.param << " value " << r.value << " deviation " << r.deviation
       << ' ' << r.status << '\n';
  }
  for (const auto& [k, v] : t.numbers) os << k << " = " << v << '\n';
}

int cmd_eig(const RunConfig& cfg, std::ostream& os) {
  const Geometry g = build_geometry(cfg.geometry);
  const Outputs out(cfg.output);
  const auto eo = eigen_options(cfg.tolerances);
  EigenPair e;
  if (cfg.problem == "scalar") {
    e = scalar_pair(cfg.d, cfg.c1.sample(g, cfg.side), cfg.robin, g, cfg.side, eo);
    out.write("eigenfunction.csv", [&](std::ostream& s) { write_field_csv(s, g, e.scalar()); });
  } else {
    e = membrane_pair(cfg.d, cfg.c1.sample(g, Side::One), cfg.c2.sample(g, Side::Two),
                      cfg.gamma1, cfg.gamma2, g, eo);
    out.write("eigenfunction.csv", [&](std::ostream& s) { write_fields_csv(s, g, e.pair()); });
  }
  ordered_json j;
  j["problem"] = cfg.problem;
  j["lambda1"] = e.value;
  j["iterations"] = e.iterations;
  j["residual"] = e.residual;
  out.json("eig.json", j);
  os << std::setprecision(15) << "Lambda1 = " << e.value << '\n';
  return kOk;
}

int cmd_logistic(const RunConfig& cfg, std::ostream& os) {
  const Geometry g = build_geometry(cfg.geometry);
  const Outputs out(cfg.output);
  const auto lo = logistic_options(cfg.tolerances);
  LogisticResult r;
  if (cfg.problem == "scalar") {
    ScalarLogistic p;
    p.d = cfg.d;
    p.side = cfg.side;
    p.robin = cfg.robin;
    p.beta = (cfg.side == Side::One ? cfg.beta1 : cfg.beta2).sample(g, cfg.side);
    p.alpha = (cfg.side == Side::One ? cfg.alpha1 : cfg.alpha2).sample(g, cfg.side);
    r = solve_logistic_scalar(p, g, lo);
    if (r.positive()) {
      out.write("logistic.csv", [&](std::ostream& s) { write_field_csv(s, g, r.scalar()); });
    }
  } else {
    r = solve_logistic_membrane(membrane_logistic(cfg, g), g, lo);
    if (r.positive()) {
      out.write("logistic.csv", [&](std::ostream& s) { write_fields_csv(s, g, r.pair()); });
    }
  }
  ordered_json j;
  j["problem"] = cfg.problem;
  j["status"] = r.positive() ? "positive" : "no_positive_solution";
  j["gate_eigenvalue"] = r.gate_eigenvalue;
  j["picard_iterations"] = r.picard_iterations;
  j["newton_iterations"] = r.newton_iterations;
  j["residual"] = r.residual;
  j["bound"] = r.bound;
  j["warnings"] = r.warnings;
  out.json("logistic.json", j);
  os << std::setprecision(15) << "gate eigenvalue = " << r.gate_eigenvalue << '\n';
  os << (r.positive() ? "positive solution" : "no positive solution") << '\n';
  for (const auto& w : r.warnings) os << "warning: " << w << '\n';
  return kOk;
}

int cmd_sweep_d(const RunConfig& cfg, std::ostream& os) {
  require(!cfg.d_list.empty(), "sweep-d needs 'd_list'");
  const Geometry g = build_geometry(cfg.geometry);
  const Outputs out(cfg.output);
  SweepTable t;
  if (cfg.sweep == "eigen") {
    t = sweep_eigen_d(cfg.d_list, cfg.c1.sample(g, Side::One), cfg.c2.sample(g, Side::Two),
                      cfg.gamma1, cfg.gamma2, g, sweep_options(cfg.tolerances));
  } else if (cfg.sweep == "logistic") {
    t = sweep_logistic_d(cfg.d_list, membrane_logistic(cfg, g), g, sweep_options(cfg.tolerances));
  } else {
    throw ConfigError("sweep-d: 'sweep' must be eigen or logistic");
  }
  write_table(out, "sweep_d", t);
  print_table(os, t);
  return kOk;
}

int cmd_sweep_lambda(const RunConfig& cfg, std::ostream& os) {
  const Geometry g = build_geometry(cfg.geometry);
  const Outputs out(cfg.output);
  const auto a1 = cfg.alpha1.sample(g, Side::One);
  const auto a2 = cfg.alpha2.sample(g, Side::Two);
  SweepTable t;
  if (cfg.sweep == "theta") {
    require(!cfg.lambda_list.empty(), "sweep-lambda theta needs 'lambda_list'");
    t = sweep_theta_over_lambda(cfg.lambda_list, a1, a2, cfg.gamma1, cfg.gamma2, g,
                                sweep_options(cfg.tolerances));
  } else if (cfg.sweep == "lambda1") {
    require(cfg.lambda2.has_value(), "sweep-lambda lambda1 needs 'lambda2'");
    require(!cfg.lambda1_list.empty(), "sweep-lambda lambda1 needs 'lambda1_list'");
    Lambda1Options o;
    o.sweep = sweep_options(cfg.tolerances);
    o.large_m = cfg.large_m;
    t = sweep_lambda1(*cfg.lambda2, cfg.lambda1_list, a1, a2, cfg.gamma1, cfg.gamma2, g, o);
  } else {
    throw ConfigError("sweep-lambda: 'sweep' must be theta or lambda1");
  }
  write_table(out, "sweep_lambda", t);
  print_table(os, t);
  return kOk;
}

int cmd_curve_h(const RunConfig& cfg, std::ostream& os) {
  require(!cfg.lambda2_list.empty(), "curve-h needs 'lambda2_list'");
  const Geometry g = build_geometry(cfg.geometry);
  const Outputs out(cfg.output);
  HOptions o;
  o.tol = cfg.tolerances.h_bisection;
  o.eigen = eigen_options(cfg.tolerances);
  const HCurve c = trace_H(cfg.lambda2_list, cfg.gamma1, cfg.gamma2, g, o);
  out.write("hcurve.csv", [&](std::ostream& s) { write_hcurve_csv(s, c); });
  out.write("hcurve.json", [&](std::ostream& s) { write_hcurve_json(s, c); });
  os << std::setprecision(12) << "sigma1 = " << c.sigma1 << "\nsigma2 = " << c.sigma2 << '\n';
  for (const auto& s : c.samples) os << s.lambda2 << ' ' << s.h << '\n';
  os << (c.strictly_decreasing ? "strictly decreasing" : "NOT strictly decreasing") << '\n';
  return kOk;
}

int cmd_large(const RunConfig& cfg, std::ostream& os) {
  require(cfg.lambda2.has_value(), "large needs 'lambda2'");
  require(!cfg.m_list.empty(), "large needs 'm_list'");
  const Geometry g = build_geometry(cfg.geometry);
  const Outputs out(cfg.output);
  LargeSolutionOptions o;
  o.d = cfg.d;
  o.interior_delta = cfg.tolerances.interior_delta;
  o.max_fit_residual = cfg.tolerances.max_fit_residual;
  o.logistic = logistic_options(cfg.tolerances);
  const LargeSolution s =
      approximate_large_solution(*cfg.lambda2, cfg.alpha2.sample(g, Side::Two), cfg.gamma2, g,
                                 cfg.m_list, o);
  out.write("large.csv", [&](std::ostream& f) {
    f << "m,coordinate,value\n";
    char buf[96];
    for (std::size_t k = 0; k < s.m.size(); ++k) {
      const auto& x = g.nodes(Side::Two);
      for (std::size_t i = 0; i < x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s.m[k], x[i], s.fields[k][i]);
        f << buf;
      }
    }
  });
  ordered_json j;
  j["exponent"] = s.fit.exponent;
  j["prefactor"] = s.fit.prefactor;
  j["fit_residual"] = s.fit.residual;
  j["fit_points"] = s.fit.points;
  j["monotone"] = s.monotone;
  j["monotone_violation"] = s.monotone_violation;
  j["interior_increments"] = s.interior_increments;
  out.json("large.json", j);
  os << std::setprecision(10) << "exponent = " << s.fit.exponent
     << "\nfit residual = " << s.fit.residual << "\nmonotone = " << s.monotone << '\n';
  for (double inc : s.interior_increments) os << "interior increment " << inc << '\n';
  return kOk;
}

int cmd_check(const RunConfig& cfg, const std::string& suite, std::ostream& os) {
  static const std::vector<std::string> kSuites = {"bounds", "mms", "picone", "uniqueness", "all"};
  if (std::find(kSuites.begin(), kSuites.end(), suite) == kSuites.end()) {
    throw ConfigError("unknown suite '" + suite + "'");
  }
  const bool all = suite == "all";
  const Geometry g = build_geometry(cfg.geometry);
  std::vector<CheckReport> reports;
  if (all || suite == "bounds") {
    BoundSuiteOptions o;
    o.slack = cfg.tolerances.bound_slack;
    reports.push_back(bound_suite(cfg.seed, cfg.cases, g, o));
  }
  if (all || suite == "mms") {
    reports.push_back(mms_convergence(cfg.levels, MmsProblem::ScalarRobin));
    reports.push_back(mms_convergence(cfg.levels, MmsProblem::Membrane));
  }
  if (all || suite == "picone") reports.push_back(picone_convergence(cfg.levels));
  if (all || suite == "uniqueness") {
    reports.push_back(uniqueness_probe(cfg.seed, std::min(cfg.cases, 20), g,
                                       cfg.tolerances.uniqueness));
  }
  const Outputs out(cfg.output);
  out.write("checks.json", [&](std::ostream& s) { write_reports_json(s, reports); });
  bool ok = true;
  os << std::setprecision(4);
  for (const auto& r : reports) {
    os << (r.passed ? "PASS " : "FAIL ") << r.name << " instances " << r.instances
       << " worst " << r.worst_violation << '\n';
    ok = ok && r.passed;
  }
  if (!ok) throw CheckFailure{};
  return kOk;
}

}  // namespace

void print_schema(std::ostream& os) {
  os << R"(All CSV files: UTF-8, '.' decimal separator, one header row, numbers
printed with 17 significant digits, missing values as "nan".

eigenfunction.csv, logistic.csv   (eig, logistic)
  coordinate  node position x (or r)
  side        1 or 2
  value       field value at the node; the interface node appears once per side

sweep_d.csv, sweep_lambda.csv     (sweep-d, sweep-lambda)
  param          swept parameter (d, lambda or lambda1)
  value          computed quantity (Lambda1, sup-norm or interior summary)
  target         limit target for the row's regime
  deviation      |value - target| in the measure stated by the regime
  regime         small_d | large_d | small_lambda | large_lambda | blowup | decay | intermediate | none
  alt_target     second candidate target where one exists, else nan
  alt_deviation  deviation from alt_target, else nan
  status         ok | no_positive_solution | near_gate | bound_violated
  sidecar .json: experiment name, numbers{...}, notes{...}; d values below the
  mesh-resolution limit are listed in notes.refused_d, not as rows

hcurve.csv                        (curve-h)
  lambda2   sample abscissa
  H         H(lambda2), the lambda1 at which the principal eigenvalue vanishes
  residual  |Lambda1(-H, -lambda2)|
  sidecar hcurve.json: sigma1, sigma2, strictly_decreasing, samples

large.csv                         (large)
  m           boundary value of the approximation
  coordinate  node position on side 2
  value       v_m at the node
  sidecar large.json: exponent, prefactor, fit_residual, fit_points, monotone,
  monotone_violation, interior_increments

checks.json                       (check)
  array of reports: name, instances, worst_violation, tolerance, passed,
  detail, parts[], series[], orders[]
)";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"membrana: membrane-coupled elliptic eigenvalue and logistic solvers"};
  app.require_subcommand(0, 1);
  bool schema = false;
  app.add_flag("--schema", schema, "Print the CSV column documentation and exit");

  struct Sub {
    CLI::App* app;
    std::string config;
    std::string output;
  };
  std::map<std::string, Sub> subs;
  const std::vector<std::pair<std::string, std::string>> names = {
      {"eig", "Principal eigenpair"},
      {"logistic", "Positive steady state of the logistic problem"},
      {"sweep-d", "Diffusion sweep with limit targets"},
      {"sweep-lambda", "Reaction-rate sweep with limit targets"},
      {"curve-h", "Trace the existence curve H"},
      {"large", "Large-solution approximation"},
      {"check", "Verification suites"}};
  for (const auto& [name, help] : names) {
    Sub s{app.add_subcommand(name, help), {}, {}};
    subs.emplace(name, s);
  }
  for (auto& [name, s] : subs) {
    auto* opt = s.app->add_option("-c,--config", s.config, "JSON run configuration");
    if (name != "check") opt->required();
    s.app->add_option("-o,--output", s.output, "Output directory (overrides the config)");
  }
  std::string suite = "all";
  std::uint64_t seed = 0;
  auto* check = subs.at("check").app;
  check->add_option("--suite", suite, "bounds | mms | picone | uniqueness | all");
  auto* seed_opt = check->add_option("--seed", seed, "Random seed");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kConfigError;
  }

  if (schema) {
    print_schema(out);
    return kOk;
  }
  if (app.get_subcommands().empty()) {
    err << app.help();
    return kConfigError;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  const Sub& sub = subs.at(name);

  try {
    RunConfig cfg = sub.config.empty() ? RunConfig{} : load_config(sub.config);
    if (!sub.output.empty()) cfg.output = sub.output;
    if (name == "eig") return cmd_eig(cfg, out);
    if (name == "logistic") return cmd_logistic(cfg, out);
    if (name == "sweep-d") return cmd_sweep_d(cfg, out);
    if (name == "sweep-lambda") {
      if (cfg.sweep == "eigen") cfg.sweep = cfg.lambda2 ? "lambda1" : "theta";
      return cmd_sweep_lambda(cfg, out);
    }
    if (name == "curve-h") return cmd_curve_h(cfg, out);
    if (name == "large") return cmd_large(cfg, out);
    if (*seed_opt) cfg.seed = seed;
    return cmd_check(cfg, suite, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const CheckFailure&) {
    err << "check suite failed\n";
    return kCheckFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kSolverError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kSolverError;
  }
}

}  // namespace membrana::cli
