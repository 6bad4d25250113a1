#include "membrana/checks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "membrana/assembly.hpp"
#include "membrana/eigen.hpp"
#include "membrana/errors.hpp"
#include "membrana/logistic.hpp"

namespace membrana {

namespace {

// a0 + Σ_k a_k cos(kπt) + b_k sin(kπt), t the coordinate rescaled to [0, 1]
// over the whole domain.
struct TrigPoly {
  int degree = 0;
  std::array<double, 4> a{};
  std::array<double, 4> b{};
  double lo = 0.0;
  double hi = 1.0;

  double operator()(double x) const {
    const double t = (x - lo) / (hi - lo);
    double s = a[0];
    for (int k = 1; k <= degree; ++k) {
      s += a[k] * std::cos(k * std::numbers::pi * t) + b[k] * std::sin(k * std::numbers::pi * t);
    }
    return s;
  }
};

class Sampler {
 public:
  Sampler(std::uint64_t seed, const Geometry& g, const BoundSuiteOptions& opts)
      : rng_(seed), g_(g), opts_(opts) {}

  TrigPoly trig() {
    TrigPoly p;
    p.degree = std::uniform_int_distribution<int>(0, opts_.max_degree)(rng_);
    std::uniform_real_distribution<double> amp(-opts_.amplitude, opts_.amplitude);
    for (int k = 0; k <= p.degree; ++k) {
      p.a[k] = amp(rng_);
      p.b[k] = amp(rng_);
    }
    p.lo = g_.spec().lower;
    p.hi = g_.spec().upper;
    return p;
  }

  CoefField field(Side side) { return CoefField::sample(g_, side, trig()); }

  CoefField positive_field(Side side) {
    const auto p = trig();
    return CoefField::sample(g_, side, [&](double x) { return std::exp(p(x) / 10.0); });
  }

  double log_uniform(double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log10(lo), std::log10(hi));
    return std::pow(10.0, u(rng_));
  }

  MembraneLogistic logistic() {
    MembraneLogistic p;
    p.d = log_uniform(1e-2, 1e2);
    p.gamma1 = log_uniform(0.1, 10.0);
    p.gamma2 = log_uniform(0.1, 10.0);
    p.beta1 = field(Side::One);
    p.beta2 = field(Side::Two);
    p.alpha1 = positive_field(Side::One);
    p.alpha2 = positive_field(Side::Two);
    return p;
  }

 private:
  std::mt19937_64 rng_;
  const Geometry& g_;
  BoundSuiteOptions opts_;
};

void note(CheckPart& part, double violation) {
  ++part.instances;
  part.worst_violation = std::max(part.worst_violation, violation);
}

double relative(double excess, double bound) { return excess / std::max(1.0, std::abs(bound)); }

void finish(CheckReport& r) {
  for (auto& p : r.parts) {
    if (p.instances == 0) p.worst_violation = 0.0;
  }
  r.passed = true;
  r.worst_violation = -std::numeric_limits<double>::infinity();
  for (auto& p : r.parts) {
    p.passed = p.worst_violation <= p.tolerance;
    r.passed = r.passed && p.passed;
    r.worst_violation = std::max(r.worst_violation, p.worst_violation);
  }
  if (r.parts.empty()) r.worst_violation = 0.0;
}

std::vector<double> log2_ratios(const std::vector<double>& e) {
  std::vector<double> out;
  for (std::size_t k = 1; k < e.size(); ++k) out.push_back(std::log2(e[k - 1] / e[k]));
  return out;
}

}  // namespace

void write_reports_json(std::ostream& os, const std::vector<CheckReport>& reports) {
  nlohmann::ordered_json all = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["instances"] = r.instances;
    j["worst_violation"] = r.worst_violation;
    j["tolerance"] = r.tolerance;
    j["passed"] = r.passed;
    if (!r.detail.empty()) j["detail"] = r.detail;
    if (!r.parts.empty()) {
      auto& parts = j["parts"] = nlohmann::ordered_json::array();
      for (const auto& p : r.parts) {
        parts.push_back({{"name", p.name},
                         {"instances", p.instances},
                         {"worst_violation", p.worst_violation},
                         {"tolerance", p.tolerance},
                         {"passed", p.passed}});
      }
    }
    if (!r.series.empty()) j["series"] = r.series;
    if (!r.orders.empty()) j["orders"] = r.orders;
    all.push_back(j);
  }
  os << all.dump(2) << '\n';
}

double picone_residual(const CoefField& u, const CoefField& v, PiconeKind kind,
                       const RobinSpec& robin, const Geometry& g, Side side) {
  (void)kind;  // f = id is the only kernel: f(q) = q, f'(q) = 1.
  check_field(u, g, side);
  check_field(v, g, side);
  for (double x : u.values) {
    if (!(x > 0.0)) throw Error(ErrorCode::NonPositiveU, "Picone identity needs u > 0");
  }
  RobinSpec coefficients = robin;
  coefficients.lower.h = coefficients.upper.h = 0.0;
  const auto op = assemble_scalar(1.0, CoefField::constant(g, side, 0.0), coefficients, g, side);
  const auto& x = g.nodes(side);
  const auto& mom = g.element_moments(side);

  // Σᵢ qᵢ(uᵢ(Kv)ᵢ − vᵢ(Ku)ᵢ) with q = v/u collapses edge by edge to
  // k_e uᵢuⱼ(qᵢ − qⱼ)²; Robin rows cancel. Summing in this form avoids the
  // cancellation of the two operator actions when v is close to a multiple
  // of u.
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t e = 0; e + 1 < x.size(); ++e) {
    const double ui = u.values[e], uj = u.values[e + 1];
    const double qi = v.values[e] / ui, qj = v.values[e + 1] / uj;
    double dq = qj - qi;
    if (std::abs(dq) <= 8.0 * std::numeric_limits<double>::epsilon() *
                             std::max(std::abs(qi), std::abs(qj))) {
      dq = 0.0;
    }
    const double k = -op.A.off()[e];
    const double h = x[e + 1] - x[e];
    lhs += k * ui * uj * dq * dq;
    rhs += (ui * ui * mom[e].ii + 2.0 * ui * uj * mom[e].ij + uj * uj * mom[e].jj) *
           (dq / h) * (dq / h);
  }
  return std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + 1e-30);
}

CheckReport bound_suite(std::uint64_t seed, int n_cases, const Geometry& g,
                        const BoundSuiteOptions& opts) {
  if (n_cases < 1) throw Error(ErrorCode::InvalidArgument, "n_cases must be >= 1");
  CheckReport r;
  r.name = "bounds";
  r.tolerance = opts.slack;
  constexpr double none = -std::numeric_limits<double>::infinity();
  r.parts = {{"eigen_range", 0, none, opts.slack, true},
             {"eigen_weighted_mean", 0, none, opts.slack, true},
             {"logistic_apriori", 0, none, opts.slack, true},
             {"sandwich", 0, none, opts.slack, true}};
  auto& range = r.parts[0];
  auto& mean = r.parts[1];
  auto& apriori = r.parts[2];
  auto& sandwich = r.parts[3];
  int positive = 0;

  Sampler s(seed, g, opts);
  for (int k = 0; k < n_cases; ++k) {
    const auto p = s.logistic();
    const auto c1 = s.field(Side::One);
    const auto c2 = s.field(Side::Two);
    const double lam = lambda1(p.d, c1, c2, p.gamma1, p.gamma2, g);
    const auto e1 = extrema(c1), e2 = extrema(c2);
    const double lo = std::min(e1.lower, e2.lower), hi = std::max(e1.upper, e2.upper);
    note(range, std::max(relative(lo - lam, lo), relative(lam - hi, hi)));
    const double wm = (p.gamma2 * integrate(c1, g) + p.gamma1 * integrate(c2, g)) /
                      (p.gamma2 * g.volume(Side::One) + p.gamma1 * g.volume(Side::Two));
    note(mean, relative(lam - wm, wm));

    const auto res = solve_logistic_membrane(p, g);
    std::array<std::vector<double>, 2> w;
    for (Side side : {Side::One, Side::Two}) {
      ScalarLogistic sp;
      sp.d = p.d;
      sp.beta = side == Side::One ? p.beta1 : p.beta2;
      sp.alpha = side == Side::One ? p.alpha1 : p.alpha2;
      sp.robin = membrane_robin(side, side == Side::One ? p.gamma1 : p.gamma2);
      sp.side = side;
      const auto ws = solve_logistic_scalar(sp, g);
      w[Geometry::index(side)] =
          ws.positive() ? ws.solution : std::vector<double>(g.node_count(side), 0.0);
    }
    if (!res.positive()) {
      // A positive standalone solution would be a subsolution of the coupled
      // problem, contradicting nonexistence.
      const bool any = norm_inf(w[0]) > 0.0 || norm_inf(w[1]) > 0.0;
      note(sandwich, any ? 1.0 : -1.0);
      continue;
    }
    ++positive;
    const auto u = res.pair();
    const double bound = res.bound;
    double excess = -std::numeric_limits<double>::infinity();
    for (double v : u.u1.values) excess = std::max(excess, v - bound);
    for (double v : u.u2.values) excess = std::max(excess, v - bound);
    note(apriori, relative(excess, bound));
    double below = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < u.u1.size(); ++i) below = std::max(below, w[0][i] - u.u1[i]);
    for (std::size_t i = 0; i < u.u2.size(); ++i) below = std::max(below, w[1][i] - u.u2[i]);
    note(sandwich, std::max(relative(below, bound), relative(excess, bound)));
  }
  r.instances = n_cases;
  finish(r);
  std::ostringstream os;
  os << "seed " << seed << ", " << positive << " of " << n_cases
     << " instances had a positive logistic solution";
  r.detail = os.str();
  return r;
}

namespace {

double max_error(const Geometry& g, const CoefField& uh, const std::function<double(double)>& u) {
  const auto& x = g.nodes(uh.side);
  double e = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) e = std::max(e, std::abs(uh[i] - u(x[i])));
  return e;
}

double mms_error(MmsProblem problem, const Geometry& g) {
  constexpr double pi = std::numbers::pi;
  if (problem == MmsProblem::ScalarRobin) {
    // u = cos(πx) + (x−1)² on (0,1): Neumann at 1, ∂ₙu + g u = 2 + 2g at 0.
    const double c = 1.0, gr = 1.0;
    auto u = [](double x) { return std::cos(pi * x) + (x - 1.0) * (x - 1.0); };
    auto f = [&](double x) { return pi * pi * std::cos(pi * x) - 2.0 + c * u(x); };
    RobinSpec robin;
    robin.lower = {gr, 2.0 + 2.0 * gr};
    const auto op =
        assemble_scalar(1.0, CoefField::constant(g, Side::One, c), robin, g, Side::One);
    return max_error(g, solve_forced(op, CoefField::sample(g, Side::One, f)), u);
  }
  // Ω₁ = (0, 1/2), Ω₂ = (1/2, 1). u₂ = cos(πx) + 2 is Neumann-compatible at
  // 1; u₁ = p + q x² + cos(2πx) is Neumann at 0 and p, q are fixed by the two
  // membrane conditions at 1/2: u₁′ = γ₁(u₂ − u₁), −u₂′ = γ₂(u₁ − u₂).
  const double g1 = 1.0, g2 = 2.0, c = 1.0;
  const double q = -g1 * pi / g2;
  const double p = 3.0 + pi / g2 - q / 4.0;
  auto u1 = [&](double x) { return p + q * x * x + std::cos(2.0 * pi * x); };
  auto u2 = [&](double x) { return std::cos(pi * x) + 2.0; };
  auto f1 = [&](double x) { return -2.0 * q + 4.0 * pi * pi * std::cos(2.0 * pi * x) + c * u1(x); };
  auto f2 = [&](double x) { return pi * pi * std::cos(pi * x) + c * u2(x); };
  const auto op = assemble_membrane(1.0, CoefField::constant(g, Side::One, c),
                                    CoefField::constant(g, Side::Two, c), g1, g2, g);
  const auto uh = solve_forced(
      op, PairField{CoefField::sample(g, Side::One, f1), CoefField::sample(g, Side::Two, f2)});
  return std::max(max_error(g, uh.u1, u1), max_error(g, uh.u2, u2));
}

void convergence_verdict(CheckReport& r, double lo, double hi) {
  r.orders = log2_ratios(r.series);
  bool decreasing = true;
  for (std::size_t k = 1; k < r.series.size(); ++k) {
    decreasing = decreasing && r.series[k] < r.series[k - 1];
  }
  const double finest = r.orders.empty() ? 0.0 : r.orders.back();
  r.worst_violation = std::max(lo - finest, finest - hi);
  r.passed = decreasing && finest >= lo && finest <= hi;
  std::ostringstream os;
  os << "finest observed order " << finest << (decreasing ? "" : ", series not decreasing");
  r.detail = os.str();
}

}  // namespace

CheckReport mms_convergence(int levels, MmsProblem problem) {
  if (levels < 3) throw Error(ErrorCode::InvalidArgument, "mms needs at least 3 levels");
  CheckReport r;
  r.name = problem == MmsProblem::ScalarRobin ? "mms_scalar_robin" : "mms_membrane";
  r.tolerance = 0.2;
  r.instances = levels;
  Geometry g = problem == MmsProblem::ScalarRobin
                   ? build_geometry(GeometrySpec::two_interval(0.0, 1.0, 2.0, 17, 3))
                   : build_geometry(GeometrySpec::two_interval(0.0, 0.5, 1.0, 9, 9));
  for (int k = 0; k < levels; ++k) {
    r.series.push_back(mms_error(problem, g));
    g = refine(g);
  }
  convergence_verdict(r, 1.8, 2.2);
  return r;
}

CheckReport picone_convergence(int levels) {
  if (levels < 3) throw Error(ErrorCode::InvalidArgument, "picone needs at least 3 levels");
  CheckReport r;
  r.name = "picone";
  r.tolerance = 1.8;
  r.instances = levels;
  Geometry g = build_geometry(GeometrySpec::two_interval(0.0, 1.0, 2.0, 33, 3));
  RobinSpec robin;
  robin.lower = {1.0, 0.0};
  for (int k = 0; k < levels; ++k) {
    ScalarLogistic p;
    p.d = 1.0;
    p.beta = CoefField::constant(g, Side::One, 3.0);
    p.alpha = CoefField::constant(g, Side::One, 1.0);
    p.robin = robin;
    p.side = Side::One;
    const auto u = solve_logistic_scalar(p, g).scalar();
    const auto v =
        scalar_pair(1.0, CoefField::constant(g, Side::One, 0.0), robin, g, Side::One).scalar();
    r.series.push_back(picone_residual(u, v, PiconeKind::Identity, robin, g, Side::One));
    g = refine(g);
  }
  convergence_verdict(r, 1.8, std::numeric_limits<double>::infinity());
  return r;
}

CheckReport uniqueness_probe(std::uint64_t seed, int n_cases, const Geometry& g, double tol) {
  if (n_cases < 1) throw Error(ErrorCode::InvalidArgument, "n_cases must be >= 1");
  CheckReport r;
  r.name = "uniqueness";
  r.tolerance = tol;
  CheckPart part{"above_vs_below", 0, -std::numeric_limits<double>::infinity(), tol, true};
  Sampler s(seed, g, {});
  LogisticOptions opts;
  opts.tol = 1e-12;
  int draws = 0;
  while (part.instances < n_cases) {
    if (++draws > 100 * n_cases) {
      throw Error(ErrorCode::NoConvergence, "too few gate-passing draws");
    }
    const auto p = s.logistic();
    const auto above = solve_logistic_membrane(p, g, opts);
    if (!above.positive()) continue;
    const auto below = solve_logistic_membrane_from_below(p, g, opts);
    double diff = 0.0;
    for (std::size_t i = 0; i < above.solution.size(); ++i) {
      diff = std::max(diff, std::abs(above.solution[i] - below.solution[i]));
    }
    note(part, diff);
  }
  r.instances = part.instances;
  r.parts.push_back(part);
  finish(r);
  std::ostringstream os;
  os << "seed " << seed << ", " << draws << " draws for " << n_cases << " gate-passing instances";
  r.detail = os.str();
  return r;
}

}  // namespace membrana
