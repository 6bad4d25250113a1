#include "membrana/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "membrana/errors.hpp"

namespace membrana {

namespace {

// F(u) = A₀u + B(αu² − βu) − load, with A₀ the c-free form.
struct Discrete {
  OperatorPair op;
  std::vector<double> beta;
  std::vector<double> alpha;

  std::vector<double> residual(const std::vector<double>& u) const {
    auto f = apply_operator(op, u, Part::Form);
    for (std::size_t i = 0; i < u.size(); ++i) {
      f[i] += op.B[i] * (alpha[i] * u[i] * u[i] - beta[i] * u[i]) - op.load[i];
    }
    return f;
  }

  // max_i |F_i| / s_i with s_i the sum of the magnitudes of the terms in
  // row i: scale free, so it means the same for v ~ 1 and v ~ 1e12.
  double residual_norm(const std::vector<double>& u) const {
    const auto f = residual(u);
    const auto& off = op.form_part.off();
    double r = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      double s = std::abs(op.form_potential[i] * u[i]) + std::abs(op.load[i]) +
                 op.B[i] * (std::abs(beta[i] * u[i]) + alpha[i] * u[i] * u[i]);
      if (i > 0) s += std::abs(off[i - 1]) * (std::abs(u[i]) + std::abs(u[i - 1]));
      if (i + 1 < f.size()) s += std::abs(off[i]) * (std::abs(u[i]) + std::abs(u[i + 1]));
      r = std::max(r, s > 0.0 ? std::abs(f[i]) / s : std::abs(f[i]));
    }
    return r;
  }

  SymTridiagonal jacobian(const std::vector<double>& u, double inv_tau = 0.0) const {
    SymTridiagonal j = op.form_part;
    for (std::size_t i = 0; i < u.size(); ++i) {
      j.diag()[i] += op.B[i] * (2.0 * alpha[i] * u[i] - beta[i] + inv_tau);
    }
    return j;
  }

  double rho_for(double upper) const {
    double r = 0.0;
    for (std::size_t i = 0; i < beta.size(); ++i) {
      r = std::max(r, alpha[i] * upper + std::abs(beta[i]));
    }
    return 2.0 * r;
  }
};

// Relative residual treated as roundoff.
constexpr double kResidualFloor = 1e-13;

// |δᵢ| ≤ tol·max(1, |uᵢ|) at every node.
bool step_small(const std::vector<double>& delta, const std::vector<double>& u, double tol) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(std::abs(delta[i]) <= tol * std::max(1.0, std::abs(u[i])))) return false;
  }
  return true;
}

bool all_positive(const std::vector<double>& u) {
  return std::all_of(u.begin(), u.end(), [](double v) { return v > 0.0 && std::isfinite(v); });
}

void require_alpha_positive(const CoefField& a) {
  for (double v : a.values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, "alpha must be positive at every node");
    }
  }
}

struct PicardOutcome {
  bool converged = false;
  int iterations = 0;
  double max_increase = 0.0;
};

// (A₀ + ρB)u⁺ = B(βu − αu² + ρu) + load. Order preserving on [0, S] for the
// ρ chosen by the caller, so the sweeps decrease from a supersolution.
PicardOutcome picard(const Discrete& p, std::vector<double>& u, double rho, double tol,
                     int budget) {
  PicardOutcome out;
  if (budget <= 0) return out;
  SymTridiagonal m = p.op.form_part;
  for (std::size_t i = 0; i < u.size(); ++i) m.diag()[i] += rho * p.op.B[i];
  const TridiagonalLdlt factor(m);
  std::vector<double> next(u.size());
  for (int it = 1; it <= budget; ++it) {
    for (std::size_t i = 0; i < u.size(); ++i) {
      next[i] = p.op.B[i] * (p.beta[i] * u[i] - p.alpha[i] * u[i] * u[i] + rho * u[i]) +
                p.op.load[i];
    }
    factor.solve_in_place(next);
    bool small = true;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double step = next[i] - u[i];
      out.max_increase = std::max(out.max_increase, step);
      small = small && std::abs(step) <= tol * std::max(1.0, std::abs(next[i]));
    }
    u.swap(next);
    out.iterations = it;
    if (small) {
      out.converged = true;
      break;
    }
  }
  return out;
}

// Damped Newton. From a supersolution of this convex problem full steps stay
// above the solution; damping only guards against roundoff and bad starts.
int newton(const Discrete& p, std::vector<double>& u, double tol, int max_iter) {
  double res = p.residual_norm(u);
  for (int it = 1; it <= max_iter; ++it) {
    auto f = p.residual(u);
    std::vector<double> delta;
    try {
      const TridiagonalLdlt factor(p.jacobian(u));
      delta = factor.solve(f);
    } catch (const Error& e) {
      throw Error(ErrorCode::NoConvergence, std::string("Newton Jacobian: ") + e.what());
    }
    const bool small = step_small(delta, u, tol);
    double t = 1.0;
    std::vector<double> trial(u.size());
    bool accepted = false;
    for (int halving = 0; halving <= 30; ++halving, t *= 0.5) {
      for (std::size_t i = 0; i < u.size(); ++i) trial[i] = u[i] - t * delta[i];
      if (!all_positive(trial)) continue;
      const double r = p.residual_norm(trial);
      if (small || r < res || r <= kResidualFloor) {
        res = r;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // Nothing left to gain below the roundoff floor.
      if (res <= 100.0 * kResidualFloor) return it;
      throw Error(ErrorCode::NoConvergence, "Newton damping exhausted after 30 halvings");
    }
    u.swap(trial);
    if (small) return it;
  }
  throw Error(ErrorCode::NoConvergence,
              "Newton did not converge in " + std::to_string(max_iter) + " iterations");
}

double effective_tol(const LogisticOptions& opts, double gate, LogisticResult& r) {
  double tol = opts.tol;
  if (std::isfinite(gate) && std::abs(gate) < opts.near_gate) {
    std::ostringstream os;
    os << "gate eigenvalue " << gate
       << " is within " << opts.near_gate << " of zero; the solution is O(|gate|) small";
    r.warnings.push_back(os.str());
    tol = std::max(1e-15, opts.tol * std::abs(gate) / opts.near_gate);
  }
  return tol;
}

void solve_from_above(const Discrete& p, std::vector<double> start, double upper, double tol,
                      const LogisticOptions& opts, LogisticResult& r) {
  // The sweeps contract slowly when ρ is large, so a small step does not mean
  // a small error; they only bring the iterate close, and Newton (which stays
  // above the solution for this convex problem) finishes.
  const double rho = p.rho_for(upper);
  const auto pic = picard(p, start, rho, std::sqrt(tol), opts.picard_budget);
  r.picard_iterations = pic.iterations;
  r.max_increase = pic.max_increase;
  r.newton_iterations = newton(p, start, tol, opts.max_newton);
  if (!all_positive(start)) {
    throw Error(ErrorCode::NegativeIterate, "monotone iteration produced a nonpositive value");
  }
  r.residual = p.residual_norm(start);
  r.solution = std::move(start);
}

Discrete membrane_discrete(const MembraneLogistic& p, const Geometry& g) {
  check_field(p.beta1, g, Side::One);
  check_field(p.beta2, g, Side::Two);
  check_field(p.alpha1, g, Side::One);
  check_field(p.alpha2, g, Side::Two);
  require_alpha_positive(p.alpha1);
  require_alpha_positive(p.alpha2);
  Discrete dp;
  dp.op = assemble_membrane(p.d, CoefField::constant(g, Side::One, 0.0),
                            CoefField::constant(g, Side::Two, 0.0), p.gamma1, p.gamma2, g);
  dp.beta = flatten(PairField{p.beta1, p.beta2});
  dp.alpha = flatten(PairField{p.alpha1, p.alpha2});
  return dp;
}

CoefField negated(const CoefField& f) {
  CoefField out = f;
  for (double& v : out.values) v = -v;
  return out;
}

double membrane_supersolution(const MembraneLogistic& p) {
  return std::max(extrema(p.beta1).upper / extrema(p.alpha1).lower,
                  extrema(p.beta2).upper / extrema(p.alpha2).lower);
}

}  // namespace

PairField LogisticResult::pair() const {
  if (!positive()) throw GateFailed(gate_eigenvalue);
  return split_pair(layout, solution);
}

CoefField LogisticResult::scalar() const {
  if (!positive()) throw GateFailed(gate_eigenvalue);
  return split_scalar(layout, solution);
}

LogisticResult solve_logistic_membrane(const MembraneLogistic& p, const Geometry& g,
                                       const LogisticOptions& opts) {
  const Discrete dp = membrane_discrete(p, g);
  LogisticResult r;
  r.layout = dp.op.layout;
  r.gate_eigenvalue =
      lambda1(p.d, negated(p.beta1), negated(p.beta2), p.gamma1, p.gamma2, g, opts.eigen);
  if (r.gate_eigenvalue >= 0.0) {
    r.status = LogisticStatus::NoPositiveSolution;
    return r;
  }
  const double tol = effective_tol(opts, r.gate_eigenvalue, r);
  const double s = membrane_supersolution(p);
  r.bound = s;
  solve_from_above(dp, std::vector<double>(dp.op.size(), s), s, tol, opts, r);
  if (norm_inf(r.solution) > s * (1.0 + 1e-10)) {
    r.warnings.push_back("solution exceeds the a-priori bound max(beta_M / alpha_L)");
  }
  return r;
}

LogisticResult solve_logistic_scalar(const ScalarLogistic& p, const Geometry& g,
                                     const LogisticOptions& opts) {
  check_field(p.beta, g, p.side);
  check_field(p.alpha, g, p.side);
  require_alpha_positive(p.alpha);
  Discrete dp;
  dp.op = assemble_scalar(p.d, CoefField::constant(g, p.side, 0.0), p.robin, g, p.side);
  dp.beta = p.beta.values;
  dp.alpha = p.alpha.values;

  LogisticResult r;
  r.layout = dp.op.layout;
  const bool homogeneous =
      std::all_of(dp.op.load.begin(), dp.op.load.end(), [](double v) { return v == 0.0; });

  if (homogeneous) {
    r.gate_eigenvalue = scalar_pair(p.d, negated(p.beta), p.robin, g, p.side, opts.eigen).value;
    if (r.gate_eigenvalue >= 0.0) {
      r.status = LogisticStatus::NoPositiveSolution;
      return r;
    }
    const double tol = effective_tol(opts, r.gate_eigenvalue, r);
    const double s = extrema(p.beta).upper / extrema(p.alpha).lower;
    r.bound = s;
    solve_from_above(dp, std::vector<double>(dp.op.size(), s), s, tol, opts, r);
    return r;
  }

  // Non-negative, non-trivial data: zero is a strict subsolution and S·ψ a
  // supersolution, with (A₀ + ρ_ψB)ψ = B·1 + load.
  r.gate_eigenvalue = std::numeric_limits<double>::quiet_NaN();
  double rho_psi = 1.0;
  for (double b : dp.beta) rho_psi = std::max(rho_psi, 1.0 + std::abs(b));
  SymTridiagonal m = dp.op.form_part;
  std::vector<double> psi(dp.op.size());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    m.diag()[i] += rho_psi * dp.op.B[i];
    psi[i] = dp.op.B[i] + dp.op.load[i];
  }
  TridiagonalLdlt(m).solve_in_place(psi);
  double s = 1.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (!(psi[i] > 0.0)) throw Error(ErrorCode::NegativeIterate, "supersolution profile not positive");
    s = std::max(s, std::max(0.0, rho_psi + dp.beta[i]) / (dp.alpha[i] * psi[i]));
  }
  for (double& v : psi) v *= s;
  r.bound = norm_inf(psi);
  solve_from_above(dp, std::move(psi), r.bound, opts.tol, opts, r);
  return r;
}

LogisticResult solve_logistic_membrane_from_below(const MembraneLogistic& p, const Geometry& g,
                                                  const LogisticOptions& opts) {
  const Discrete dp = membrane_discrete(p, g);
  LogisticResult r;
  r.layout = dp.op.layout;
  const auto gate = membrane_pair(p.d, negated(p.beta1), negated(p.beta2), p.gamma1, p.gamma2,
                                  g, opts.eigen);
  r.gate_eigenvalue = gate.value;
  if (gate.value >= 0.0) {
    r.status = LogisticStatus::NoPositiveSolution;
    return r;
  }
  const double tol = effective_tol(opts, gate.value, r);
  r.bound = membrane_supersolution(p);

  // εΦ is a subsolution as long as εαΦ ≤ −Λ₁ nodewise.
  double peak = 0.0;
  for (std::size_t i = 0; i < dp.alpha.size(); ++i) {
    peak = std::max(peak, dp.alpha[i] * gate.vector[i]);
  }
  const double eps = 0.5 * (-gate.value) / peak;
  std::vector<double> u(gate.vector);
  for (double& v : u) v *= eps;

  const double rate = 0.5 * dp.rho_for(r.bound) + std::abs(gate.value);
  const double tau_newton = 1e8 / rate;
  double tau = 1.0 / rate;
  double res = dp.residual_norm(u);
  std::vector<double> trial(u.size());
  for (int it = 1; it <= opts.max_continuation; ++it) {
    const auto f = dp.residual(u);
    std::vector<double> delta;
    try {
      delta = TridiagonalLdlt(dp.jacobian(u, 1.0 / tau)).solve(f);
    } catch (const Error&) {
      tau *= 0.5;
      continue;
    }
    for (std::size_t i = 0; i < u.size(); ++i) trial[i] = u[i] - delta[i];
    const bool newton_regime = tau >= tau_newton;
    const bool small = step_small(delta, u, tol);
    if (!all_positive(trial)) {
      tau *= 0.5;
      continue;
    }
    const double trial_res = dp.residual_norm(trial);
    if (newton_regime && !small && !(trial_res < res) && trial_res > kResidualFloor) {
      tau *= 0.5;
      continue;
    }
    u.swap(trial);
    res = trial_res;
    r.newton_iterations = it;
    if (newton_regime && small) {
      r.residual = res;
      r.solution = std::move(u);
      return r;
    }
    tau = std::min(2.0 * tau, 1e300);
  }
  throw Error(ErrorCode::NoConvergence, "continuation from below did not converge");
}

double membrane_residual(const MembraneLogistic& p, const Geometry& g, const PairField& u) {
  return membrane_discrete(p, g).residual_norm(flatten(u));
}

BlowupFit fit_blowup(const Geometry& g, const CoefField& v, double delta_lo, double delta_hi) {
  check_field(v, g, v.side);
  double st = 0, sy = 0, stt = 0, sty = 0;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double delta = g.distance_to_interface(v.side, i);
    if (delta < delta_lo * (1 - 1e-12) || delta > delta_hi * (1 + 1e-12)) continue;
    if (!(v.values[i] > 0.0)) throw Error(ErrorCode::FitFailed, "nonpositive value in fit window");
    const double t = std::log(delta);
    const double y = std::log(v.values[i]);
    pts.emplace_back(t, y);
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  }
  const double n = static_cast<double>(pts.size());
  if (pts.size() < 3) throw Error(ErrorCode::FitFailed, "fewer than 3 nodes in the fit window");
  const double slope = (n * sty - st * sy) / (n * stt - st * st);
  const double intercept = (sy - slope * st) / n;
  double ss = 0.0;
  for (const auto& [t, y] : pts) {
    const double e = y - (intercept + slope * t);
    ss += e * e;
  }
  BlowupFit fit;
  fit.exponent = -slope;
  fit.prefactor = std::exp(intercept);
  fit.residual = std::sqrt(ss / n);
  fit.points = pts.size();
  return fit;
}

LargeSolution approximate_large_solution(double lambda2, const CoefField& alpha2, double gamma2,
                                         const Geometry& g, const std::vector<double>& m_list,
                                         const LargeSolutionOptions& opts) {
  check_field(alpha2, g, Side::Two);
  if (m_list.size() < 4) throw Error(ErrorCode::InvalidArgument, "m_list needs at least 4 entries");
  for (std::size_t k = 0; k < m_list.size(); ++k) {
    if (!(m_list[k] > 0.0) || (k > 0 && !(m_list[k] > m_list[k - 1]))) {
      throw Error(ErrorCode::InvalidArgument, "m_list must be positive and increasing");
    }
  }
  if (m_list.back() < 1e3 * m_list.front()) {
    throw Error(ErrorCode::InvalidArgument, "m_list must span at least 3 decades");
  }

  LargeSolution out;
  out.m = m_list;
  ScalarLogistic p;
  p.d = opts.d;
  p.beta = CoefField::constant(g, Side::Two, lambda2);
  p.alpha = alpha2;
  p.side = Side::Two;
  for (double m : m_list) {
    p.robin = membrane_robin(Side::Two, gamma2, m);
    out.fields.push_back(solve_logistic_scalar(p, g, opts.logistic).scalar());
  }

  for (std::size_t k = 0; k + 1 < out.fields.size(); ++k) {
    const auto& a = out.fields[k].values;
    const auto& b = out.fields[k + 1].values;
    double inc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double drop = (a[i] - b[i]) / std::max(1.0, std::abs(a[i]));
      out.monotone_violation = std::max(out.monotone_violation, drop);
      if (g.distance_to_interface(Side::Two, i) >= opts.interior_delta) {
        inc = std::max(inc, std::abs(b[i] - a[i]));
      }
    }
    out.interior_increments.push_back(inc);
  }
  out.monotone = out.monotone_violation <= 1e-10;

  const double h = g.mesh_size(Side::Two);
  out.fit = fit_blowup(g, out.fields.back(), opts.window_lo * h, opts.window_hi * h);
  if (out.fit.residual > opts.max_fit_residual) {
    std::ostringstream os;
    os << "log-log fit residual " << out.fit.residual << " exceeds " << opts.max_fit_residual;
    throw Error(ErrorCode::FitFailed, os.str());
  }
  return out;
}

}  // namespace membrana
