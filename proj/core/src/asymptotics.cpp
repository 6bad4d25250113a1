#include "membrana/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "membrana/errors.hpp"

namespace membrana {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void require_strictly_monotone(const std::vector<double>& v, const char* what) {
  if (v.empty()) throw Error(ErrorCode::InvalidArgument, std::string(what) + " is empty");
  bool inc = true, dec = true;
  for (std::size_t i = 1; i < v.size(); ++i) {
    inc = inc && v[i] > v[i - 1];
    dec = dec && v[i] < v[i - 1];
  }
  if (!(inc || dec)) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be strictly monotone");
  }
}

void require_span(const std::vector<double>& d_list, double decades) {
  if (decades <= 0.0) return;
  const auto [lo, hi] = std::minmax_element(d_list.begin(), d_list.end());
  if (!(*lo > 0.0) || std::log10(*hi / *lo) < decades - 1e-9) {
    std::ostringstream os;
    os << "d list must be positive and span at least " << decades << " decades";
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
}

double weighted_mean(const CoefField& f1, const CoefField& f2, double gamma1, double gamma2,
                     const Geometry& g) {
  return (gamma2 * integrate(f1, g) + gamma1 * integrate(f2, g)) /
         (gamma2 * g.volume(Side::One) + gamma1 * g.volume(Side::Two));
}

CoefField ratio(const CoefField& a, const CoefField& b) {
  CoefField out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = a.values[i] / b.values[i];
  return out;
}

double sup_distance(const CoefField& a, const CoefField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

double interior_distance(const Geometry& g, const CoefField& a, const CoefField& b,
                         double delta) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (g.distance_to_interface(a.side, i) >= delta) {
      m = std::max(m, std::abs(a.values[i] - b.values[i]));
    }
  }
  return m;
}

// Records the refused part of a d list and returns the kept values.
std::vector<double> resolvable(const std::vector<double>& d_list, const Geometry& g,
                               const SweepOptions& opts, SweepTable& t) {
  const double dmin = min_resolvable_d(g, opts.resolution_factor);
  t.numbers["min_resolvable_d"] = dmin;
  std::vector<double> kept;
  std::string refused;
  for (double d : d_list) {
    if (d < dmin) {
      if (!refused.empty()) refused += ";";
      refused += fmt(d);
    } else {
      kept.push_back(d);
    }
  }
  if (!refused.empty()) t.notes["refused_d"] = refused;
  return kept;
}

void record_tails(SweepTable& t, const char* small_name, const char* large_name) {
  auto deviations = [&](const char* name, bool towards_zero) {
    auto rows = t.regime(name);
    std::sort(rows.begin(), rows.end(), [&](const SweepRow& a, const SweepRow& b) {
      return towards_zero ? a.param > b.param : a.param < b.param;
    });
    std::vector<double> dev;
    for (const auto& r : rows) {
      if (r.status == "ok") dev.push_back(r.deviation);
    }
    return dev;
  };
  t.numbers[std::string(small_name) + "_tail_monotone"] =
      tail_monotone(deviations(small_name, true)) ? 1.0 : 0.0;
  t.numbers[std::string(large_name) + "_tail_monotone"] =
      tail_monotone(deviations(large_name, false)) ? 1.0 : 0.0;
}

}  // namespace

std::vector<SweepRow> SweepTable::regime(const std::string& name) const {
  std::vector<SweepRow> out;
  for (const auto& r : rows) {
    if (r.regime == name) out.push_back(r);
  }
  return out;
}

void write_sweep_csv(std::ostream& os, const SweepTable& t) {
  os << "param,value,target,deviation,regime,alt_target,alt_deviation,status\n";
  for (const auto& r : t.rows) {
    os << fmt(r.param) << ',' << fmt(r.value) << ',' << fmt(r.target) << ',' << fmt(r.deviation)
       << ',' << r.regime << ',' << fmt(r.alt_target) << ',' << fmt(r.alt_deviation) << ','
       << r.status << '\n';
  }
}

void write_sweep_json(std::ostream& os, const SweepTable& t) {
  nlohmann::ordered_json j;
  j["experiment"] = t.experiment;
  j["columns"] = {"param", "value", "target", "deviation", "regime", "alt_target",
                  "alt_deviation", "status"};
  auto& nums = j["numbers"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.numbers) nums[k] = v;
  auto& notes = j["notes"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.notes) notes[k] = v;
  os << j.dump(2) << '\n';
}

bool tail_monotone(const std::vector<double>& v, double noise) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1] * (1.0 + noise)) return false;
  }
  return true;
}

double min_resolvable_d(const Geometry& g, double factor) {
  const double h = std::max(g.mesh_size(Side::One), g.mesh_size(Side::Two));
  return (factor * h) * (factor * h);
}

SweepTable sweep_eigen_d(const std::vector<double>& d_list, const CoefField& c1,
                         const CoefField& c2, double gamma1, double gamma2, const Geometry& g,
                         const SweepOptions& opts) {
  require_strictly_monotone(d_list, "d list");
  require_span(d_list, opts.min_decades);
  SweepTable t;
  t.experiment = "eigen_d";
  const double small_target = std::min(extrema(c1).lower, extrema(c2).lower);
  const double large_target = weighted_mean(c1, c2, gamma1, gamma2, g);
  t.numbers["small_target"] = small_target;
  t.numbers["large_target"] = large_target;
  t.numbers["gamma1"] = gamma1;
  t.numbers["gamma2"] = gamma2;
  for (double d : resolvable(d_list, g, opts, t)) {
    SweepRow r;
    r.param = d;
    r.value = lambda1(d, c1, c2, gamma1, gamma2, g, opts.logistic.eigen);
    const bool small = d <= 1.0;
    r.regime = small ? "small_d" : "large_d";
    r.target = small ? small_target : large_target;
    r.alt_target = small ? large_target : small_target;
    r.deviation = std::abs(r.value - r.target);
    r.alt_deviation = std::abs(r.value - r.alt_target);
    t.rows.push_back(r);
  }
  record_tails(t, "small_d", "large_d");
  return t;
}

SweepTable sweep_logistic_d(const std::vector<double>& d_list, const MembraneLogistic& base,
                            const Geometry& g, const SweepOptions& opts) {
  require_strictly_monotone(d_list, "d list");
  require_span(d_list, opts.min_decades);
  SweepTable t;
  t.experiment = "logistic_d";
  const double q = base.gamma2 * integrate(base.beta1, g) + base.gamma1 * integrate(base.beta2, g);
  const double limit =
      q / (base.gamma2 * integrate(base.alpha1, g) + base.gamma1 * integrate(base.alpha2, g));
  t.numbers["weighted_growth"] = q;
  t.numbers["large_target"] = limit;
  const auto small1 = ratio(positive_part(base.beta1), base.alpha1);
  const auto small2 = ratio(positive_part(base.beta2), base.alpha2);

  std::vector<std::pair<double, bool>> existence;
  for (double d : resolvable(d_list, g, opts, t)) {
    MembraneLogistic p = base;
    p.d = d;
    const auto res = solve_logistic_membrane(p, g, opts.logistic);
    SweepRow r;
    r.param = d;
    r.regime = d <= 1.0 ? "small_d" : "large_d";
    r.alt_deviation = kNaN;
    existence.emplace_back(d, res.positive());
    if (!res.positive()) {
      r.value = res.gate_eigenvalue;
      r.target = 0.0;
      r.deviation = res.gate_eigenvalue;
      r.alt_target = kNaN;
      r.status = "no_positive_solution";
      t.rows.push_back(r);
      continue;
    }
    const auto u = res.pair();
    const double dev_small = std::max(sup_distance(u.u1, small1), sup_distance(u.u2, small2));
    const double dev_large =
        std::max(sup_distance(u.u1, CoefField::constant(g, Side::One, limit)),
                 sup_distance(u.u2, CoefField::constant(g, Side::Two, limit)));
    r.value = std::max(norm_inf(u.u1.values), norm_inf(u.u2.values));
    if (d <= 1.0) {
      r.target = kNaN;  // a field, not a number
      r.deviation = dev_small;
      r.alt_target = limit;
      r.alt_deviation = dev_large;
    } else {
      r.target = limit;
      r.deviation = dev_large;
      r.alt_target = kNaN;
      r.alt_deviation = dev_small;
    }
    if (!res.warnings.empty()) r.status = "near_gate";
    t.rows.push_back(r);
  }

  std::sort(existence.begin(), existence.end());
  double d_star = kNaN;
  for (auto it = existence.rbegin(); it != existence.rend() && !it->second; ++it) {
    d_star = it->first;
  }
  t.numbers["d_star"] = d_star;
  record_tails(t, "small_d", "large_d");
  return t;
}

SweepTable sweep_theta_over_lambda(const std::vector<double>& lambda_list, const CoefField& alpha1,
                                   const CoefField& alpha2, double gamma1, double gamma2,
                                   const Geometry& g, const SweepOptions& opts) {
  require_strictly_monotone(lambda_list, "lambda list");
  SweepTable t;
  t.experiment = "theta_over_lambda";
  const double v1 = g.volume(Side::One), v2 = g.volume(Side::Two);
  const double i1 = integrate(alpha1, g), i2 = integrate(alpha2, g);
  const double unweighted = (v1 + v2) / (i1 + i2);
  const double weighted = (gamma2 * v1 + gamma1 * v2) / (gamma2 * i1 + gamma1 * i2);
  t.numbers["small_target_unweighted"] = unweighted;
  t.numbers["small_target_weighted"] = weighted;
  const auto inv1 = ratio(CoefField::constant(g, Side::One, 1.0), alpha1);
  const auto inv2 = ratio(CoefField::constant(g, Side::Two, 1.0), alpha2);

  double best_lambda = std::numeric_limits<double>::infinity();
  double best_unweighted = kNaN, best_weighted = kNaN;
  for (double lambda : lambda_list) {
    if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda values must be positive");
    MembraneLogistic p;
    p.d = 1.0;
    p.beta1 = CoefField::constant(g, Side::One, lambda);
    p.beta2 = CoefField::constant(g, Side::Two, lambda);
    p.alpha1 = alpha1;
    p.alpha2 = alpha2;
    p.gamma1 = gamma1;
    p.gamma2 = gamma2;
    const auto u = solve_logistic_membrane(p, g, opts.logistic).pair();
    PairField q = u;
    for (double& v : q.u1.values) v /= lambda;
    for (double& v : q.u2.values) v /= lambda;

    SweepRow r;
    r.param = lambda;
    if (lambda < 1.0) {
      r.regime = "small_lambda";
      r.value = std::max(norm_inf(q.u1.values), norm_inf(q.u2.values));
      r.target = unweighted;
      r.alt_target = weighted;
      auto dist = [&](double c) {
        return std::max(sup_distance(q.u1, CoefField::constant(g, Side::One, c)),
                        sup_distance(q.u2, CoefField::constant(g, Side::Two, c)));
      };
      r.deviation = dist(unweighted);
      r.alt_deviation = dist(weighted);
      if (lambda < best_lambda) {
        best_lambda = lambda;
        best_unweighted = r.deviation;
        best_weighted = r.alt_deviation;
      }
    } else {
      r.regime = "large_lambda";
      r.value = q.u2.values.back();
      r.target = inv2.values.back();
      r.alt_target = unweighted;
      r.deviation = std::max(interior_distance(g, q.u1, inv1, opts.interior_delta),
                             interior_distance(g, q.u2, inv2, opts.interior_delta));
      r.alt_deviation = interior_distance(g, q.u2, inv2, opts.interior_delta);
    }
    t.rows.push_back(r);
  }
  if (std::isfinite(best_lambda)) {
    t.numbers["smallest_lambda_deviation_unweighted"] = best_unweighted;
    t.numbers["smallest_lambda_deviation_weighted"] = best_weighted;
    if (std::abs(unweighted - weighted) <= 1e-12 * std::abs(unweighted)) {
      t.notes["approaches"] = "both (targets coincide)";
    } else {
      t.notes["approaches"] = best_unweighted < best_weighted ? "unweighted" : "weighted";
    }
  }
  return t;
}

double lambda1_constant_rates(double l1, double l2, double gamma1, double gamma2,
                              const Geometry& g, const EigenOptions& eigen) {
  return lambda1(1.0, CoefField::constant(g, Side::One, -l1), CoefField::constant(g, Side::Two, -l2),
                 gamma1, gamma2, g, eigen);
}

HCurve trace_H(const std::vector<double>& lambda2_list, double gamma1, double gamma2,
               const Geometry& g, const HOptions& opts) {
  require_strictly_monotone(lambda2_list, "lambda2 list");
  HCurve c;
  const auto sig = sigma_uncoupled(g, gamma1, gamma2, opts.eigen);
  c.sigma1 = sig.sigma1();
  c.sigma2 = sig.sigma2();
  auto f = [&](double l1, double l2) {
    return lambda1_constant_rates(l1, l2, gamma1, gamma2, g, opts.eigen);
  };
  for (double l2 : lambda2_list) {
    if (!(l2 < c.sigma2)) {
      std::ostringstream os;
      os << "lambda2 = " << l2 << " is not below sigma2 = " << c.sigma2;
      throw Error(ErrorCode::InvalidArgument, os.str());
    }
    // Λ₁(−λ₁, −λ₂) decreases in λ₁: positive below H, negative above.
    double lo = std::min(l2, c.sigma1) - opts.bracket_step;
    double hi = c.sigma1 + opts.bracket_step;
    double step = opts.bracket_step;
    for (int k = 0; f(lo, l2) <= 0.0; ++k) {
      if (k > 200) throw Error(ErrorCode::BracketFailed, "no sign change below the curve");
      step *= 2.0;
      lo -= step;
    }
    step = opts.bracket_step;
    for (int k = 0; f(hi, l2) >= 0.0; ++k) {
      if (k > 200) throw Error(ErrorCode::BracketFailed, "no sign change above the curve");
      step *= 2.0;
      hi += step;
    }
    HSample s;
    s.lambda2 = l2;
    s.bracket_lo = lo;
    s.bracket_hi = hi;
    while (hi - lo > opts.tol * std::max(1.0, std::abs(lo))) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (f(mid, l2) > 0.0) lo = mid;
      else hi = mid;
      ++s.bisections;
    }
    s.h = 0.5 * (lo + hi);
    s.residual = std::abs(f(s.h, l2));
    c.samples.push_back(s);
  }
  for (std::size_t i = 1; i < c.samples.size(); ++i) {
    const bool ascending = c.samples[i].lambda2 > c.samples[i - 1].lambda2;
    const bool ok = ascending ? c.samples[i].h < c.samples[i - 1].h
                              : c.samples[i].h > c.samples[i - 1].h;
    c.strictly_decreasing = c.strictly_decreasing && ok;
  }
  return c;
}

void write_hcurve_csv(std::ostream& os, const HCurve& c) {
  os << "lambda2,H,residual\n";
  for (const auto& s : c.samples) {
    os << fmt(s.lambda2) << ',' << fmt(s.h) << ',' << fmt(s.residual) << '\n';
  }
}

void write_hcurve_json(std::ostream& os, const HCurve& c) {
  nlohmann::ordered_json j;
  j["experiment"] = "hcurve";
  j["columns"] = {"lambda2", "H", "residual"};
  j["sigma1"] = c.sigma1;
  j["sigma2"] = c.sigma2;
  j["strictly_decreasing"] = c.strictly_decreasing;
  os << j.dump(2) << '\n';
}

SweepTable sweep_lambda1(double lambda2, const std::vector<double>& lambda1_list,
                         const CoefField& alpha1, const CoefField& alpha2, double gamma1,
                         double gamma2, const Geometry& g, const Lambda1Options& opts) {
  require_strictly_monotone(lambda1_list, "lambda1 list");
  SweepTable t;
  t.experiment = "lambda1";
  const auto sig = sigma_uncoupled(g, gamma1, gamma2, opts.sweep.logistic.eigen);
  t.numbers["lambda2"] = lambda2;
  t.numbers["sigma1"] = sig.sigma1();
  t.numbers["sigma2"] = sig.sigma2();
  const auto phi1 = sig.side1.scalar();
  const double phi1_sup = norm_inf(phi1.values);
  const double alpha1_max = extrema(alpha1).upper;

  ScalarLogistic side2;
  side2.d = 1.0;
  side2.beta = CoefField::constant(g, Side::Two, lambda2);
  side2.alpha = alpha2;
  side2.side = Side::Two;
  side2.robin = membrane_robin(Side::Two, gamma2, opts.large_m);
  const auto large = solve_logistic_scalar(side2, g, opts.sweep.logistic).scalar();
  side2.robin = membrane_robin(Side::Two, gamma2, 0.0);
  const auto w2_result = solve_logistic_scalar(side2, g, opts.sweep.logistic);
  t.numbers["large_m"] = opts.large_m;
  t.numbers["w2_exists"] = w2_result.positive() ? 1.0 : 0.0;

  std::vector<std::size_t> decay_rows;
  for (double l1 : lambda1_list) {
    MembraneLogistic p;
    p.d = 1.0;
    p.beta1 = CoefField::constant(g, Side::One, l1);
    p.beta2 = CoefField::constant(g, Side::Two, lambda2);
    p.alpha1 = alpha1;
    p.alpha2 = alpha2;
    p.gamma1 = gamma1;
    p.gamma2 = gamma2;
    const auto res = solve_logistic_membrane(p, g, opts.sweep.logistic);
    SweepRow r;
    r.param = l1;
    r.alt_target = kNaN;
    r.alt_deviation = kNaN;
    if (!res.positive()) {
      r.regime = "none";
      r.value = res.gate_eigenvalue;
      r.target = 0.0;
      r.deviation = res.gate_eigenvalue;
      r.status = "no_positive_solution";
      t.rows.push_back(r);
      continue;
    }
    const auto u = res.pair();
    if (l1 > sig.sigma1()) {
      r.regime = "blowup";
      r.value = extrema(u.u1).lower;
      const double scale = (l1 - sig.sigma1()) / (alpha1_max * phi1_sup);
      double bound_min = std::numeric_limits<double>::infinity();
      double excess = 0.0;
      for (std::size_t i = 0; i < phi1.size(); ++i) {
        const double b = scale * phi1.values[i];
        bound_min = std::min(bound_min, b);
        excess = std::max(excess, b - u.u1.values[i]);
      }
      r.target = bound_min;
      r.deviation = excess;
      r.alt_deviation = interior_distance(g, u.u2, large, opts.sweep.interior_delta);
      if (excess > 1e-8 * std::max(1.0, r.value)) r.status = "bound_violated";
    } else if (l1 < 0.0) {
      r.regime = "decay";
      r.value = norm_inf(u.u1.values) * std::sqrt(-l1);
      if (w2_result.positive()) r.alt_deviation = sup_distance(u.u2, w2_result.scalar());
      decay_rows.push_back(t.rows.size());
    } else {
      r.regime = "intermediate";
      r.value = extrema(u.u1).lower;
      r.target = kNaN;
      r.deviation = 0.0;
    }
    t.rows.push_back(r);
  }

  if (!decay_rows.empty()) {
    double log_sum = 0.0, lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (auto k : decay_rows) {
      log_sum += std::log(t.rows[k].value);
      lo = std::min(lo, t.rows[k].value);
      hi = std::max(hi, t.rows[k].value);
    }
    const double c = std::exp(log_sum / static_cast<double>(decay_rows.size()));
    for (auto k : decay_rows) {
      t.rows[k].target = c;
      t.rows[k].deviation = std::abs(t.rows[k].value / c - 1.0);
    }
    t.numbers["decay_constant"] = c;
    t.numbers["decay_ratio"] = hi / lo;
  }
  return t;
}

}  // namespace membrana
