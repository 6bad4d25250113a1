#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "membrana/eigen.hpp"
#include "membrana/fields.hpp"
#include "membrana/geometry.hpp"
#include "membrana/logistic.hpp"

namespace membrana {

struct SweepRow {
  double param = 0.0;
  double value = 0.0;
  double target = 0.0;
  double deviation = 0.0;
  std::string regime;
  /// Competing target where one exists (the other end's limit, or the
  /// alternative reading of a formula); NaN otherwise.
  double alt_target = 0.0;
  /// A second measured distance, documented per sweep; NaN when unused.
  double alt_deviation = 0.0;
  std::string status = "ok";
};

struct SweepTable {
  std::string experiment;
  std::vector<SweepRow> rows;
  std::map<std::string, double> numbers;
  std::map<std::string, std::string> notes;

  /// Rows of one regime in parameter order.
  std::vector<SweepRow> regime(const std::string& name) const;
};

void write_sweep_csv(std::ostream& os, const SweepTable& t);
/// Sidecar: experiment name, numbers, notes, and the column list.
void write_sweep_json(std::ostream& os, const SweepTable& t);

/// True when every deviation, read towards the limit end, is at most 10%
/// above its predecessor.
bool tail_monotone(const std::vector<double>& towards_limit, double noise = 0.1);

struct SweepOptions {
  /// Sweeps refuse d below (resolution_factor·h)².
  double resolution_factor = 10.0;
  /// Interior compact {δ ≥ interior_delta} for field comparisons.
  double interior_delta = 0.2;
  /// Enforce that the d list spans at least this many decades (0 disables).
  double min_decades = 6.0;
  LogisticOptions logistic;
};

/// Smallest d the mesh resolves: (factor·h_max)².
double min_resolvable_d(const Geometry& g, double factor = 10.0);

/// Λ₁ against min{(c₁)_L,(c₂)_L} for d ≤ 1 and against the γ-weighted mean
/// (γ₂∫c₁ + γ₁∫c₂)/(γ₂|Ω₁| + γ₁|Ω₂|) for d > 1.
SweepTable sweep_eigen_d(const std::vector<double>& d_list, const CoefField& c1,
                         const CoefField& c2, double gamma1, double gamma2, const Geometry& g,
                         const SweepOptions& opts = {});

/// Membrane logistic per d: sup-norm distance to βᵢ₊/αᵢ for d ≤ 1, to the
/// constant L = (γ₂∫β₁ + γ₁∫β₂)/(γ₂∫α₁ + γ₁∫α₂) for d > 1. Rows without a
/// positive solution carry the gate eigenvalue as value and deviation.
/// numbers["d_star"] is the smallest listed d from which every larger d has
/// no positive solution (NaN if none).
SweepTable sweep_logistic_d(const std::vector<double>& d_list, const MembraneLogistic& base,
                            const Geometry& g, const SweepOptions& opts = {});

/// Equal rates β₁ = β₂ = λ, d = 1. For λ < 1 the value is the largest θ/λ,
/// the target the unweighted ratio (|Ω₁|+|Ω₂|)/(∫α₁+∫α₂) and alt_target the
/// γ-weighted one; deviation and alt_deviation are sup-norm distances of θ/λ
/// to each. For λ ≥ 1 the deviation is the sup over {δ ≥ interior_delta} of
/// |θᵢ/λ − 1/αᵢ|. notes["approaches"] names the small-λ target the data
/// sits closer to.
SweepTable sweep_theta_over_lambda(const std::vector<double>& lambda_list, const CoefField& alpha1,
                                   const CoefField& alpha2, double gamma1, double gamma2,
                                   const Geometry& g, const SweepOptions& opts = {});

struct HSample {
  double lambda2 = 0.0;
  double h = 0.0;
  /// |Λ₁(−H, −λ₂)|
  double residual = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int bisections = 0;
};

struct HCurve {
  std::vector<HSample> samples;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  bool strictly_decreasing = true;
};

struct HOptions {
  double tol = 1e-10;
  double bracket_step = 1.0;
  EigenOptions eigen;
};

/// Λ₁(−λ₁, −λ₂) at d = 1.
double lambda1_constant_rates(double l1, double l2, double gamma1, double gamma2,
                              const Geometry& g, const EigenOptions& eigen = {});

/// Root λ₁ = H(λ₂) of Λ₁(−λ₁, −λ₂) = 0 by bisection, for every λ₂ < σ₂.
HCurve trace_H(const std::vector<double>& lambda2_list, double gamma1, double gamma2,
               const Geometry& g, const HOptions& opts = {});

void write_hcurve_csv(std::ostream& os, const HCurve& c);
void write_hcurve_json(std::ostream& os, const HCurve& c);

struct Lambda1Options {
  SweepOptions sweep;
  /// Datum for the large-solution reference v_M on Ω₂.
  double large_m = 1e12;
};

/// θ per λ₁ at fixed λ₂ (d = 1).
///  - λ₁ > σ₁ ("blowup"): value min_{Ω₁} θ₁, target the smallest value of the
///    lower bound (λ₁−σ₁)φ₁/((α₁)_M‖φ₁‖∞), deviation the largest amount by
///    which the bound exceeds θ₁ (0 when it holds); alt_deviation is the sup
///    over {δ ≥ interior_delta} of |θ₂ − v_M|.
///  - λ₁ < 0 ("decay"): value sup θ₁·(−λ₁)^{1/2}, target the geometric mean
///    C of those values, deviation |value/C − 1|; alt_deviation ‖θ₂ − w₂‖∞
///    with w₂ the standalone Robin-γ₂ logistic solution on Ω₂.
///  - no positive solution: value and deviation are the gate eigenvalue.
/// numbers["decay_ratio"] is max/min of the scaled decay values.
SweepTable sweep_lambda1(double lambda2, const std::vector<double>& lambda1_list,
                         const CoefField& alpha1, const CoefField& alpha2, double gamma1,
                         double gamma2, const Geometry& g, const Lambda1Options& opts = {});

}  // namespace membrana
