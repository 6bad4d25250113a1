#pragma once

#include <string>
#include <vector>

#include "membrana/assembly.hpp"
#include "membrana/eigen.hpp"
#include "membrana/fields.hpp"
#include "membrana/geometry.hpp"

namespace membrana {

/// −dΔuᵢ = uᵢ(βᵢ − αᵢuᵢ) in Ωᵢ with the membrane conditions on Σ and
/// Neumann on Γ.
struct MembraneLogistic {
  double d = 1.0;
  CoefField beta1, beta2;
  CoefField alpha1, alpha2;
  double gamma1 = 1.0;
  double gamma2 = 1.0;
};

/// −dΔu = u(β − αu) on one side with ∂ₙu + g u = h on each end.
struct ScalarLogistic {
  double d = 1.0;
  CoefField beta;
  CoefField alpha;
  RobinSpec robin;
  Side side = Side::One;
};

struct LogisticOptions {
  /// Newton stops when |δ_i| ≤ tol·max(1, |u_i|) at every node.
  double tol = 1e-10;
  /// Picard sweeps from the supersolution before switching to Newton; the
  /// sweeps stop early once their step falls below sqrt(tol).
  int picard_budget = 200;
  int max_newton = 200;
  /// Pseudo-transient steps for the solve from below.
  int max_continuation = 20000;
  /// |gate| below this triggers a warning and a proportionally tighter tol.
  double near_gate = 1e-6;
  EigenOptions eigen;
};

enum class LogisticStatus { Positive, NoPositiveSolution };

struct LogisticResult {
  LogisticStatus status = LogisticStatus::Positive;
  std::vector<double> solution;
  Layout layout;
  /// Principal eigenvalue deciding existence; NaN when no gate applies
  /// (non-homogeneous Robin data).
  double gate_eigenvalue = 0.0;
  int picard_iterations = 0;
  int newton_iterations = 0;
  /// max_i |F_i(u)| / s_i, with s_i the sum of the term magnitudes in row i.
  double residual = 0.0;
  /// Largest value of the supersolution the iteration started from.
  double bound = 0.0;
  /// Largest nodewise increase seen along the Picard sweeps; the sweeps are
  /// monotone, so this stays at roundoff level.
  double max_increase = 0.0;
  std::vector<std::string> warnings;

  bool positive() const noexcept { return status == LogisticStatus::Positive; }
  int iterations() const noexcept { return picard_iterations + newton_iterations; }
  /// Throw GateFailed when no positive solution exists.
  PairField pair() const;
  CoefField scalar() const;
};

LogisticResult solve_logistic_membrane(const MembraneLogistic& p, const Geometry& g,
                                       const LogisticOptions& opts = {});

LogisticResult solve_logistic_scalar(const ScalarLogistic& p, const Geometry& g,
                                     const LogisticOptions& opts = {});

/// Same problem, approached from the subsolution εΦ (Φ the principal
/// eigenfunction of the gate operator) by pseudo-transient continuation:
/// (J + B/τ)δ = −F with τ growing until the steps are plain Newton steps.
LogisticResult solve_logistic_membrane_from_below(const MembraneLogistic& p, const Geometry& g,
                                                  const LogisticOptions& opts = {});

/// Scale-free residual max_i |F_i(u)| / s_i of a membrane candidate, s_i the
/// sum of the term magnitudes in row i.
double membrane_residual(const MembraneLogistic& p, const Geometry& g, const PairField& u);

struct BlowupFit {
  double exponent = 0.0;   // p in v ≈ C δ^{−p}
  double prefactor = 0.0;  // C
  double residual = 0.0;   // RMS of the log-log fit
  std::size_t points = 0;
};

struct LargeSolutionOptions {
  double d = 1.0;
  /// Fit window in multiples of the side-2 mesh size.
  double window_lo = 5.0;
  double window_hi = 50.0;
  /// Interior compact {δ ≥ interior_delta} for the saturation increments.
  double interior_delta = 0.2;
  double max_fit_residual = 0.1;
  LogisticOptions logistic;
};

struct LargeSolution {
  std::vector<double> m;
  std::vector<CoefField> fields;
  BlowupFit fit;
  bool monotone = true;
  /// Worst relative decrease between consecutive m (≤ 0 when monotone).
  double monotone_violation = 0.0;
  /// max over the interior compact of |v_{k+1} − v_k|.
  std::vector<double> interior_increments;
};

/// Solves −Δv = λ₂v − α₂v² in Ω₂ with ∂ₙv + γ₂v = m on Σ and Neumann on Γ
/// for each m, then fits the near-membrane blow-up profile at the largest m.
/// Throws InvalidArgument for a bad m_list and FitFailed for a poor fit.
LargeSolution approximate_large_solution(double lambda2, const CoefField& alpha2, double gamma2,
                                         const Geometry& g, const std::vector<double>& m_list,
                                         const LargeSolutionOptions& opts = {});

BlowupFit fit_blowup(const Geometry& g, const CoefField& v, double delta_lo, double delta_hi);

}  // namespace membrana
