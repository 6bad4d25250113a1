#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "membrana/fields.hpp"
#include "membrana/geometry.hpp"

namespace membrana {

struct CheckPart {
  std::string name;
  int instances = 0;
  /// Largest relative amount by which the checked inequality fails; a value
  /// ≤ 0 means it held everywhere with that much room.
  double worst_violation = 0.0;
  double tolerance = 0.0;
  bool passed = true;
};

struct CheckReport {
  std::string name;
  int instances = 0;
  double worst_violation = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  std::string detail;
  std::vector<CheckPart> parts;
  /// Per-level errors or residuals for convergence checks.
  std::vector<double> series;
  /// log₂ ratios of consecutive series entries.
  std::vector<double> orders;
};

void write_reports_json(std::ostream& os, const std::vector<CheckReport>& reports);

enum class PiconeKind { Identity };

/// Relative gap |L − R|/(|L| + |R| + 1e−30) between the two sides of
/// ∫ f(v/u)(v Δu − u Δv) = ∫ f′(v/u) u² |∇(v/u)|², with Δ taken from the
/// discrete Robin Laplacian and ∇ from P1 differences. Throws NonPositiveU.
double picone_residual(const CoefField& u, const CoefField& v, PiconeKind kind,
                       const RobinSpec& robin, const Geometry& g, Side side);

struct BoundSuiteOptions {
  double slack = 1e-8;
  /// Coefficient amplitudes are drawn from [−amplitude, amplitude].
  double amplitude = 5.0;
  int max_degree = 3;
};

/// Random trigonometric coefficients, d ∈ [1e−2, 1e2] and γᵢ ∈ [0.1, 10]
/// log-uniform. Checks on each instance:
///   min c_L ≤ Λ₁ ≤ max c_M; Λ₁ ≤ (γ₂∫c₁ + γ₁∫c₂)/(γ₂|Ω₁| + γ₁|Ω₂|);
///   u ≤ max βᵢ_M/αᵢ_L; and the sandwich wᵢ ≤ uᵢ ≤ S with wᵢ the
///   standalone Robin-γᵢ logistic solution (0 when it does not exist).
/// Violations are measured relative to max(1, |bound|).
CheckReport bound_suite(std::uint64_t seed, int n_cases, const Geometry& g,
                        const BoundSuiteOptions& opts = {});

enum class MmsProblem { ScalarRobin, Membrane };

/// Manufactured solutions on nested meshes; passes when the finest observed
/// order lies in [1.8, 2.2] and the error decreases at every level.
CheckReport mms_convergence(int levels, MmsProblem problem);

/// Picone residual of (logistic solution, Robin eigenfunction) on (0, 1)
/// under refinement; passes when the finest observed order is ≥ 1.8.
CheckReport picone_convergence(int levels);

/// Monotone iteration from above against continuation from εΦ on random
/// gate-passing membrane instances; passes when every pair agrees to `tol`.
CheckReport uniqueness_probe(std::uint64_t seed, int n_cases, const Geometry& g,
                             double tol = 1e-8);

}  // namespace membrana
