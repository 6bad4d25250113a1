#pragma once

#include <vector>

#include "membrana/assembly.hpp"
#include "membrana/fields.hpp"
#include "membrana/geometry.hpp"

namespace membrana {

struct EigenOptions {
  /// Relative change of successive Rayleigh quotients, scaled by max(1, |ν|).
  double rq_tol = 1e-12;
  /// ‖Aφ − νBφ‖∞ ≤ residual_tol·(‖A‖∞ + |ν|‖B‖∞)
  double residual_tol = 1e-10;
  int max_iterations = 10000;
};

struct EigenPair {
  double value = 0.0;
  /// Flat eigenvector in the operator's layout, max entry 1, all entries > 0.
  std::vector<double> vector;
  Layout layout;
  int iterations = 0;
  double residual = 0.0;

  PairField pair() const { return split_pair(layout, vector); }
  CoefField scalar() const { return split_scalar(layout, vector); }
};

/// Principal generalized eigenpair of (A, B) by shifted inverse iteration.
/// The first shift is c_lower − 1, which must lie below the principal
/// eigenvalue (pass min of the reaction coefficient, a lower bound for both
/// the membrane and Robin problems). The shift is moved towards the
/// eigenvalue as the Rayleigh quotient settles, but only when the shifted
/// matrix stays positive definite, which Sylvester's inertia certifies.
///
/// Throws InvalidShift, NoConvergence, NonPositiveEigenvector.
EigenPair principal_pair(const OperatorPair& op, double c_lower, const EigenOptions& opts = {});

/// Λ₁(−dΔ + c₁, −dΔ + c₂).
double lambda1(double d, const CoefField& c1, const CoefField& c2, double gamma1, double gamma2,
               const Geometry& g, const EigenOptions& opts = {});
EigenPair membrane_pair(double d, const CoefField& c1, const CoefField& c2, double gamma1,
                        double gamma2, const Geometry& g, const EigenOptions& opts = {});

/// σ₁^D[−dΔ + c; 𝓑] on one side taken as a standalone domain.
EigenPair scalar_pair(double d, const CoefField& c, const RobinSpec& robin, const Geometry& g,
                      Side side, const EigenOptions& opts = {});

/// The two decoupled problems: Robin γ₁ on the membrane side of Ω₁, Robin γ₂
/// on the membrane side of Ω₂ and Neumann on Γ; d = 1 and c = 0.
struct UncoupledSigmas {
  EigenPair side1;
  EigenPair side2;
  double sigma1() const noexcept { return side1.value; }
  double sigma2() const noexcept { return side2.value; }
};

UncoupledSigmas sigma_uncoupled(const Geometry& g, double gamma1, double gamma2,
                                const EigenOptions& opts = {});

/// Robin spec with coefficient g (and datum h) on the membrane end of `side`,
/// Neumann on the other end.
RobinSpec membrane_robin(Side side, double g, double h = 0.0);

}  // namespace membrana
