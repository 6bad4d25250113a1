#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "membrana/fields.hpp"
#include "membrana/geometry.hpp"
#include "membrana/tridiagonal.hpp"

namespace membrana {

/// How a flat unknown vector maps onto nodes. Membrane vectors hold side 1
/// then side 2; scalar vectors hold one side only.
struct Layout {
  bool membrane = true;
  Side side = Side::One;  // scalar problems only
  std::size_t n1 = 0;
  std::size_t n2 = 0;

  std::size_t size() const noexcept { return membrane ? n1 + n2 : (side == Side::One ? n1 : n2); }
};

/// Discrete weighted forms. A and form_part are tridiagonal; B is the
/// diagonal (lumped) weighted mass, so A - sB stays tridiagonal.
struct OperatorPair {
  Layout layout;
  double d = 1.0;
  /// γ₁/γ₂ for the membrane problem, 1 for scalar problems.
  double weight2 = 1.0;
  SymTridiagonal A;
  SymTridiagonal form_part;
  std::vector<double> B;
  /// Diagonal not coming from stiffness or membrane edges: the reaction
  /// m_i c_i plus Robin terms for A, Robin terms only for form_part. The
  /// off-diagonals are the edges, so A = graph Laplacian(off) + diag(potential).
  std::vector<double> potential;
  std::vector<double> form_potential;
  /// Weak Robin datum d·h·|∂D| at boundary rows (scalar problems).
  std::vector<double> load;

  std::size_t size() const noexcept { return B.size(); }
};

OperatorPair assemble_membrane(double d, const CoefField& c1, const CoefField& c2, double gamma1,
                               double gamma2, const Geometry& g);

OperatorPair assemble_scalar(double d, const CoefField& c, const RobinSpec& robin,
                             const Geometry& g, Side side);

enum class Part { Full, Form };

/// A x (or form_part x), evaluated through edge differences so that nearly
/// constant vectors do not suffer cancellation when d/h² is large.
std::vector<double> apply_operator(const OperatorPair& op, std::span<const double> x,
                          Part part = Part::Full);
/// xᵀ A x as a sum of squares over edges plus the potential.
double energy(const OperatorPair& op, std::span<const double> x, Part part = Part::Full);
/// Σ B_i x_i y_i
double mass_product(const OperatorPair& op, std::span<const double> x, std::span<const double> y);

/// Nodal mass vector of the layout: m_i on side 1, (γ₁/γ₂) m_i on side 2.
std::vector<double> weighted_mass(const Layout& layout, double weight2, const Geometry& g);

std::vector<double> flatten(const PairField& u);
std::vector<double> flatten(const CoefField& u);
PairField split_pair(const Layout& layout, const std::vector<double>& v);
CoefField split_scalar(const Layout& layout, const std::vector<double>& v);

/// Solves A u = B f + load with one tridiagonal factorization.
PairField solve_forced(const OperatorPair& op, const PairField& f);
CoefField solve_forced(const OperatorPair& op, const CoefField& f);

/// Debug dump: "A row col value" and "B row col value" lines, zero-based.
void dump_triplets(std::ostream& os, const OperatorPair& op);

}  // namespace membrana
