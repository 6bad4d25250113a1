#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "membrana/geometry.hpp"

namespace membrana {

/// Nodal samples of a coefficient or solution on one side's mesh.
struct CoefField {
  Side side = Side::One;
  std::vector<double> values;

  static CoefField constant(const Geometry& g, Side side, double value);
  static CoefField sample(const Geometry& g, Side side, const std::function<double(double)>& f);

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
};

/// f_L and f_M.
struct Extrema {
  double lower = 0.0;
  double upper = 0.0;
};

Extrema extrema(const CoefField& f);
CoefField positive_part(const CoefField& f);

/// ∫ f w over the field's side, as Σ m_i f_i with the exact lumped weights.
double integrate(const CoefField& f, const Geometry& g);

/// Throws DimensionMismatch unless f lives on `side` of `g` with the right length.
void check_field(const CoefField& f, const Geometry& g, Side side);

struct PairField {
  CoefField u1;
  CoefField u2;

  static PairField constant(const Geometry& g, double value);

  const CoefField& operator[](Side side) const { return side == Side::One ? u1 : u2; }
  CoefField& operator[](Side side) { return side == Side::One ? u1 : u2; }
};

/// One end of a scalar problem: ∂_n u + g u = h. g = h = 0 is Neumann.
struct BoundaryCondition {
  double g = 0.0;
  double h = 0.0;
};

struct RobinSpec {
  BoundaryCondition lower;
  BoundaryCondition upper;

  static RobinSpec neumann() { return {}; }
  const BoundaryCondition& at(End end) const { return end == End::Lower ? lower : upper; }
};

void validate(const RobinSpec& robin);

/// CSV rows "coordinate,side,value" for every node of both sides.
void write_fields_csv(std::ostream& os, const Geometry& g, const PairField& u, bool header = true);
void write_field_csv(std::ostream& os, const Geometry& g, const CoefField& u, bool header = true);

}  // namespace membrana
