#include "membrana/assembly.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "membrana/errors.hpp"

namespace membrana {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be positive and finite");
  }
}

// Adds scale * ∫ w u' v' over every element of `side` into A at `offset`.
void add_stiffness(SymTridiagonal& A, const Geometry& g, Side side, std::size_t offset,
                   double scale) {
  const auto& x = g.nodes(side);
  const auto& ew = g.element_weight(side);
  auto& diag = A.diag();
  auto& off = A.off();
  for (std::size_t e = 0; e + 1 < x.size(); ++e) {
    const double h = x[e + 1] - x[e];
    const double k = scale * ew[e] / (h * h);
    diag[offset + e] += k;
    diag[offset + e + 1] += k;
    off[offset + e] -= k;
  }
}

void add_reaction(OperatorPair& op, const Geometry& g, const CoefField& c, std::size_t offset,
                  double scale) {
  const auto& m = g.lumped_mass(c.side);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double v = scale * m[i] * c.values[i];
    op.A.diag()[offset + i] += v;
    op.potential[offset + i] += v;
  }
}

}  // namespace

std::vector<double> weighted_mass(const Layout& layout, double weight2, const Geometry& g) {
  std::vector<double> b;
  b.reserve(layout.size());
  if (layout.membrane) {
    for (double m : g.lumped_mass(Side::One)) b.push_back(m);
    for (double m : g.lumped_mass(Side::Two)) b.push_back(weight2 * m);
  } else {
    for (double m : g.lumped_mass(layout.side)) b.push_back(m);
  }
  return b;
}

OperatorPair assemble_membrane(double d, const CoefField& c1, const CoefField& c2, double gamma1,
                               double gamma2, const Geometry& g) {
  check_field(c1, g, Side::One);
  check_field(c2, g, Side::Two);
  require_positive(d, "d");
  require_positive(gamma1, "gamma1");
  require_positive(gamma2, "gamma2");

  OperatorPair op;
  op.layout = {true, Side::One, g.node_count(Side::One), g.node_count(Side::Two)};
  op.d = d;
  op.weight2 = gamma1 / gamma2;
  const std::size_t n1 = op.layout.n1;
  const std::size_t n = op.layout.size();

  SymTridiagonal form(n);
  add_stiffness(form, g, Side::One, 0, d);
  add_stiffness(form, g, Side::Two, n1, d * op.weight2);
  // Membrane block couples the two traces of the interface node.
  const double k = d * gamma1 * g.interface_measure();
  form.diag()[n1 - 1] += k;
  form.diag()[n1] += k;
  form.off()[n1 - 1] -= k;

  op.form_part = form;
  op.A = form;
  op.form_potential.assign(n, 0.0);
  op.potential.assign(n, 0.0);
  add_reaction(op, g, c1, 0, 1.0);
  add_reaction(op, g, c2, n1, op.weight2);
  op.B = weighted_mass(op.layout, op.weight2, g);
  op.load.assign(n, 0.0);
  return op;
}

OperatorPair assemble_scalar(double d, const CoefField& c, const RobinSpec& robin,
                             const Geometry& g, Side side) {
  check_field(c, g, side);
  require_positive(d, "d");
  validate(robin);

  OperatorPair op;
  op.layout = {false, side, g.node_count(Side::One), g.node_count(Side::Two)};
  op.d = d;
  op.weight2 = 1.0;
  const std::size_t n = op.layout.size();

  SymTridiagonal form(n);
  add_stiffness(form, g, side, 0, d);
  op.load.assign(n, 0.0);
  op.form_potential.assign(n, 0.0);
  for (End end : {End::Lower, End::Upper}) {
    const auto& bc = robin.at(end);
    const double measure = g.boundary_measure(side, end);
    const std::size_t row = end == End::Lower ? 0 : n - 1;
    form.diag()[row] += d * bc.g * measure;
    op.form_potential[row] += d * bc.g * measure;
    op.load[row] += d * bc.h * measure;
  }
  op.form_part = form;
  op.A = form;
  op.potential = op.form_potential;
  add_reaction(op, g, c, 0, 1.0);
  op.B = weighted_mass(op.layout, 1.0, g);
  return op;
}

std::vector<double> apply_operator(const OperatorPair& op, std::span<const double> x, Part part) {
  const std::size_t n = op.size();
  if (x.size() != n) throw Error(ErrorCode::DimensionMismatch, "apply size mismatch");
  const auto& off = (part == Part::Full ? op.A : op.form_part).off();
  const auto& pot = part == Part::Full ? op.potential : op.form_potential;
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = pot[i] * x[i];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double flux = -off[i] * (x[i] - x[i + 1]);
    y[i] += flux;
    y[i + 1] -= flux;
  }
  return y;
}

double energy(const OperatorPair& op, std::span<const double> x, Part part) {
  const std::size_t n = op.size();
  if (x.size() != n) throw Error(ErrorCode::DimensionMismatch, "energy size mismatch");
  const auto& off = (part == Part::Full ? op.A : op.form_part).off();
  const auto& pot = part == Part::Full ? op.potential : op.form_potential;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += pot[i] * x[i] * x[i];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double dx = x[i] - x[i + 1];
    s -= off[i] * dx * dx;
  }
  return s;
}

double mass_product(const OperatorPair& op, std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < op.B.size(); ++i) s += op.B[i] * x[i] * y[i];
  return s;
}

std::vector<double> flatten(const PairField& u) {
  std::vector<double> v(u.u1.values);
  v.insert(v.end(), u.u2.values.begin(), u.u2.values.end());
  return v;
}

std::vector<double> flatten(const CoefField& u) { return u.values; }

PairField split_pair(const Layout& layout, const std::vector<double>& v) {
  if (!layout.membrane || v.size() != layout.size()) {
    throw Error(ErrorCode::DimensionMismatch, "vector does not match a membrane layout");
  }
  PairField out;
  out.u1 = {Side::One, std::vector<double>(v.begin(), v.begin() + static_cast<long>(layout.n1))};
  out.u2 = {Side::Two, std::vector<double>(v.begin() + static_cast<long>(layout.n1), v.end())};
  return out;
}

CoefField split_scalar(const Layout& layout, const std::vector<double>& v) {
  if (layout.membrane || v.size() != layout.size()) {
    throw Error(ErrorCode::DimensionMismatch, "vector does not match a scalar layout");
  }
  return {layout.side, v};
}

namespace {

std::vector<double> forced(const OperatorPair& op, const std::vector<double>& f) {
  if (f.size() != op.size()) throw Error(ErrorCode::DimensionMismatch, "forcing size mismatch");
  std::vector<double> rhs(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) rhs[i] = op.B[i] * f[i] + op.load[i];
  TridiagonalLdlt(op.A).solve_in_place(rhs);
  return rhs;
}

}  // namespace

PairField solve_forced(const OperatorPair& op, const PairField& f) {
  return split_pair(op.layout, forced(op, flatten(f)));
}

CoefField solve_forced(const OperatorPair& op, const CoefField& f) {
  if (op.layout.membrane || f.side != op.layout.side) {
    throw Error(ErrorCode::DimensionMismatch, "forcing side does not match the operator");
  }
  return split_scalar(op.layout, forced(op, f.values));
}

void dump_triplets(std::ostream& os, const OperatorPair& op) {
  char buf[96];
  const auto& A = op.A;
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (i > 0) {
      std::snprintf(buf, sizeof buf, "A %zu %zu %.17g\n", i, i - 1, A.off()[i - 1]);
      os << buf;
    }
    std::snprintf(buf, sizeof buf, "A %zu %zu %.17g\n", i, i, A.diag()[i]);
    os << buf;
    if (i + 1 < A.size()) {
      std::snprintf(buf, sizeof buf, "A %zu %zu %.17g\n", i, i + 1, A.off()[i]);
      os << buf;
    }
  }
  for (std::size_t i = 0; i < op.B.size(); ++i) {
    std::snprintf(buf, sizeof buf, "B %zu %zu %.17g\n", i, i, op.B[i]);
    os << buf;
  }
}

}  // namespace membrana
