#include "membrana/fields.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "membrana/errors.hpp"

namespace membrana {

CoefField CoefField::constant(const Geometry& g, Side side, double value) {
  return {side, std::vector<double>(g.node_count(side), value)};
}

CoefField CoefField::sample(const Geometry& g, Side side,
                            const std::function<double(double)>& f) {
  CoefField out{side, {}};
  const auto& x = g.nodes(side);
  out.values.reserve(x.size());
  for (double xi : x) {
    const double v = f(xi);
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, "coefficient is not finite at node " + std::to_string(xi));
    }
    out.values.push_back(v);
  }
  return out;
}

Extrema extrema(const CoefField& f) {
  if (f.values.empty()) throw Error(ErrorCode::DimensionMismatch, "empty field");
  const auto [lo, hi] = std::minmax_element(f.values.begin(), f.values.end());
  return {*lo, *hi};
}

CoefField positive_part(const CoefField& f) {
  CoefField out = f;
  for (double& v : out.values) v = std::max(0.0, v);
  return out;
}

void check_field(const CoefField& f, const Geometry& g, Side side) {
  if (f.side != side || f.size() != g.node_count(side)) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string("field does not match the mesh of side ") + to_string(side));
  }
}

double integrate(const CoefField& f, const Geometry& g) {
  check_field(f, g, f.side);
  const auto& m = g.lumped_mass(f.side);
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) s += m[i] * f.values[i];
  return s;
}

PairField PairField::constant(const Geometry& g, double value) {
  return {CoefField::constant(g, Side::One, value), CoefField::constant(g, Side::Two, value)};
}

void validate(const RobinSpec& robin) {
  for (const auto* bc : {&robin.lower, &robin.upper}) {
    if (!std::isfinite(bc->g) || !std::isfinite(bc->h) || bc->g < 0.0 || bc->h < 0.0) {
      throw Error(ErrorCode::InvalidArgument, "Robin coefficient and datum must be finite and >= 0");
    }
  }
}

namespace {

void put_row(std::ostream& os, double x, const char* side, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g,%s,%.17g\n", x, side, v);
  os << buf;
}

}  // namespace

void write_field_csv(std::ostream& os, const Geometry& g, const CoefField& u, bool header) {
  check_field(u, g, u.side);
  if (header) os << "coordinate,side,value\n";
  const auto& x = g.nodes(u.side);
  for (std::size_t i = 0; i < x.size(); ++i) put_row(os, x[i], to_string(u.side), u.values[i]);
}

void write_fields_csv(std::ostream& os, const Geometry& g, const PairField& u, bool header) {
  write_field_csv(os, g, u.u1, header);
  write_field_csv(os, g, u.u2, false);
}

}  // namespace membrana
