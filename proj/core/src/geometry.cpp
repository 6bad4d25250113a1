#include "membrana/geometry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "membrana/errors.hpp"

namespace membrana {

namespace {

// 6-point Gauss-Legendre on [-1, 1]; exact for polynomials of degree 11,
// which covers φ_iφ_j r^{N-1} up to N = 10.
constexpr std::array<double, 6> kGaussX = {
    -0.9324695142031521, -0.6612093864662645, -0.2386191860831969,
    0.2386191860831969,  0.6612093864662645,  0.9324695142031521};
constexpr std::array<double, 6> kGaussW = {
    0.1713244923791704, 0.3607615730481386, 0.4679139345726910,
    0.4679139345726910, 0.3607615730481386, 0.1713244923791704};

std::vector<double> uniform(double lo, double hi, std::size_t n) {
  std::vector<double> x(n);
  const double h = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) x[i] = lo + h * static_cast<double>(i);
  x.back() = hi;
  return x;
}

}  // namespace

const char* to_string(GeometryKind kind) noexcept {
  return kind == GeometryKind::TwoInterval ? "two_interval" : "concentric_radial";
}

const char* to_string(Side side) noexcept { return side == Side::One ? "1" : "2"; }

GeometrySpec GeometrySpec::two_interval(double x0, double a, double x1, std::size_t n1,
                                        std::size_t n2) {
  GeometrySpec s;
  s.kind = GeometryKind::TwoInterval;
  s.dim = 1;
  s.lower = x0;
  s.interface = a;
  s.upper = x1;
  s.n1 = n1;
  s.n2 = n2;
  return s;
}

GeometrySpec GeometrySpec::concentric_radial(int dim, double r1, double r2, std::size_t n1,
                                             std::size_t n2) {
  GeometrySpec s;
  s.kind = GeometryKind::ConcentricRadial;
  s.dim = dim;
  s.lower = 0.0;
  s.interface = r1;
  s.upper = r2;
  s.n1 = n1;
  s.n2 = n2;
  return s;
}

double unit_sphere_area(int dim) {
  const double half = 0.5 * static_cast<double>(dim);
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

double Geometry::weight(double r) const noexcept {
  if (spec_.kind == GeometryKind::TwoInterval) return 1.0;
  return sphere_area_ * std::pow(r, spec_.dim - 1);
}

double Geometry::point_measure(double r) const noexcept { return weight(r); }

double Geometry::boundary_measure(Side side, End end) const noexcept {
  const auto& x = nodes(side);
  const double r = end == End::Lower ? x.front() : x.back();
  if (spec_.kind == GeometryKind::ConcentricRadial && side == Side::One && end == End::Lower) {
    return 0.0;
  }
  return point_measure(r);
}

double Geometry::mesh_size(Side side) const noexcept {
  const auto& x = nodes(side);
  return (x.back() - x.front()) / static_cast<double>(x.size() - 1);
}

double Geometry::distance_to_interface(Side side, std::size_t i) const {
  return std::abs(nodes(side).at(i) - spec_.interface);
}

void Geometry::fill_measures() {
  sphere_area_ =
      spec_.kind == GeometryKind::TwoInterval ? 1.0 : unit_sphere_area(spec_.dim);
  for (auto& s : sides_) {
    const std::size_t n = s.nodes.size();
    s.lumped.assign(n, 0.0);
    s.element_weight.assign(n - 1, 0.0);
    s.moments.assign(n - 1, {});
    for (std::size_t e = 0; e + 1 < n; ++e) {
      const double xl = s.nodes[e];
      const double xr = s.nodes[e + 1];
      const double half = 0.5 * (xr - xl);
      ElementMoments m;
      double total = 0.0;
      for (std::size_t q = 0; q < kGaussX.size(); ++q) {
        const double t = 0.5 * (kGaussX[q] + 1.0);  // local coordinate in [0, 1]
        const double wq = kGaussW[q] * half * weight(xl + t * (xr - xl));
        const double pl = 1.0 - t;
        m.ii += wq * pl * pl;
        m.ij += wq * pl * t;
        m.jj += wq * t * t;
        total += wq;
      }
      s.moments[e] = m;
      s.element_weight[e] = total;
      s.lumped[e] += m.ii + m.ij;
      s.lumped[e + 1] += m.ij + m.jj;
    }
    double v = 0.0;
    for (double w : s.element_weight) v += w;
    s.volume = v;
  }
}

Geometry build_geometry(const GeometrySpec& spec) {
  const bool radial = spec.kind == GeometryKind::ConcentricRadial;
  const double lo = radial ? 0.0 : spec.lower;
  if (!std::isfinite(lo) || !std::isfinite(spec.interface) || !std::isfinite(spec.upper) ||
      !(lo < spec.interface) || !(spec.interface < spec.upper)) {
    std::ostringstream os;
    os << "bounds must satisfy lower < interface < upper, got (" << lo << ", " << spec.interface
       << ", " << spec.upper << ")";
    throw Error(ErrorCode::InvalidBounds, os.str());
  }
  if (radial && (spec.dim < 1 || spec.dim > 10)) {
    throw Error(ErrorCode::InvalidBounds, "radial dimension must be in [1, 10]");
  }
  if (!radial && spec.dim != 1) {
    throw Error(ErrorCode::InvalidBounds, "two_interval geometry is one-dimensional");
  }
  if (spec.n1 < 3 || spec.n2 < 3) {
    throw Error(ErrorCode::TooFewNodes, "each subdomain needs at least 3 nodes");
  }
  Geometry g;
  g.spec_ = spec;
  g.spec_.lower = lo;
  g.sides_[0].nodes = uniform(lo, spec.interface, spec.n1);
  g.sides_[1].nodes = uniform(spec.interface, spec.upper, spec.n2);
  g.fill_measures();
  return g;
}

Geometry refine(const Geometry& g) {
  Geometry out;
  out.spec_ = g.spec_;
  for (std::size_t k = 0; k < 2; ++k) {
    const auto& x = g.sides_[k].nodes;
    auto& y = out.sides_[k].nodes;
    y.resize(2 * x.size() - 1);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      y[2 * i] = x[i];
      y[2 * i + 1] = 0.5 * (x[i] + x[i + 1]);
    }
    y.back() = x.back();
  }
  out.spec_.n1 = out.sides_[0].nodes.size();
  out.spec_.n2 = out.sides_[1].nodes.size();
  out.fill_measures();
  return out;
}

}  // namespace membrana
