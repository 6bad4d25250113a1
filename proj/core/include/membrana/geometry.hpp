#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace membrana {

enum class GeometryKind { TwoInterval, ConcentricRadial };

enum class Side { One, Two };

/// Endpoint of a subdomain in the 1D coordinate. For side 1 the upper end is
/// the interface, for side 2 the lower end is.
enum class End { Lower, Upper };

const char* to_string(GeometryKind kind) noexcept;
const char* to_string(Side side) noexcept;

struct GeometrySpec {
  GeometryKind kind = GeometryKind::TwoInterval;
  int dim = 1;
  // TwoInterval: (lower, interface, upper) = (x0, a, x1).
  // ConcentricRadial: lower is ignored (always 0), interface = r1, upper = r2.
  double lower = 0.0;
  double interface = 0.5;
  double upper = 1.0;
  std::size_t n1 = 65;
  std::size_t n2 = 65;

  static GeometrySpec two_interval(double x0, double a, double x1, std::size_t n1, std::size_t n2);
  static GeometrySpec concentric_radial(int dim, double r1, double r2, std::size_t n1,
                                        std::size_t n2);
};

/// Consistent P1 mass moments of one element against the weight:
/// ii = ∫φ_l² w, ij = ∫φ_l φ_r w, jj = ∫φ_r² w.
struct ElementMoments {
  double ii = 0.0;
  double ij = 0.0;
  double jj = 0.0;
};

/// Immutable 1D realization of the split domain. Each side owns its own node
/// sequence; the interface coordinate is the last node of side 1 and the
/// first node of side 2.
class Geometry {
 public:
  GeometryKind kind() const noexcept { return spec_.kind; }
  int dim() const noexcept { return spec_.dim; }
  const GeometrySpec& spec() const noexcept { return spec_; }

  const std::vector<double>& nodes(Side side) const noexcept { return sides_[index(side)].nodes; }
  std::size_t node_count(Side side) const noexcept { return nodes(side).size(); }

  /// m_i = ∫ φ_i w, exact. Row sums of the consistent mass.
  const std::vector<double>& lumped_mass(Side side) const noexcept {
    return sides_[index(side)].lumped;
  }
  /// ∫_e w for every element e = (x_k, x_{k+1}).
  const std::vector<double>& element_weight(Side side) const noexcept {
    return sides_[index(side)].element_weight;
  }
  const std::vector<ElementMoments>& element_moments(Side side) const noexcept {
    return sides_[index(side)].moments;
  }

  double volume(Side side) const noexcept { return sides_[index(side)].volume; }
  double interface_coordinate() const noexcept { return spec_.interface; }
  double interface_measure() const noexcept { return point_measure(spec_.interface); }
  /// Measure of the boundary point; zero at the radial origin.
  double boundary_measure(Side side, End end) const noexcept;
  /// True when the given end is the membrane.
  static bool is_interface(Side side, End end) noexcept {
    return (side == Side::One) == (end == End::Upper);
  }

  double mesh_size(Side side) const noexcept;
  double distance_to_interface(Side side, std::size_t i) const;

  /// Radial weight w(r); 1 for TwoInterval.
  double weight(double r) const noexcept;
  /// ω_{N-1} r^{N-1}
  double point_measure(double r) const noexcept;

  static std::size_t index(Side side) noexcept { return side == Side::One ? 0 : 1; }

 private:
  friend Geometry build_geometry(const GeometrySpec& spec);
  friend Geometry refine(const Geometry& g);

  struct SideData {
    std::vector<double> nodes;
    std::vector<double> lumped;
    std::vector<double> element_weight;
    std::vector<ElementMoments> moments;
    double volume = 0.0;
  };

  void fill_measures();

  GeometrySpec spec_;
  double sphere_area_ = 1.0;
  std::array<SideData, 2> sides_;
};

/// Surface area of the unit sphere in R^N; 2 for N = 1 is not used, the
/// interval case has weight 1.
double unit_sphere_area(int dim);

/// Uniform meshes per subdomain. Throws InvalidBounds or TooFewNodes.
Geometry build_geometry(const GeometrySpec& spec);

/// Bisects every mesh interval: n nodes become 2n - 1.
Geometry refine(const Geometry& g);

}  // namespace membrana
