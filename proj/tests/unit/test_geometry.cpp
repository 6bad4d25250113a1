#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "membrana/errors.hpp"
#include "membrana/geometry.hpp"

using namespace membrana;

namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

ErrorCode code_of(const GeometrySpec& spec) {
  try {
    (void)build_geometry(spec);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Geometry, TwoIntervalVolumesAndMass) {
  const auto g = build_geometry(GeometrySpec::two_interval(0.0, 0.3, 1.0, 7, 11));
  EXPECT_NEAR(g.volume(Side::One), 0.3, 1e-15);
  EXPECT_NEAR(g.volume(Side::Two), 0.7, 1e-15);
  EXPECT_NEAR(sum(g.lumped_mass(Side::One)), 0.3, 1e-15);
  EXPECT_NEAR(sum(g.lumped_mass(Side::Two)), 0.7, 1e-15);
  EXPECT_DOUBLE_EQ(g.nodes(Side::One).back(), g.nodes(Side::Two).front());
  EXPECT_DOUBLE_EQ(g.interface_measure(), 1.0);
  EXPECT_NEAR(g.mesh_size(Side::Two), 0.07, 1e-15);
}

TEST(Geometry, RadialVolumesExactAtCoarseMesh) {
  for (int dim : {1, 2, 3, 5}) {
    const auto g = build_geometry(GeometrySpec::concentric_radial(dim, 0.5, 1.0, 3, 3));
    const double ball = unit_sphere_area(dim) / dim;
    EXPECT_NEAR(g.volume(Side::One), ball * std::pow(0.5, dim), 1e-12) << dim;
    EXPECT_NEAR(g.volume(Side::Two), ball * (1.0 - std::pow(0.5, dim)), 1e-12) << dim;
    EXPECT_NEAR(sum(g.lumped_mass(Side::One)), g.volume(Side::One), 1e-12) << dim;
  }
}

TEST(Geometry, SphereAreas) {
  EXPECT_NEAR(unit_sphere_area(1), 2.0, 1e-14);
  EXPECT_NEAR(unit_sphere_area(2), 2.0 * std::numbers::pi, 1e-14);
  EXPECT_NEAR(unit_sphere_area(3), 4.0 * std::numbers::pi, 1e-13);
}

TEST(Geometry, RadialOriginHasNoBoundary) {
  const auto g = build_geometry(GeometrySpec::concentric_radial(3, 0.5, 1.0, 5, 5));
  EXPECT_EQ(g.boundary_measure(Side::One, End::Lower), 0.0);
  EXPECT_NEAR(g.interface_measure(), 4.0 * std::numbers::pi * 0.25, 1e-13);
  EXPECT_NEAR(g.boundary_measure(Side::Two, End::Upper), 4.0 * std::numbers::pi, 1e-13);
}

TEST(Geometry, InterfaceEnds) {
  EXPECT_TRUE(Geometry::is_interface(Side::One, End::Upper));
  EXPECT_TRUE(Geometry::is_interface(Side::Two, End::Lower));
  EXPECT_FALSE(Geometry::is_interface(Side::One, End::Lower));
  EXPECT_FALSE(Geometry::is_interface(Side::Two, End::Upper));
}

TEST(Geometry, DistanceToInterface) {
  const auto g = build_geometry(GeometrySpec::two_interval(0.0, 0.5, 1.0, 6, 6));
  EXPECT_NEAR(g.distance_to_interface(Side::One, 0), 0.5, 1e-15);
  EXPECT_NEAR(g.distance_to_interface(Side::Two, 0), 0.0, 1e-15);
  EXPECT_NEAR(g.distance_to_interface(Side::Two, 5), 0.5, 1e-15);
}

TEST(Geometry, RefineHalvesMesh) {
  const auto g = build_geometry(GeometrySpec::two_interval(0.0, 1.0, 3.0, 5, 9));
  const auto f = refine(g);
  EXPECT_EQ(f.node_count(Side::One), 9u);
  EXPECT_EQ(f.node_count(Side::Two), 17u);
  EXPECT_NEAR(f.mesh_size(Side::Two), 0.5 * g.mesh_size(Side::Two), 1e-15);
  EXPECT_NEAR(f.volume(Side::Two), 2.0, 1e-14);
}

TEST(Geometry, RejectsBadSpecs) {
  EXPECT_EQ(code_of(GeometrySpec::two_interval(0.0, 1.0, 0.5, 5, 5)), ErrorCode::InvalidBounds);
  EXPECT_EQ(code_of(GeometrySpec::two_interval(0.0, 0.5, 1.0, 2, 5)), ErrorCode::TooFewNodes);
  EXPECT_EQ(code_of(GeometrySpec::concentric_radial(11, 0.5, 1.0, 5, 5)),
            ErrorCode::InvalidBounds);
  EXPECT_EQ(code_of(GeometrySpec::concentric_radial(2, 1.0, 1.0, 5, 5)), ErrorCode::InvalidBounds);
}
