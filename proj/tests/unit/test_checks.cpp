#include <gtest/gtest.h>

#include <sstream>

#include "membrana/checks.hpp"
#include "membrana/eigen.hpp"
#include "membrana/errors.hpp"
#include "membrana/logistic.hpp"

using namespace membrana;

namespace {

struct PiconePair {
  Geometry g;
  RobinSpec robin;
  CoefField u, v;
};

PiconePair picone_inputs(std::size_t n) {
  PiconePair p{build_geometry(GeometrySpec::two_interval(0.0, 1.0, 2.0, n, 3)),
               RobinSpec{{}, {1.0, 0.0}},
               {},
               {}};
  ScalarLogistic s;
  s.beta = CoefField::constant(p.g, Side::One, 3.0);
  s.alpha = CoefField::constant(p.g, Side::One, 1.0);
  s.robin = p.robin;
  p.u = solve_logistic_scalar(s, p.g).scalar();
  p.v = scalar_pair(1.0, CoefField::constant(p.g, Side::One, 0.0), p.robin, p.g, Side::One).scalar();
  return p;
}

}  // namespace

TEST(Picone, TrivialCasesVanish) {
  const auto p = picone_inputs(65);
  EXPECT_EQ(picone_residual(p.u, p.u, PiconeKind::Identity, p.robin, p.g, Side::One), 0.0);
  auto cu = p.u;
  for (auto& x : cu.values) x *= 3.7;
  EXPECT_LT(picone_residual(p.u, cu, PiconeKind::Identity, p.robin, p.g, Side::One), 1e-12);
}

TEST(Picone, ScalingInvariant) {
  const auto p = picone_inputs(65);
  auto cv = p.v;
  for (auto& x : cv.values) x *= 0.01;
  const double a = picone_residual(p.u, p.v, PiconeKind::Identity, p.robin, p.g, Side::One);
  const double b = picone_residual(p.u, cv, PiconeKind::Identity, p.robin, p.g, Side::One);
  EXPECT_NEAR(a, b, 1e-12);
}

TEST(Picone, SmallAtModerateMesh) {
  const auto p = picone_inputs(257);
  EXPECT_LT(picone_residual(p.u, p.v, PiconeKind::Identity, p.robin, p.g, Side::One), 1e-4);
}

TEST(Picone, RejectsNonPositiveU) {
  auto p = picone_inputs(17);
  p.u.values[3] = 0.0;
  try {
    (void)picone_residual(p.u, p.v, PiconeKind::Identity, p.robin, p.g, Side::One);
    FAIL() << "expected NonPositiveU";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPositiveU);
  }
}

TEST(Picone, ConvergesAtSecondOrder) {
  const auto r = picone_convergence(4);
  EXPECT_TRUE(r.passed);
  for (double o : r.orders) EXPECT_GT(o, 1.8);
}

TEST(BoundSuite, DeterministicForSeed) {
  const auto g = build_geometry(GeometrySpec::two_interval(0.0, 0.5, 1.0, 33, 33));
  const auto a = bound_suite(11, 10, g);
  const auto b = bound_suite(11, 10, g);
  std::ostringstream sa, sb;
  write_reports_json(sa, {a});
  write_reports_json(sb, {b});
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_TRUE(a.passed);
  EXPECT_EQ(a.parts.size(), 4u);
}

TEST(BoundSuite, RejectsEmptyRun) {
  const auto g = build_geometry(GeometrySpec::two_interval(0.0, 0.5, 1.0, 9, 9));
  EXPECT_THROW(bound_suite(1, 0, g), Error);
}

TEST(Mms, NeedsThreeLevels) { EXPECT_THROW(mms_convergence(2, MmsProblem::Membrane), Error); }

TEST(Uniqueness, SmallProbe) {
  const auto g = build_geometry(GeometrySpec::two_interval(0.0, 0.5, 1.0, 65, 65));
  const auto r = uniqueness_probe(5, 4, g);
  EXPECT_TRUE(r.passed);
  EXPECT_LT(r.worst_violation, 1e-8);
}
