#include <gtest/gtest.h>

#include <cmath>

#include "membrana/eigen.hpp"
#include "membrana/errors.hpp"
#include "membrana/logistic.hpp"
#include "oracles.hpp"

using namespace membrana;

namespace {

// Shooting oracle for d = 1, beta = 2, alpha = 1, Robin g = 1 at x = 1.
constexpr double kShootLeft = 1.37838930619896;
constexpr double kShootRight = 0.928839092626728;

Geometry unit(std::size_t n = 65) {
  return build_geometry(GeometrySpec::two_interval(0.0, 0.5, 1.0, n, n));
}

MembraneLogistic problem(const Geometry& g, double d, double b1, double b2) {
  MembraneLogistic p;
  p.d = d;
  p.beta1 = CoefField::sample(g, Side::One, [=](double x) { return b1 + std::sin(4 * x); });
  p.beta2 = CoefField::constant(g, Side::Two, b2);
  p.alpha1 = CoefField::constant(g, Side::One, 1.0);
  p.alpha2 = CoefField::sample(g, Side::Two, [](double x) { return 1.0 + x; });
  p.gamma1 = 0.7;
  p.gamma2 = 1.6;
  return p;
}

}  // namespace

TEST(LogisticOracle, FrozenShooting) {
  EXPECT_NEAR(oracle::logistic_shoot_value(1.0, 2.0, 1.0, 1.0, 0.0), kShootLeft, 1e-11);
  EXPECT_NEAR(oracle::logistic_shoot_value(1.0, 2.0, 1.0, 1.0, 1.0), kShootRight, 1e-11);
}

TEST(Logistic, ConstantCoefficientsGiveConstantState) {
  const auto g = unit();
  MembraneLogistic p;
  p.d = 0.3;
  p.beta1 = CoefField::constant(g, Side::One, 2.0);
  p.beta2 = CoefField::constant(g, Side::Two, 2.0);
  p.alpha1 = CoefField::constant(g, Side::One, 4.0);
  p.alpha2 = CoefField::constant(g, Side::Two, 4.0);
  p.gamma1 = 2.0;
  p.gamma2 = 0.5;
  const auto r = solve_logistic_membrane(p, g);
  ASSERT_TRUE(r.positive());
  for (double v : r.solution) EXPECT_NEAR(v, 0.5, 1e-12);
}

TEST(Logistic, ScalarRobinAgainstShooting) {
  const auto g = build_geometry(GeometrySpec::two_interval(0.0, 1.0, 2.0, 513, 3));
  ScalarLogistic p;
  p.d = 1.0;
  p.beta = CoefField::constant(g, Side::One, 2.0);
  p.alpha = CoefField::constant(g, Side::One, 1.0);
  p.robin = RobinSpec{{}, {1.0, 0.0}};
  const auto r = solve_logistic_scalar(p, g);
  ASSERT_TRUE(r.positive());
  const auto u = r.scalar();
  EXPECT_NEAR(u.values.front(), kShootLeft, 2e-6);
  EXPECT_NEAR(u.values.back(), kShootRight, 2e-6);
}

TEST(Logistic, SolutionIsZeroOfItsOwnEigenproblem) {
  const auto g = unit();
  const auto p = problem(g, 0.05, 0.5, -0.3);
  const auto r = solve_logistic_membrane(p, g);
  ASSERT_TRUE(r.positive());
  const auto u = r.pair();
  auto c1 = u.u1, c2 = u.u2;
  for (std::size_t i = 0; i < c1.size(); ++i) c1[i] = p.alpha1[i] * u.u1[i] - p.beta1[i];
  for (std::size_t i = 0; i < c2.size(); ++i) c2[i] = p.alpha2[i] * u.u2[i] - p.beta2[i];
  EXPECT_NEAR(lambda1(p.d, c1, c2, p.gamma1, p.gamma2, g), 0.0, 1e-8);
  EXPECT_LT(membrane_residual(p, g, u), 1e-12);
}

TEST(Logistic, AprioriBound) {
  const auto g = unit();
  const auto p = problem(g, 0.01, 1.0, 0.5);
  const auto r = solve_logistic_membrane(p, g);
  ASSERT_TRUE(r.positive());
  const double bound = std::max(extrema(p.beta1).upper / 1.0, 0.5 / 1.0);
  for (double v : r.solution) EXPECT_LE(v, bound + 1e-10);
}

TEST(Logistic, FromBelowAgreesWithFromAbove) {
  const auto g = unit(129);
  const auto p = problem(g, 0.2, 0.2, -0.5);
  const auto above = solve_logistic_membrane(p, g);
  const auto below = solve_logistic_membrane_from_below(p, g);
  ASSERT_TRUE(above.positive());
  ASSERT_TRUE(below.positive());
  for (std::size_t i = 0; i < above.solution.size(); ++i) {
    EXPECT_NEAR(above.solution[i], below.solution[i], 1e-9);
  }
}

TEST(Logistic, GateFailureReportsEigenvalue) {
  const auto g = unit();
  MembraneLogistic p;
  p.d = 100.0;
  p.beta1 = CoefField::constant(g, Side::One, -2.0);
  p.beta2 = CoefField::constant(g, Side::Two, 1.0);
  p.alpha1 = CoefField::constant(g, Side::One, 1.0);
  p.alpha2 = CoefField::constant(g, Side::Two, 1.0);
  const auto r = solve_logistic_membrane(p, g);
  EXPECT_FALSE(r.positive());
  EXPECT_GT(r.gate_eigenvalue, 0.0);
  try {
    (void)r.pair();
    FAIL() << "expected GateFailed";
  } catch (const GateFailed& e) {
    EXPECT_EQ(e.eigenvalue(), r.gate_eigenvalue);
  }
}

TEST(Logistic, BlowupFitRecoversPower) {
  const auto g = build_geometry(GeometrySpec::two_interval(0.0, 0.5, 1.0, 5, 1001));
  const auto v = CoefField::sample(g, Side::Two, [](double x) {
    const double delta = x - 0.5;
    return delta > 0 ? 6.0 / (delta * delta) : 1.0;
  });
  const auto fit = fit_blowup(g, v, 0.0025, 0.025);
  EXPECT_NEAR(fit.exponent, 2.0, 1e-10);
  EXPECT_NEAR(fit.prefactor, 6.0, 1e-8);
  EXPECT_LT(fit.residual, 1e-10);
}

TEST(Logistic, LargeSolutionValidatesInput) {
  const auto g = unit();
  const auto a = CoefField::constant(g, Side::Two, 1.0);
  EXPECT_THROW(approximate_large_solution(1.0, a, 1.0, g, {1e2, 1e3, 1e4}), Error);
  EXPECT_THROW(approximate_large_solution(1.0, a, 1.0, g, {1e2, 1e4, 1e3, 1e6}), Error);
}
