#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "membrana/asymptotics.hpp"
#include "membrana/errors.hpp"

using namespace membrana;

namespace {

const std::vector<double> kDecades = {1e-3, 1e-2, 1e-1, 1e0, 1e1, 1e2, 1e3};

Geometry unit(std::size_t n = 129) {
  return build_geometry(GeometrySpec::two_interval(0.0, 0.5, 1.0, n, n));
}

}  // namespace

TEST(Asymptotics, FlatSweepForEqualConstants) {
  const auto g = unit(65);
  const auto t = sweep_eigen_d(kDecades, CoefField::constant(g, Side::One, 0.75),
                               CoefField::constant(g, Side::Two, 0.75), 1.0, 3.0, g);
  for (const auto& r : t.rows) EXPECT_NEAR(r.value, 0.75, 1e-10);
}

TEST(Asymptotics, ConstantInstanceTargets) {
  const auto g = unit();
  const auto t = sweep_eigen_d({1e-2, 1e-1, 1, 10, 100, 1e3, 1e4},
                               CoefField::constant(g, Side::One, 1.0),
                               CoefField::constant(g, Side::Two, 3.0), 1.0, 2.0, g);
  EXPECT_NEAR(t.numbers.at("small_target"), 1.0, 1e-15);
  EXPECT_NEAR(t.numbers.at("large_target"), 5.0 / 3.0, 1e-14);
  EXPECT_LT(t.rows.back().deviation / (5.0 / 3.0), 1e-4);
  EXPECT_EQ(t.numbers.at("large_d_tail_monotone"), 1.0);
}

TEST(Asymptotics, RefusesUnresolvedDiffusion) {
  const auto g = unit(65);
  EXPECT_NEAR(min_resolvable_d(g), std::pow(10.0 / 128.0, 2), 1e-15);
  const auto t = sweep_eigen_d({1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0}, CoefField::constant(g, Side::One, 1.0),
                               CoefField::constant(g, Side::Two, 3.0), 1.0, 2.0, g);
  EXPECT_EQ(t.rows.size(), 4u);
  EXPECT_TRUE(t.notes.count("refused_d"));
}

TEST(Asymptotics, LogisticLargeDTarget) {
  const auto g = unit(65);
  MembraneLogistic p;
  p.beta1 = CoefField::constant(g, Side::One, 2.0);
  p.beta2 = CoefField::constant(g, Side::Two, -1.0);
  p.alpha1 = CoefField::constant(g, Side::One, 1.0);
  p.alpha2 = CoefField::constant(g, Side::Two, 1.0);
  const auto t = sweep_logistic_d({1e-1, 1, 10, 100, 1e3, 1e4, 1e5}, p, g);
  EXPECT_NEAR(t.numbers.at("large_target"), 0.5, 1e-15);
  EXPECT_LT(t.rows.back().deviation, 1e-3);
}

TEST(Asymptotics, LogisticExtinctionAtLargeD) {
  const auto g = unit(65);
  MembraneLogistic p;
  p.beta1 = CoefField::constant(g, Side::One, -2.0);
  p.beta2 = CoefField::constant(g, Side::Two, 1.0);
  p.alpha1 = CoefField::constant(g, Side::One, 1.0);
  p.alpha2 = CoefField::constant(g, Side::Two, 1.0);
  const auto t = sweep_logistic_d({1e-2, 1e-1, 1, 10, 100, 1e3, 1e4}, p, g);
  EXPECT_LT(t.numbers.at("weighted_growth"), 0.0);
  ASSERT_TRUE(std::isfinite(t.numbers.at("d_star")));
  for (const auto& r : t.rows) {
    if (r.param >= t.numbers.at("d_star")) {
      EXPECT_EQ(r.status, "no_positive_solution");
      EXPECT_GT(r.value, 0.0);
    }
  }
}

TEST(Asymptotics, ThetaOverLambdaTrivialCase) {
  const auto g = unit(65);
  const auto t = sweep_theta_over_lambda({1e-3, 1e-1, 10, 1e3}, CoefField::constant(g, Side::One, 1.0),
                                         CoefField::constant(g, Side::Two, 1.0), 1.0, 1.0, g);
  for (const auto& r : t.rows) EXPECT_NEAR(r.value, 1.0, 1e-9);
}

TEST(Asymptotics, HCurveThroughOrigin) {
  const auto g = unit(65);
  const auto c = trace_H({-10, -1, 0, 0.5, 1}, 1.0, 1.0, g);
  EXPECT_TRUE(c.strictly_decreasing);
  EXPECT_NEAR(c.samples[2].h, 0.0, 1e-8);
  for (const auto& s : c.samples) EXPECT_LT(s.residual, 1e-8);
  EXPECT_GT(c.samples[0].h, 0.0);
  EXPECT_LT(c.samples[0].h, c.sigma1);
}

TEST(Asymptotics, HCurveRejectsLambda2AboveSigma2) {
  const auto g = unit(65);
  EXPECT_THROW(trace_H({0.0, 5.0}, 1.0, 1.0, g), Error);
}

TEST(Asymptotics, ConstantRatesIdentity) {
  const auto g = unit(65);
  EXPECT_NEAR(lambda1_constant_rates(0.4, 0.4, 1.0, 2.0, g), -0.4, 1e-10);
}

TEST(Asymptotics, TailMonotone) {
  EXPECT_TRUE(tail_monotone({1.0, 0.5, 0.25, 0.1}));
  EXPECT_TRUE(tail_monotone({1.0, 0.5, 0.52, 0.1}));
  EXPECT_FALSE(tail_monotone({1.0, 0.5, 0.8, 0.1}));
}

TEST(Asymptotics, SweepCsvHeader) {
  SweepTable t;
  t.rows.push_back({1.0, 2.0, 3.0, 1.0, "large_d", std::nan(""), std::nan(""), "ok"});
  std::ostringstream os;
  write_sweep_csv(os, t);
  EXPECT_EQ(os.str(),
            "param,value,target,deviation,regime,alt_target,alt_deviation,status\n"
            "1,2,3,1,large_d,nan,nan,ok\n");
}
