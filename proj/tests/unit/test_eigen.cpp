#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "membrana/eigen.hpp"
#include "membrana/errors.hpp"
#include "oracles.hpp"

using namespace membrana;

namespace {

// Continuum values of the reference problems, from the oracles and frozen.
constexpr double kPinnedContinuum = 0.282739557138651;  // a = 0.5, gamma = (1, 2)
constexpr double kRobinContinuum = 0.740173884394968;   // (0, 1), g = 1
constexpr double kSigmaContinuum = 1.70705297555092;    // (0, 0.5), g = 1

double pinned(std::size_t n) {
  const auto g = build_geometry(GeometrySpec::two_interval(0.0, 0.5, 1.0, n, n));
  return lambda1(1.0, CoefField::constant(g, Side::One, 0.0),
                 CoefField::constant(g, Side::Two, 1.0), 1.0, 2.0, g);
}

}  // namespace

TEST(EigenOracle, FrozenValues) {
  EXPECT_NEAR(oracle::pinned_membrane_eigenvalue(0.5, 1.0, 2.0), kPinnedContinuum, 1e-13);
  EXPECT_NEAR(oracle::robin_eigenvalue(1.0), kRobinContinuum, 1e-13);
  EXPECT_NEAR(oracle::robin_eigenvalue(1.0, 0.5), kSigmaContinuum, 1e-13);
}

TEST(Eigen, ZeroModeIsConstant) {
  const auto g = build_geometry(GeometrySpec::two_interval(0.0, 0.3, 1.0, 33, 41));
  const auto e = membrane_pair(0.2, CoefField::constant(g, Side::One, 0.0),
                               CoefField::constant(g, Side::Two, 0.0), 0.5, 4.0, g);
  EXPECT_NEAR(e.value, 0.0, 1e-10);
  for (double v : e.vector) EXPECT_NEAR(v, e.vector.front(), 1e-8);
}

TEST(Eigen, ConstantShift) {
  const auto g = build_geometry(GeometrySpec::two_interval(0.0, 0.5, 1.0, 17, 17));
  EXPECT_NEAR(lambda1(3.0, CoefField::constant(g, Side::One, -1.25),
                      CoefField::constant(g, Side::Two, -1.25), 2.0, 0.3, g),
              -1.25, 1e-10);
}

TEST(Eigen, PinnedMembraneAgainstContinuum) {
  EXPECT_NEAR(pinned(513), 0.28273957258394, 1e-11);  // frozen discrete value
  EXPECT_NEAR(pinned(513), kPinnedContinuum, 1e-7);
  const double e1 = std::abs(pinned(65) - kPinnedContinuum);
  const double e2 = std::abs(pinned(129) - kPinnedContinuum);
  const double e3 = std::abs(pinned(257) - kPinnedContinuum);
  EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.1);
  EXPECT_NEAR(std::log2(e2 / e3), 2.0, 0.1);
}

TEST(Eigen, ScalarRobinAgainstTranscendentalRoot) {
  const auto g = build_geometry(GeometrySpec::two_interval(0.0, 1.0, 2.0, 1025, 3));
  const RobinSpec robin{{}, {1.0, 0.0}};
  const auto e = scalar_pair(1.0, CoefField::constant(g, Side::One, 0.0), robin, g, Side::One);
  EXPECT_NEAR(e.value, 0.740173904412884, 1e-11);  // frozen discrete value
  EXPECT_NEAR(e.value, kRobinContinuum, 1e-6);
}

TEST(Eigen, UncoupledSigmasSymmetric) {
  const auto g = build_geometry(GeometrySpec::two_interval(0.0, 0.5, 1.0, 513, 513));
  const auto s = sigma_uncoupled(g, 1.0, 1.0);
  EXPECT_NEAR(s.sigma1(), s.sigma2(), 1e-10);
  EXPECT_NEAR(s.sigma1(), 1.70705313756347, 1e-10);  // frozen discrete value
  EXPECT_NEAR(s.sigma1(), kSigmaContinuum, 1e-6);
}

TEST(Eigen, MatchesDenseSolver) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const auto g = build_geometry(GeometrySpec::concentric_radial(2, 0.6, 1.0, 31, 23));
  for (int k = 0; k < 5; ++k) {
    const double a = u(rng), b = u(rng), c = u(rng);
    const auto c1 = CoefField::sample(g, Side::One, [=](double x) { return a * std::sin(3 * x); });
    const auto c2 = CoefField::sample(g, Side::Two, [=](double x) { return b + c * x * x; });
    const double d = std::exp(u(rng));
    const double g1 = std::exp(u(rng) / 2), g2 = std::exp(u(rng) / 2);
    const auto op = assemble_membrane(d, c1, c2, g1, g2, g);
    const auto e = membrane_pair(d, c1, c2, g1, g2, g);
    const double ref = oracle::dense_principal(op);
    EXPECT_NEAR(e.value, ref, 1e-9 * std::max(1.0, std::abs(ref))) << k;
    for (double v : e.vector) EXPECT_GT(v, 0.0);
  }
}

TEST(Eigen, BadShiftRejected) {
  const auto g = build_geometry(GeometrySpec::two_interval(0.0, 0.5, 1.0, 9, 9));
  const auto op = assemble_membrane(1.0, CoefField::constant(g, Side::One, 1.0),
                                    CoefField::constant(g, Side::Two, 1.0), 1.0, 1.0, g);
  try {
    (void)principal_pair(op, 5.0);
    FAIL() << "expected InvalidShift";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidShift);
  }
}

TEST(Eigen, MonotoneInCoefficient) {
  const auto g = build_geometry(GeometrySpec::two_interval(0.0, 0.5, 1.0, 33, 33));
  const auto c2 = CoefField::constant(g, Side::Two, 0.0);
  double prev = -1e300;
  for (double l1 : {-3.0, -1.0, 0.0, 2.0}) {
    const double v = lambda1(1.0, CoefField::constant(g, Side::One, l1), c2, 1.0, 1.0, g);
    EXPECT_GT(v, prev);
    prev = v;
  }
}
