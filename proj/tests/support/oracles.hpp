// Independent reference solutions used by the tests. Nothing here calls the
// solvers under test except for reading assembled matrices.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include <Eigen/Dense>

#include "membrana/assembly.hpp"

namespace oracle {

inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double tol = 1e-15) {
  double flo = f(lo);
  if ((flo > 0) == (f(hi) > 0)) throw std::runtime_error("oracle bracket has no sign change");
  for (int it = 0; it < 200 && hi - lo > tol * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// -u'' = mu u on (0, L), u'(0) = 0, u'(L) + g u(L) = 0. With u = cos(kx):
// k tan(kL) = g, so z = kL solves z tan z = gL with z in (0, pi/2).
inline double robin_eigenvalue(double g, double length = 1.0) {
  const double gl = g * length;
  const double z = bisect([gl](double z) { return z * std::tan(z) - gl; }, 1e-12,
                          0.5 * M_PI - 1e-12);
  return z * z / (length * length);
}

// Two-interval membrane problem on (0, a) and (a, 1), Neumann outside,
// c1 = 0, c2 = 1, d = 1: u1 = cos(k x), u2 = B cosh(kappa (1 - x)) with
// k^2 = nu, kappa^2 = 1 - nu, u1'(a) = gamma1 [u], u2'(a) = gamma2 [u].
inline double pinned_membrane_eigenvalue(double a, double gamma1, double gamma2) {
  auto f = [=](double nu) {
    const double k = std::sqrt(nu);
    const double kappa = std::sqrt(1.0 - nu);
    const double ch = std::cosh(kappa * (1.0 - a));
    const double sh = std::sinh(kappa * (1.0 - a));
    const double c = std::cos(k * a);
    const double b = gamma2 * c / (kappa * sh + gamma2 * ch);
    return -k * std::sin(k * a) - gamma1 * (b * ch - c);
  };
  return bisect(f, 1e-12, 1.0 - 1e-12);
}

// Smallest eigenvalue of the assembled pencil (A, diag B) by a dense solver.
inline double dense_principal(const membrana::OperatorPair& op) {
  const auto n = static_cast<Eigen::Index>(op.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, i) = op.A.diag()[i];
    b(i, i) = op.B[i];
    if (i + 1 < n) a(i, i + 1) = a(i + 1, i) = op.A.off()[i];
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, b, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
  return es.eigenvalues()(0);
}

// -d u'' = u (beta - alpha u) on (0, 1), u'(0) = 0, u'(1) + g u(1) = 0, by RK4
// shooting on u(0). Assumes a positive solution exists below beta/alpha.
inline double logistic_shoot_value(double d, double beta, double alpha, double g, double x,
                                   int steps = 20000) {
  auto integrate = [=](double s, double stop, double& u, double& p) {
    u = s;
    p = 0.0;
    const double h = 1.0 / steps;
    auto rhs = [=](double uu) { return -uu * (beta - alpha * uu) / d; };
    for (int i = 0; i < steps && (i + 0.5) * h < stop; ++i) {
      const double k1u = p, k1p = rhs(u);
      const double k2u = p + 0.5 * h * k1p, k2p = rhs(u + 0.5 * h * k1u);
      const double k3u = p + 0.5 * h * k2p, k3p = rhs(u + 0.5 * h * k2u);
      const double k4u = p + h * k3p, k4p = rhs(u + h * k3u);
      u += h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
      p += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
    }
  };
  const double s = bisect(
      [&](double s) {
        double u, p;
        integrate(s, 1.0, u, p);
        return p + g * u;
      },
      1e-9 * beta / alpha, beta / alpha * (1.0 - 1e-12), 1e-14);
  double u, p;
  integrate(s, x, u, p);
  return u;
}

}  // namespace oracle
