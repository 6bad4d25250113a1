#include "membrana/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "membrana/errors.hpp"

namespace membrana {

namespace {

SymTridiagonal shifted(const OperatorPair& op, double s) {
  SymTridiagonal m = op.A;
  for (std::size_t i = 0; i < m.size(); ++i) m.diag()[i] -= s * op.B[i];
  return m;
}

// Factorization of A − sB if it is positive definite, nothing otherwise.
std::optional<TridiagonalLdlt> try_factor(const OperatorPair& op, double s) {
  try {
    TridiagonalLdlt f(shifted(op, s));
    if (!f.positive_definite()) return std::nullopt;
    return f;
  } catch (const Error&) {
    return std::nullopt;
  }
}

void normalize(std::vector<double>& y) {
  std::size_t k = 0;
  for (std::size_t i = 1; i < y.size(); ++i) {
    if (std::abs(y[i]) > std::abs(y[k])) k = i;
  }
  const double s = y[k];
  for (double& v : y) v /= s;
}

}  // namespace

EigenPair principal_pair(const OperatorPair& op, double c_lower, const EigenOptions& opts) {
  const std::size_t n = op.size();
  double shift = c_lower - 1.0;
  auto factor = try_factor(op, shift);
  if (!factor) {
    std::ostringstream os;
    os << "A - sB is not positive definite at shift " << shift;
    throw Error(ErrorCode::InvalidShift, os.str());
  }

  const double norm_a = op.A.norm_inf();
  const double norm_b = *std::max_element(op.B.begin(), op.B.end());

  std::vector<double> x(n, 1.0);
  double nu_prev = std::numeric_limits<double>::quiet_NaN();
  double eps = 1e-2;  // fraction of (ν − shift) kept when the shift is moved
  EigenPair out;
  out.layout = op.layout;

  for (int it = 1; it <= opts.max_iterations; ++it) {
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = op.B[i] * x[i];
    factor->solve_in_place(y);
    normalize(y);
    x = std::move(y);

    const double nu = energy(op, x) / mass_product(op, x, x);
    const auto ax = apply_operator(op, x);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) res = std::max(res, std::abs(ax[i] - nu * op.B[i] * x[i]));

    const double scale = std::max(1.0, std::abs(nu));
    const double change = std::abs(nu - nu_prev);
    const bool settled = change < opts.rq_tol * scale;
    if (settled && res <= opts.residual_tol * (norm_a + std::abs(nu) * norm_b)) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0)) {
          std::ostringstream os;
          os << "eigenvector entry " << i << " is " << x[i] << "; refine the mesh";
          throw Error(ErrorCode::NonPositiveEigenvector, os.str());
        }
      }
      out.value = nu;
      out.vector = std::move(x);
      out.iterations = it;
      out.residual = res;
      return out;
    }

    // Move the shift towards ν once the quotient has roughly settled. The
    // quotient overestimates ν₁, so a candidate above ν₁ shows up as a
    // negative pivot and is rejected.
    if (change < 1e-3 * scale && eps < 0.5 && nu - shift > 1e-13 * scale) {
      for (; eps < 0.5; eps *= 10.0) {
        const double candidate = nu - eps * (nu - shift);
        if (!(candidate > shift)) break;
        if (auto f = try_factor(op, candidate)) {
          factor = std::move(f);
          shift = candidate;
          break;
        }
      }
    }
    nu_prev = nu;
  }
  throw Error(ErrorCode::NoConvergence,
              "inverse iteration did not converge in " + std::to_string(opts.max_iterations) +
                  " iterations");
}

EigenPair membrane_pair(double d, const CoefField& c1, const CoefField& c2, double gamma1,
                        double gamma2, const Geometry& g, const EigenOptions& opts) {
  const auto op = assemble_membrane(d, c1, c2, gamma1, gamma2, g);
  const double lower = std::min(extrema(c1).lower, extrema(c2).lower);
  return principal_pair(op, lower - 1.0, opts);
}

double lambda1(double d, const CoefField& c1, const CoefField& c2, double gamma1, double gamma2,
               const Geometry& g, const EigenOptions& opts) {
  return membrane_pair(d, c1, c2, gamma1, gamma2, g, opts).value;
}

EigenPair scalar_pair(double d, const CoefField& c, const RobinSpec& robin, const Geometry& g,
                      Side side, const EigenOptions& opts) {
  const auto op = assemble_scalar(d, c, robin, g, side);
  return principal_pair(op, extrema(c).lower - 1.0, opts);
}

RobinSpec membrane_robin(Side side, double g, double h) {
  RobinSpec r;
  if (side == Side::One) r.upper = {g, h};
  else r.lower = {g, h};
  return r;
}

UncoupledSigmas sigma_uncoupled(const Geometry& g, double gamma1, double gamma2,
                                const EigenOptions& opts) {
  UncoupledSigmas s;
  s.side1 = scalar_pair(1.0, CoefField::constant(g, Side::One, 0.0),
                        membrane_robin(Side::One, gamma1), g, Side::One, opts);
  s.side2 = scalar_pair(1.0, CoefField::constant(g, Side::Two, 0.0),
                        membrane_robin(Side::Two, gamma2), g, Side::Two, opts);
  return s;
}

}  // namespace membrana
