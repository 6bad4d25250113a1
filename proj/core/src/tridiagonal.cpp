#include "membrana/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "membrana/errors.hpp"

namespace membrana {

double SymTridiagonal::at(std::size_t i, std::size_t j) const {
  if (i == j) return diag_[i];
  if (j == i + 1) return off_[i];
  if (i == j + 1) return off_[j];
  return 0.0;
}

void SymTridiagonal::multiply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = size();
  if (x.size() != n || y.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "tridiagonal multiply size mismatch");
  }
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag_[i] * x[i];
    if (i > 0) s += off_[i - 1] * x[i - 1];
    if (i + 1 < n) s += off_[i] * x[i + 1];
    y[i] = s;
  }
}

std::vector<double> SymTridiagonal::operator*(std::span<const double> x) const {
  std::vector<double> y(size());
  multiply(x, y);
  return y;
}

double SymTridiagonal::norm_inf() const {
  double best = 0.0;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    double s = std::abs(diag_[i]);
    if (i > 0) s += std::abs(off_[i - 1]);
    if (i + 1 < n) s += std::abs(off_[i]);
    best = std::max(best, s);
  }
  return best;
}

SymTridiagonal SymTridiagonal::plus_diagonal(std::span<const double> d) const {
  if (d.size() != size()) {
    throw Error(ErrorCode::DimensionMismatch, "diagonal update size mismatch");
  }
  SymTridiagonal out = *this;
  for (std::size_t i = 0; i < d.size(); ++i) out.diag_[i] += d[i];
  return out;
}

TridiagonalLdlt::TridiagonalLdlt(const SymTridiagonal& matrix)
    : pivot_(matrix.size()), lower_(matrix.off().size()) {
  const auto& a = matrix.diag();
  const auto& e = matrix.off();
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    double p = a[i];
    if (i > 0) p -= lower_[i - 1] * e[i - 1];
    double scale = std::abs(a[i]);
    if (i > 0) scale += std::abs(e[i - 1]);
    if (i + 1 < n) scale += std::abs(e[i]);
    if (!(std::abs(p) > 1e-14 * scale)) {
      std::ostringstream os;
      os << "pivot " << p << " at row " << i << " below 1e-14 of row scale " << scale;
      throw Error(ErrorCode::SingularOperator, os.str());
    }
    pivot_[i] = p;
    if (p < 0.0) ++negative_;
    if (i + 1 < n) lower_[i] = e[i] / p;
  }
}

void TridiagonalLdlt::solve_in_place(std::span<double> x) const {
  const std::size_t n = pivot_.size();
  if (x.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "LDLT solve size mismatch");
  }
  for (std::size_t i = 1; i < n; ++i) x[i] -= lower_[i - 1] * x[i - 1];
  for (std::size_t i = 0; i < n; ++i) x[i] /= pivot_[i];
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= lower_[i] * x[i + 1];
}

std::vector<double> TridiagonalLdlt::solve(std::span<const double> rhs) const {
  std::vector<double> x(rhs.begin(), rhs.end());
  solve_in_place(x);
  return x;
}

bool tridiagonal_inertia(const SymTridiagonal& matrix, std::size_t& negative) {
  const auto& a = matrix.diag();
  const auto& e = matrix.off();
  negative = 0;
  double prev = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double p = a[i];
    if (i > 0) p -= e[i - 1] * e[i - 1] / prev;
    if (!std::isfinite(p) || p == 0.0) return false;
    if (p < 0.0) ++negative;
    prev = p;
  }
  return true;
}

double norm_inf(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace membrana
