#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace membrana {

/// Symmetric tridiagonal matrix. Every operator assembled here is of this
/// shape: both subdomain meshes are numbered consecutively and the membrane
/// couples the last node of side 1 with the first node of side 2.
class SymTridiagonal {
 public:
  SymTridiagonal() = default;
  explicit SymTridiagonal(std::size_t n) : diag_(n, 0.0), off_(n > 0 ? n - 1 : 0, 0.0) {}

  std::size_t size() const noexcept { return diag_.size(); }

  std::vector<double>& diag() noexcept { return diag_; }
  const std::vector<double>& diag() const noexcept { return diag_; }
  /// off()[i] is the (i, i+1) entry, equal to (i+1, i).
  std::vector<double>& off() noexcept { return off_; }
  const std::vector<double>& off() const noexcept { return off_; }

  /// Entry (i, j); zero outside the band.
  double at(std::size_t i, std::size_t j) const;

  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> operator*(std::span<const double> x) const;

  /// Max absolute row sum.
  double norm_inf() const;

  /// this + diag(d)
  SymTridiagonal plus_diagonal(std::span<const double> d) const;

 private:
  std::vector<double> diag_;
  std::vector<double> off_;
};

/// LDL^T factorization of a symmetric tridiagonal matrix without pivoting.
/// Also reports the inertia (number of negative pivots), which by
/// Sylvester's law counts eigenvalues of A - sB below s when the factored
/// matrix is A - sB with B positive definite.
class TridiagonalLdlt {
 public:
  /// Throws SingularOperator when a pivot falls below 1e-14 of its row scale.
  explicit TridiagonalLdlt(const SymTridiagonal& matrix);

  std::size_t negative_pivots() const noexcept { return negative_; }
  bool positive_definite() const noexcept { return negative_ == 0; }

  void solve_in_place(std::span<double> rhs) const;
  std::vector<double> solve(std::span<const double> rhs) const;

 private:
  std::vector<double> pivot_;
  std::vector<double> lower_;
  std::size_t negative_ = 0;
};

/// Counts negative pivots of the LDL^T factorization without throwing on a
/// tiny pivot. Returns false when the factorization breaks down.
bool tridiagonal_inertia(const SymTridiagonal& matrix, std::size_t& negative);

double norm_inf(std::span<const double> x);

}  // namespace membrana
