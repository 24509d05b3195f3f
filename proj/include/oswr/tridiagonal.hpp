#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "oswr/errors.hpp"

namespace oswr {

/// A x = rhs with A tridiagonal. For an n x n system `diag` and `rhs` have n
/// entries; `lower[i] = A(i+1, i)` and `upper[i] = A(i, i+1)` have n - 1.
struct TridiagonalSystem {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;
  std::vector<double> rhs;

  std::size_t size() const noexcept { return diag.size(); }

  void validate() const {
    const std::size_t n = diag.size();
    detail::require(n >= 1, "tridiagonal system must be non-empty");
    detail::require(rhs.size() == n, "rhs length must match the diagonal");
    detail::require(lower.size() + 1 == n && upper.size() + 1 == n,
                    "off-diagonals must have one entry fewer than the diagonal");
  }

  /// y = A x.
  std::vector<double> apply(std::span<const double> x) const {
    const std::size_t n = diag.size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = diag[i] * x[i];
      if (i > 0) acc += lower[i - 1] * x[i - 1];
      if (i + 1 < n) acc += upper[i] * x[i + 1];
      y[i] = acc;
    }
    return y;
  }
};

namespace detail {

/// Thomas elimination without pivoting. `x` receives the solution; `scratch`
/// needs n entries. Spans may alias `rhs` and `x`.
inline void thomas_kernel(std::span<const double> lower, std::span<const double> diag,
                          std::span<const double> upper, std::span<const double> rhs, std::span<double> x,
                          std::span<double> scratch) {
  const std::size_t n = diag.size();
  auto check_pivot = [&](double pivot, std::size_t row) {
    double scale = std::abs(diag[row]);
    if (row > 0) scale = std::max(scale, std::abs(lower[row - 1]));
    if (row + 1 < n) scale = std::max(scale, std::abs(upper[row]));
    if (!(std::abs(pivot) >= 1e-14 * scale) || scale == 0.0) {
      throw SingularityError("tridiagonal solve: zero pivot at row " + std::to_string(row));
    }
  };

  check_pivot(diag[0], 0);
  double denom = diag[0];
  scratch[0] = n > 1 ? upper[0] / denom : 0.0;
  x[0] = rhs[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag[i] - lower[i - 1] * scratch[i - 1];
    check_pivot(denom, i);
    scratch[i] = i + 1 < n ? upper[i] / denom : 0.0;
    x[i] = (rhs[i] - lower[i - 1] * x[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= scratch[i] * x[i + 1];
}

}  // namespace detail

/// Solves the system by the Thomas algorithm. Diagonal dominance is not
/// assumed; a pivot below 1e-14 times its row scale raises SingularityError.
inline std::vector<double> thomas_solve(const TridiagonalSystem& sys) {
  sys.validate();
  std::vector<double> x(sys.size()), scratch(sys.size());
  detail::thomas_kernel(sys.lower, sys.diag, sys.upper, sys.rhs, x, scratch);
  return x;
}

}  // namespace oswr
