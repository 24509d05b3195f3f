#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <type_traits>

#include "oswr/errors.hpp"

namespace oswr {

struct NelderMeadConfig {
  double tol_x = 1e-4;
  double tol_f = 1e-4;
  int max_evaluations = 2000;
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;

  void validate() const {
    detail::require(tol_x > 0.0 && tol_f > 0.0, "Nelder-Mead tolerances must be > 0");
    detail::require(max_evaluations > 0, "max_evaluations must be positive");
    detail::require(reflection > 0.0, "reflection coefficient must be > 0");
    detail::require(expansion > 1.0 && expansion > reflection, "expansion must exceed 1 and reflection");
    detail::require(contraction > 0.0 && contraction < 1.0, "contraction must lie in (0, 1)");
    detail::require(shrink > 0.0 && shrink < 1.0, "shrink must lie in (0, 1)");
  }
};

template <std::size_t N>
struct SimplexResult {
  std::array<double, N> x{};
  double value = 0.0;
  int n_evaluations = 0;
  int n_iterations = 0;
  bool converged = false;
};

/// Nelder-Mead simplex minimization in the fminsearch formulation: initial
/// vertices perturb each coordinate of x0 by 5% (0.00025 if it is zero), and
/// the search stops once both the simplex size (max-norm distance to the best
/// vertex) and the objective spread fall below tolerance.
///
/// `on_iteration(iter, best_value)` is called after every completed iteration.
template <std::size_t N, class Objective, class Observer = std::nullptr_t>
SimplexResult<N> nelder_mead(Objective&& objective, const std::array<double, N>& x0,
                             const NelderMeadConfig& cfg = {}, Observer&& on_iteration = nullptr) {
  cfg.validate();
  using Point = std::array<double, N>;
  constexpr std::size_t kVerts = N + 1;

  SimplexResult<N> out;
  auto eval = [&](const Point& p) {
    ++out.n_evaluations;
    return static_cast<double>(objective(p));
  };

  std::array<Point, kVerts> v{};
  std::array<double, kVerts> f{};
  v[0] = x0;
  f[0] = eval(x0);
  if (!std::isfinite(f[0])) throw NumericalError("Nelder-Mead: objective is not finite at the start point");
  for (std::size_t j = 0; j < N; ++j) {
    Point y = x0;
    y[j] = y[j] != 0.0 ? 1.05 * y[j] : 0.00025;
    v[j + 1] = y;
    f[j + 1] = eval(y);
    if (!std::isfinite(f[j + 1])) {
      throw NumericalError("Nelder-Mead: objective is not finite at an initial simplex vertex");
    }
  }

  auto sort_simplex = [&] {
    std::array<std::size_t, kVerts> idx;
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t l, std::size_t r) { return f[l] < f[r]; });
    std::array<Point, kVerts> vs;
    std::array<double, kVerts> fs;
    for (std::size_t i = 0; i < kVerts; ++i) {
      vs[i] = v[idx[i]];
      fs[i] = f[idx[i]];
    }
    v = vs;
    f = fs;
  };
  auto combine = [](const Point& p, double wp, const Point& r, double wr) {
    Point out{};
    for (std::size_t d = 0; d < N; ++d) out[d] = wp * p[d] + wr * r[d];
    return out;
  };
  sort_simplex();

  constexpr double eps = std::numeric_limits<double>::epsilon();
  while (out.n_evaluations < cfg.max_evaluations) {
    double f_spread = 0.0;
    double x_spread = 0.0;
    double x_scale = 0.0;
    for (std::size_t d = 0; d < N; ++d) x_scale = std::max(x_scale, std::abs(v[0][d]));
    for (std::size_t i = 1; i < kVerts; ++i) {
      f_spread = std::max(f_spread, std::abs(f[i] - f[0]));
      for (std::size_t d = 0; d < N; ++d) x_spread = std::max(x_spread, std::abs(v[i][d] - v[0][d]));
    }
    if (f_spread <= std::max(cfg.tol_f, 10.0 * eps * std::abs(f[0])) &&
        x_spread <= std::max(cfg.tol_x, 10.0 * eps * x_scale)) {
      out.converged = true;
      break;
    }

    Point centroid{};
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t d = 0; d < N; ++d) centroid[d] += v[i][d] / static_cast<double>(N);

    const Point& worst = v[N];
    const double rho = cfg.reflection;
    const Point xr = combine(centroid, 1.0 + rho, worst, -rho);
    const double fr = eval(xr);
    bool do_shrink = false;

    if (fr < f[0]) {
      const double chi = cfg.expansion;
      const Point xe = combine(centroid, 1.0 + rho * chi, worst, -rho * chi);
      const double fe = eval(xe);
      if (fe < fr) {
        v[N] = xe;
        f[N] = fe;
      } else {
        v[N] = xr;
        f[N] = fr;
      }
    } else if (fr < f[N - 1]) {
      v[N] = xr;
      f[N] = fr;
    } else {
      const double psi = cfg.contraction;
      if (fr < f[N]) {
        const Point xc = combine(centroid, 1.0 + psi * rho, worst, -psi * rho);
        const double fc = eval(xc);
        if (fc <= fr) {
          v[N] = xc;
          f[N] = fc;
        } else {
          do_shrink = true;
        }
      } else {
        const Point xcc = combine(centroid, 1.0 - psi, worst, psi);
        const double fcc = eval(xcc);
        if (fcc < f[N]) {
          v[N] = xcc;
          f[N] = fcc;
        } else {
          do_shrink = true;
        }
      }
      if (do_shrink) {
        for (std::size_t i = 1; i < kVerts; ++i) {
          v[i] = combine(v[0], 1.0 - cfg.shrink, v[i], cfg.shrink);
          f[i] = eval(v[i]);
        }
      }
    }
    sort_simplex();
    ++out.n_iterations;
    if constexpr (!std::is_same_v<std::decay_t<Observer>, std::nullptr_t>) on_iteration(out.n_iterations, f[0]);
  }

  out.x = v[0];
  out.value = f[0];
  return out;
}

}  // namespace oswr
