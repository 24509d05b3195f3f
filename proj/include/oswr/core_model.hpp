#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oswr/errors.hpp"

namespace oswr {

namespace detail {

inline bool is_integer_ratio(double num, double den, double rel_tol = 1e-9) {
  const double r = num / den;
  return std::abs(r - std::round(r)) <= rel_tol * std::max(1.0, std::abs(r));
}

}  // namespace detail

/// Coefficients of  u_tt + gamma u_t = c^2 u_xx + nu u_txx + f  on (0, L).
struct PhysicalParams {
  double c = 1.0;
  double gamma = 0.0;
  double nu = 0.0;
  double L = 1.0;

  void validate() const {
    detail::require(std::isfinite(c) && c > 0.0, "wave speed c must be > 0");
    detail::require(std::isfinite(L) && L > 0.0, "domain length L must be > 0");
    detail::require(std::isfinite(gamma) && gamma >= 0.0, "telegrapher damping gamma must be >= 0");
    detail::require(std::isfinite(nu) && nu >= 0.0, "viscoelastic damping nu must be >= 0");
  }

  bool explicit_scheme() const noexcept { return nu == 0.0; }
};

/// Uniform space-time grid. The grid must tile [0, L] x [0, T] exactly.
class GridSpec {
 public:
  GridSpec(const PhysicalParams& phys, double dx, double dt, double T) : dx_(dx), dt_(dt), T_(T) {
    phys.validate();
    detail::require(std::isfinite(dx) && dx > 0.0, "dx must be > 0");
    detail::require(std::isfinite(dt) && dt > 0.0, "dt must be > 0");
    detail::require(std::isfinite(T) && T > 0.0, "final time T must be > 0");
    detail::require(detail::is_integer_ratio(phys.L, dx), "L/dx must be an integer");
    detail::require(detail::is_integer_ratio(T, dt), "T/dt must be an integer");
    nx_ = static_cast<int>(std::lround(phys.L / dx)) + 1;
    nt_ = static_cast<int>(std::lround(T / dt));
    detail::require(nx_ >= 3, "grid needs at least one interior node");
    detail::require(nt_ >= 2, "grid needs at least two time steps");
    if (phys.explicit_scheme()) {
      // 1e-12 slack so that dt == dx at c == 1 is accepted despite rounding.
      detail::require(phys.c * dt / dx <= 1.0 + 1e-12,
                      "CFL condition c*dt/dx <= 1 violated for the explicit scheme (nu = 0)");
    }
  }

  double dx() const noexcept { return dx_; }
  double dt() const noexcept { return dt_; }
  double T() const noexcept { return T_; }
  int nx() const noexcept { return nx_; }
  int nt() const noexcept { return nt_; }
  double x(int i) const noexcept { return i * dx_; }
  double t(int n) const noexcept { return n * dt_; }

 private:
  double dx_;
  double dt_;
  double T_;
  int nx_ = 0;
  int nt_ = 0;
};

/// Two overlapping subdomains (0, b) and (a, L), both interfaces on grid nodes.
class Decomposition {
 public:
  Decomposition(double a, double b, const PhysicalParams& phys, const GridSpec& grid) : a_(a), b_(b) {
    detail::require(std::isfinite(a) && std::isfinite(b), "interfaces must be finite");
    detail::require(0.0 < a && a < b && b < phys.L, "interfaces must satisfy 0 < a < b < L");
    detail::require(detail::is_integer_ratio(a, grid.dx()), "interface a must lie on a grid node");
    detail::require(detail::is_integer_ratio(b, grid.dx()), "interface b must lie on a grid node");
    ia_ = static_cast<int>(std::lround(a / grid.dx()));
    ib_ = static_cast<int>(std::lround(b / grid.dx()));
    // Interface stencils reach two nodes into each subdomain.
    detail::require(ib_ - ia_ >= 2, "overlap must span at least two grid cells");
    detail::require(ib_ >= 2 && grid.nx() - 1 - ia_ >= 2, "subdomains must hold at least three nodes");
  }

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double overlap() const noexcept { return b_ - a_; }
  /// Global node index of x = a.
  int node_a() const noexcept { return ia_; }
  /// Global node index of x = b.
  int node_b() const noexcept { return ib_; }

 private:
  double a_;
  double b_;
  int ia_ = 0;
  int ib_ = 0;
};

/// Robin transmission operator  Lambda = p d/dt + q,  symbol lambda(s) = p s + q.
struct TransmissionParams {
  double p = 0.0;
  double q = 0.0;

  std::complex<double> symbol(std::complex<double> s) const { return p * s + q; }
  bool finite() const noexcept { return std::isfinite(p) && std::isfinite(q); }
};

/// Initial/forcing data on a fixed grid. The source is stored densely as
/// [time level][node]; an empty source means f == 0.
class ProblemSpec {
 public:
  ProblemSpec(PhysicalParams phys, GridSpec grid, std::vector<double> u0, std::vector<double> v0,
              std::vector<double> source = {})
      : phys_(phys), grid_(grid), u0_(std::move(u0)), v0_(std::move(v0)), source_(std::move(source)) {
    phys_.validate();
    const auto nx = static_cast<std::size_t>(grid_.nx());
    detail::require(u0_.size() == nx && v0_.size() == nx, "initial data length must equal node count");
    detail::require(source_.empty() || source_.size() == nx * static_cast<std::size_t>(grid_.nt() + 1),
                    "source must be empty or sampled on the full space-time grid");
    detail::require(u0_.front() == 0.0 && u0_.back() == 0.0,
                    "u0 must vanish at both ends (homogeneous Dirichlet)");
    for (double v : u0_) detail::require(std::isfinite(v), "u0 must be finite");
    for (double v : v0_) detail::require(std::isfinite(v), "v0 must be finite");
  }

  const PhysicalParams& phys() const noexcept { return phys_; }
  const GridSpec& grid() const noexcept { return grid_; }
  const std::vector<double>& u0() const noexcept { return u0_; }
  const std::vector<double>& v0() const noexcept { return v0_; }
  bool has_source() const noexcept { return !source_.empty(); }

  double source(int n, int i) const noexcept {
    return source_.empty() ? 0.0 : source_[static_cast<std::size_t>(n) * grid_.nx() + i];
  }

 private:
  PhysicalParams phys_;
  GridSpec grid_;
  std::vector<double> u0_;
  std::vector<double> v0_;
  std::vector<double> source_;
};

/// Temporal factor of a single Fourier mode sin(k x):
///   T'' + (gamma + nu k^2) T' + c^2 k^2 T = 0,  T(0) = 1,  T'(0) = Re(r+),
/// where r+ is the characteristic root with the largest real part (ties go to
/// the larger imaginary part).
class ModeDynamics {
 public:
  ModeDynamics(const PhysicalParams& phys, int mode) {
    phys.validate();
    detail::require(mode >= 1, "mode must be a positive integer");
    k_ = mode * std::numbers::pi / phys.L;
    const double damp = phys.gamma + phys.nu * k_ * k_;
    const double stiff = phys.c * phys.c * k_ * k_;
    half_damp_ = 0.5 * damp;
    disc_ = damp * damp - 4.0 * stiff;
    if (disc_ > 0.0) {
      const double root = std::sqrt(disc_);
      r1_ = 0.5 * (-damp + root);
      r2_ = 0.5 * (-damp - root);
      leading_ = {r1_, 0.0};
    } else if (disc_ == 0.0) {
      r1_ = r2_ = -half_damp_;
      leading_ = {r1_, 0.0};
    } else {
      omega_d_ = 0.5 * std::sqrt(-disc_);
      leading_ = {-half_damp_, omega_d_};
    }
    slope0_ = leading_.real();
  }

  double wavenumber() const noexcept { return k_; }
  std::complex<double> leading_root() const noexcept { return leading_; }
  /// T'(0).
  double initial_slope() const noexcept { return slope0_; }

  double value(double t) const {
    if (disc_ > 0.0) {
      // T = A e^{r1 t} + (1 - A) e^{r2 t}
      const double A = (slope0_ - r2_) / (r1_ - r2_);
      return A * std::exp(r1_ * t) + (1.0 - A) * std::exp(r2_ * t);
    }
    if (disc_ == 0.0) return (1.0 + (slope0_ - r1_) * t) * std::exp(r1_ * t);
    const double B = (slope0_ + half_damp_) / omega_d_;
    return std::exp(-half_damp_ * t) * (std::cos(omega_d_ * t) + B * std::sin(omega_d_ * t));
  }

 private:
  double k_ = 0.0;
  double half_damp_ = 0.0;
  double disc_ = 0.0;
  double r1_ = 0.0;
  double r2_ = 0.0;
  double omega_d_ = 0.0;
  std::complex<double> leading_;
  double slope0_ = 0.0;
};

/// Single-Fourier-mode test problem u0 = sin(m pi x / L), v0 = Re(r+) u0, f = 0.
/// It has the closed-form solution sin(k x) T(t); see analytic_solution().
inline ProblemSpec make_problem(const PhysicalParams& phys, const GridSpec& grid, int mode = 1) {
  const ModeDynamics dyn(phys, mode);
  const int nx = grid.nx();
  std::vector<double> u0(nx), v0(nx);
  for (int i = 1; i < nx - 1; ++i) {
    u0[i] = std::sin(dyn.wavenumber() * grid.x(i));
    v0[i] = dyn.initial_slope() * u0[i];
  }
  return ProblemSpec(phys, grid, std::move(u0), std::move(v0));
}

/// Closed-form solution of the problem built by make_problem with the same mode.
inline double analytic_solution(const ProblemSpec& problem, int mode, double x, double t) {
  const ModeDynamics dyn(problem.phys(), mode);
  if (x == 0.0 || x == problem.phys().L) return 0.0;
  return std::sin(dyn.wavenumber() * x) * dyn.value(t);
}

/// analytic_solution sampled on every grid node at time t.
inline std::vector<double> analytic_snapshot(const ProblemSpec& problem, int mode, double t) {
  const ModeDynamics dyn(problem.phys(), mode);
  const double temporal = dyn.value(t);
  const auto& grid = problem.grid();
  std::vector<double> out(grid.nx(), 0.0);
  for (int i = 1; i < grid.nx() - 1; ++i) out[i] = std::sin(dyn.wavenumber() * grid.x(i)) * temporal;
  return out;
}

}  // namespace oswr
