#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "oswr/core_model.hpp"
#include "oswr/errors.hpp"
#include "oswr/tridiagonal.hpp"

namespace oswr {

/// Space-time displacement on a contiguous run of grid nodes, stored densely
/// as [time level 0..nt][local node]. `x_offset` is the global index of local
/// node 0.
class WaveField {
 public:
  WaveField(int n_levels, int n_nodes, int x_offset)
      : n_levels_(n_levels),
        n_nodes_(n_nodes),
        x_offset_(x_offset),
        values_(static_cast<std::size_t>(n_levels) * n_nodes, 0.0) {}

  int n_levels() const noexcept { return n_levels_; }
  int n_nodes() const noexcept { return n_nodes_; }
  int x_offset() const noexcept { return x_offset_; }

  double& operator()(int n, int i) noexcept { return values_[index(n, i)]; }
  double operator()(int n, int i) const noexcept { return values_[index(n, i)]; }
  /// Value at global node index.
  double global(int n, int gi) const noexcept { return (*this)(n, gi - x_offset_); }

  std::span<double> level(int n) noexcept { return {values_.data() + index(n, 0), std::size_t(n_nodes_)}; }
  std::span<const double> level(int n) const noexcept {
    return {values_.data() + index(n, 0), std::size_t(n_nodes_)};
  }

 private:
  std::size_t index(int n, int i) const noexcept { return static_cast<std::size_t>(n) * n_nodes_ + i; }

  int n_levels_;
  int n_nodes_;
  int x_offset_;
  std::vector<double> values_;
};

enum class InterfaceLocation { at_a, at_b };
enum class RobinSign { plus, minus };
enum class Side { left, right };

/// Robin data g(t) = (d/dx +/- Lambda) u sampled at one interface node for
/// every time level.
struct InterfaceTrace {
  std::vector<double> values;
  InterfaceLocation location = InterfaceLocation::at_b;
  RobinSign sign = RobinSign::plus;

  static InterfaceTrace zero(int n_levels, InterfaceLocation loc, RobinSign sign) {
    return {std::vector<double>(static_cast<std::size_t>(n_levels), 0.0), loc, sign};
  }
};

/// Closure of a subdomain end: homogeneous Dirichlet (physical boundary) or
/// Robin transmission with data taken from `trace` (non-owning).
struct BoundaryClosure {
  enum class Kind { dirichlet, robin };
  Kind kind = Kind::dirichlet;
  TransmissionParams tp{};
  const InterfaceTrace* trace = nullptr;

  static BoundaryClosure dirichlet() { return {}; }
  static BoundaryClosure robin(const TransmissionParams& tp, const InterfaceTrace& trace) {
    return {Kind::robin, tp, &trace};
  }
};

/// Discrete Robin condition at a subdomain end for the unknown level n+1:
///   boundary * u_j + neighbor * u_{j+-1} + second * u_{j+-2} = rhs,
/// with the known time levels n, n-1 already folded into rhs.
struct RobinRow {
  double boundary = 0.0;
  double neighbor = 0.0;
  double second = 0.0;
  double rhs = 0.0;
};

inline double robin_sign(RobinSign s) noexcept { return s == RobinSign::plus ? 1.0 : -1.0; }

/// Builds the receiving-side Robin row at time level `level` (= n+1).
///
/// Space: 3-point one-sided second-order stencil pointing into the subdomain.
/// Time: second-order backward difference (3u^{n+1} - 4u^n + u^{n-1}) / (2 dt).
inline RobinRow apply_robin_closure(const WaveField& field, int level, Side side, const TransmissionParams& tp,
                                    const InterfaceTrace& trace, double dx, double dt) {
  detail::require(level >= 2, "Robin closure needs two previous time levels");
  detail::require(level < static_cast<int>(trace.values.size()), "interface trace too short");
  const int j = side == Side::right ? field.n_nodes() - 1 : 0;
  const double dir = side == Side::right ? 1.0 : -1.0;  // d/dx stencil orientation
  const double sigma = robin_sign(trace.sign);
  const double history = 4.0 * field(level - 1, j) - field(level - 2, j);

  RobinRow row;
  row.boundary = dir * 3.0 / (2.0 * dx) + sigma * (3.0 * tp.p / (2.0 * dt) + tp.q);
  row.neighbor = -dir * 4.0 / (2.0 * dx);
  row.second = dir * 1.0 / (2.0 * dx);
  row.rhs = trace.values[level] + sigma * tp.p * history / (2.0 * dt);
  if (!(std::abs(row.boundary) >= 1e-14)) {
    throw ClosureError("Robin closure: degenerate coefficient of the boundary unknown");
  }
  return row;
}

/// Populates level 1 from the initial data with the second-order Taylor starter
///   u^1 = u0 + dt v0 + dt^2/2 (c^2 D2 u0 + nu D2 v0 - gamma v0 + f^0).
/// Differences use the global initial data, so a subdomain field gets exactly
/// the restriction of the full-domain level 1.
inline void first_time_step(WaveField& field, const ProblemSpec& problem) {
  const auto& grid = problem.grid();
  const auto& phys = problem.phys();
  const auto& u0 = problem.u0();
  const auto& v0 = problem.v0();
  const double dt = grid.dt(), dx = grid.dx();
  const int nx = grid.nx();
  for (int i = 0; i < field.n_nodes(); ++i) {
    const int g = field.x_offset() + i;
    if (g == 0 || g == nx - 1) {
      field(1, i) = 0.0;
      continue;
    }
    const double d2u = (u0[g + 1] - 2.0 * u0[g] + u0[g - 1]) / (dx * dx);
    const double d2v = (v0[g + 1] - 2.0 * v0[g] + v0[g - 1]) / (dx * dx);
    const double acc = phys.c * phys.c * d2u + phys.nu * d2v - phys.gamma * v0[g] + problem.source(0, g);
    field(1, i) = u0[g] + dt * v0[g] + 0.5 * dt * dt * acc;
    if (!std::isfinite(field(1, i))) throw StabilityError("FDTD: non-finite starter value", 1);
  }
}

/// Advances one subdomain (or the whole domain) of the FDTD scheme
///   (u^{n+1} - 2u^n + u^{n-1})/dt^2 + gamma (u^{n+1} - u^{n-1})/(2dt)
///     = c^2 D2 u^n / dx^2 + nu (D2 u^{n+1} - D2 u^{n-1}) / (2 dt dx^2) + f^n.
/// Explicit for nu == 0, one tridiagonal solve per step otherwise.
class SubdomainSolver {
 public:
  SubdomainSolver(const ProblemSpec& problem, int first_node, int last_node, BoundaryClosure left,
                  BoundaryClosure right)
      : problem_(&problem), first_(first_node), last_(last_node), left_(left), right_(right) {
    const auto& grid = problem.grid();
    detail::require(0 <= first_node && first_node < last_node && last_node < grid.nx(),
                    "subdomain node range out of bounds");
    detail::require(last_node - first_node >= 2, "subdomain needs at least three nodes");
    detail::require(left_.kind == BoundaryClosure::Kind::robin || first_node == 0,
                    "Dirichlet closure only applies at x = 0");
    detail::require(right_.kind == BoundaryClosure::Kind::robin || last_node == grid.nx() - 1,
                    "Dirichlet closure only applies at x = L");
    for (const auto* bc : {&left_, &right_}) {
      if (bc->kind != BoundaryClosure::Kind::robin) continue;
      detail::require(bc->trace != nullptr, "Robin closure needs a trace");
      detail::require(static_cast<int>(bc->trace->values.size()) == grid.nt() + 1,
                      "interface trace length must equal nt + 1");
      detail::require(bc->tp.finite(), "transmission parameters must be finite");
    }
    const auto& phys = problem.phys();
    const double dt = grid.dt(), dx = grid.dx();
    alpha_ = 1.0 / (dt * dt) + phys.gamma / (2.0 * dt);
    beta_ = phys.nu / (2.0 * dt * dx * dx);
    const int m = n_nodes();
    rhs_.resize(m);
    if (!phys.explicit_scheme()) {
      lower_.resize(m - 1);
      diag_.resize(m);
      upper_.resize(m - 1);
      scratch_.resize(m);
    }
  }

  int n_nodes() const noexcept { return last_ - first_ + 1; }
  int first_node() const noexcept { return first_; }

  WaveField make_field() const { return WaveField(problem_->grid().nt() + 1, n_nodes(), first_); }

  /// Fills level 0 with u0 and level 1 with the Taylor starter.
  void initialize(WaveField& field) const {
    const auto& u0 = problem_->u0();
    for (int i = 0; i < n_nodes(); ++i) field(0, i) = u0[first_ + i];
    first_time_step(field, *problem_);
  }

  /// Computes level n+1 from levels n and n-1.
  void step(WaveField& field, int n) {
    detail::require(n >= 1 && n + 1 < field.n_levels(), "step: time level out of range");
    const auto& grid = problem_->grid();
    const auto& phys = problem_->phys();
    const double dt = grid.dt(), dx = grid.dx();
    const double c2 = phys.c * phys.c / (dx * dx);
    const double damp = phys.gamma / (2.0 * dt);
    const double inv_dt2 = 1.0 / (dt * dt);
    const int m = n_nodes();
    const auto un = field.level(n);
    const auto um = field.level(n - 1);
    auto up = field.level(n + 1);

    for (int i = 1; i < m - 1; ++i) {
      const double d2n = un[i + 1] - 2.0 * un[i] + un[i - 1];
      const double d2m = um[i + 1] - 2.0 * um[i] + um[i - 1];
      rhs_[i] = (2.0 * un[i] - um[i]) * inv_dt2 + damp * um[i] + c2 * d2n - beta_ * d2m +
                problem_->source(n, first_ + i);
    }

    if (phys.explicit_scheme()) {
      for (int i = 1; i < m - 1; ++i) up[i] = rhs_[i] / alpha_;
      up[0] = closure_value(field, n + 1, Side::left);
      up[m - 1] = closure_value(field, n + 1, Side::right);
    } else {
      for (int i = 1; i < m - 1; ++i) {
        lower_[i - 1] = -beta_;
        diag_[i] = alpha_ + 2.0 * beta_;
        upper_[i] = -beta_;
      }
      close_row(field, n + 1, Side::left);
      close_row(field, n + 1, Side::right);
      detail::thomas_kernel(lower_, diag_, upper_, rhs_, up, scratch_);
    }
    check_finite(field, n + 1);
  }

  /// Runs initialize() and every step up to nt.
  WaveField solve() {
    WaveField field = make_field();
    initialize(field);
    for (int n = 1; n < field.n_levels() - 1; ++n) step(field, n);
    return field;
  }

 private:
  const BoundaryClosure& closure(Side side) const { return side == Side::left ? left_ : right_; }

  double closure_value(const WaveField& field, int level, Side side) const {
    const auto& bc = closure(side);
    if (bc.kind == BoundaryClosure::Kind::dirichlet) return 0.0;
    const auto& grid = problem_->grid();
    const RobinRow row = apply_robin_closure(field, level, side, bc.tp, *bc.trace, grid.dx(), grid.dt());
    const int m = n_nodes();
    const int j1 = side == Side::right ? m - 2 : 1;
    const int j2 = side == Side::right ? m - 3 : 2;
    return (row.rhs - row.neighbor * field(level, j1) - row.second * field(level, j2)) / row.boundary;
  }

  // Writes the boundary row of the implicit system. The u_{j+-2} term of the
  // Robin stencil is eliminated with the adjacent interior row.
  void close_row(const WaveField& field, int level, Side side) {
    const int m = n_nodes();
    const int j = side == Side::right ? m - 1 : 0;
    const int j1 = side == Side::right ? m - 2 : 1;
    const auto& bc = closure(side);
    auto set_row = [&](double d, double off, double r) {
      diag_[j] = d;
      if (side == Side::right) {
        lower_[m - 2] = off;
      } else {
        upper_[0] = off;
      }
      rhs_[j] = r;
    };
    if (bc.kind == BoundaryClosure::Kind::dirichlet) {
      set_row(1.0, 0.0, 0.0);
      return;
    }
    const auto& grid = problem_->grid();
    const RobinRow row = apply_robin_closure(field, level, side, bc.tp, *bc.trace, grid.dx(), grid.dt());
    // Interior row j1:  -beta u_j2 + (alpha + 2 beta) u_j1 - beta u_j = rhs_j1.
    const double d = row.boundary - row.second;
    const double off = row.neighbor + row.second * (alpha_ + 2.0 * beta_) / beta_;
    const double r = row.rhs + row.second * rhs_[j1] / beta_;
    if (!(std::abs(d) >= 1e-14)) throw ClosureError("Robin closure: degenerate coefficient after elimination");
    set_row(d, off, r);
  }

  static void check_finite(const WaveField& field, int level) {
    for (double v : field.level(level)) {
      if (!std::isfinite(v)) {
        throw StabilityError("FDTD: non-finite value at time level " + std::to_string(level), level);
      }
    }
  }

  const ProblemSpec* problem_;
  int first_;
  int last_;
  BoundaryClosure left_;
  BoundaryClosure right_;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  std::vector<double> rhs_, lower_, diag_, upper_, scratch_;
};

/// One FDTD step on `field` (levels n-1, n known; level n+1 written).
inline void step(WaveField& field, int n, const ProblemSpec& problem, const BoundaryClosure& left_bc,
                 const BoundaryClosure& right_bc) {
  SubdomainSolver solver(problem, field.x_offset(), field.x_offset() + field.n_nodes() - 1, left_bc, right_bc);
  solver.step(field, n);
}

/// Full-domain reference solution with homogeneous Dirichlet ends.
inline WaveField solve_monodomain(const ProblemSpec& problem) {
  return SubdomainSolver(problem, 0, problem.grid().nx() - 1, BoundaryClosure::dirichlet(),
                         BoundaryClosure::dirichlet())
      .solve();
}

/// Solves on global nodes [first_node, last_node] with the given closures.
inline WaveField solve_subdomain(const ProblemSpec& problem, int first_node, int last_node,
                                 const BoundaryClosure& left_bc, const BoundaryClosure& right_bc) {
  return SubdomainSolver(problem, first_node, last_node, left_bc, right_bc).solve();
}

/// Extracts the Robin data (d/dx +/- (p d/dt + q)) u at x = a or x = b from a
/// donor field, for every time level.
///
/// The discrete operator is the one the receiving subdomain enforces: the
/// one-sided spatial stencil oriented into the receiver and the backward time
/// difference for levels >= 2 (centered at level 1, forward at level 0). The
/// converged iterates then coincide with the full-domain discrete solution.
inline InterfaceTrace robin_trace(const WaveField& field, const GridSpec& grid, const Decomposition& dec,
                                  InterfaceLocation location, RobinSign sign, const TransmissionParams& tp) {
  const int node = location == InterfaceLocation::at_b ? dec.node_b() : dec.node_a();
  // Receiver of data at b is the left subdomain, whose stencil looks left.
  const int dir = location == InterfaceLocation::at_b ? -1 : 1;
  const int j = node - field.x_offset();
  detail::require(j + 2 * dir >= 0 && j + 2 * dir < field.n_nodes() && j >= 0 && j < field.n_nodes(),
                  "robin_trace: interface stencil leaves the donor subdomain");
  const double dx = grid.dx(), dt = grid.dt();
  const double sigma = robin_sign(sign);
  const int nl = field.n_levels();

  InterfaceTrace trace{std::vector<double>(static_cast<std::size_t>(nl)), location, sign};
  for (int n = 0; n < nl; ++n) {
    const double ux = -dir * (3.0 * field(n, j) - 4.0 * field(n, j + dir) + field(n, j + 2 * dir)) / (2.0 * dx);
    double ut;
    if (n >= 2) {
      ut = (3.0 * field(n, j) - 4.0 * field(n - 1, j) + field(n - 2, j)) / (2.0 * dt);
    } else if (n == 1) {
      ut = (field(2, j) - field(0, j)) / (2.0 * dt);
    } else {
      ut = (-3.0 * field(0, j) + 4.0 * field(1, j) - field(2, j)) / (2.0 * dt);
    }
    trace.values[n] = ux + sigma * (tp.p * ut + tp.q * field(n, j));
  }
  return trace;
}

}  // namespace oswr
