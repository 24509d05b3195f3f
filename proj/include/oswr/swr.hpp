#pragma once

#include <algorithm>
#include <cmath>
#include <future>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oswr/core_model.hpp"
#include "oswr/errors.hpp"
#include "oswr/fdtd.hpp"

namespace oswr {

/// Relative error history of one SWR run. errors[k] belongs to iterate k;
/// iterate 0 is the solve with zero interface data.
struct SwrReport {
  std::vector<double> errors;
  TransmissionParams params{};
  int iterations_run = 0;
  std::optional<int> converged_at;
  double floor = 1e-13;
};

/// max |swr - ref| / max |ref|.
inline double relative_error(std::span<const double> swr_snapshot, std::span<const double> ref_snapshot) {
  detail::require(swr_snapshot.size() == ref_snapshot.size(), "relative_error: snapshot lengths differ");
  double diff = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < ref_snapshot.size(); ++i) {
    diff = std::max(diff, std::abs(swr_snapshot[i] - ref_snapshot[i]));
    norm = std::max(norm, std::abs(ref_snapshot[i]));
  }
  if (!(norm > 0.0)) throw NumericalError("relative_error: reference snapshot has zero norm");
  return diff / norm;
}

/// Global iterate at one time level: left subdomain on [0, a), right
/// subdomain on (b, L], arithmetic mean on [a, b].
inline std::vector<double> assemble_snapshot(const WaveField& left, const WaveField& right, const Decomposition& dec,
                                             int nx, int level) {
  std::vector<double> out(static_cast<std::size_t>(nx));
  for (int g = 0; g < nx; ++g) {
    if (g < dec.node_a()) {
      out[g] = left.global(level, g);
    } else if (g > dec.node_b()) {
      out[g] = right.global(level, g);
    } else {
      out[g] = 0.5 * (left.global(level, g) + right.global(level, g));
    }
  }
  return out;
}

struct SwrOptions {
  double floor = 1e-13;
  /// Run the two subdomain solves of one iteration on separate threads.
  bool parallel_subdomains = false;
  /// Initial interface data; zero traces when empty.
  std::optional<InterfaceTrace> initial_trace_b;
  std::optional<InterfaceTrace> initial_trace_a;
};

/// Two-subdomain Schwarz waveform relaxation with Robin transmission
///   (d/dx + Lambda) v^{k+1}(b) = (d/dx + Lambda) w^k(b),
///   (d/dx - Lambda) w^{k+1}(a) = (d/dx - Lambda) v^k(a),
/// Jacobi form. Runs iterates 0..k_max and records the relative max-norm
/// error of the t = T snapshot against `reference`.
inline SwrReport swr_solve(const ProblemSpec& problem, const Decomposition& dec, const TransmissionParams& tp,
                           int k_max, const WaveField& reference, const SwrOptions& opts = {}) {
  detail::require(k_max >= 0, "k_max must be >= 0");
  detail::require(tp.finite(), "transmission parameters must be finite");
  const auto& grid = problem.grid();
  const int nx = grid.nx();
  const int nt = grid.nt();
  detail::require(reference.n_levels() == nt + 1 && reference.n_nodes() == nx && reference.x_offset() == 0,
                  "reference must be a full-domain field on the problem grid");

  InterfaceTrace trace_b = opts.initial_trace_b.value_or(
      InterfaceTrace::zero(nt + 1, InterfaceLocation::at_b, RobinSign::plus));
  InterfaceTrace trace_a = opts.initial_trace_a.value_or(
      InterfaceTrace::zero(nt + 1, InterfaceLocation::at_a, RobinSign::minus));
  detail::require(trace_b.location == InterfaceLocation::at_b && trace_b.sign == RobinSign::plus,
                  "trace at b must carry the (d/dx + Lambda) sign");
  detail::require(trace_a.location == InterfaceLocation::at_a && trace_a.sign == RobinSign::minus,
                  "trace at a must carry the (d/dx - Lambda) sign");

  SubdomainSolver left_solver(problem, 0, dec.node_b(), BoundaryClosure::dirichlet(),
                              BoundaryClosure::robin(tp, trace_b));
  SubdomainSolver right_solver(problem, dec.node_a(), nx - 1, BoundaryClosure::robin(tp, trace_a),
                               BoundaryClosure::dirichlet());
  const auto ref_final = reference.level(nt);

  SwrReport report;
  report.params = tp;
  report.floor = opts.floor;
  report.errors.reserve(static_cast<std::size_t>(k_max) + 1);

  for (int k = 0; k <= k_max; ++k) {
    WaveField v(1, 1, 0), w(1, 1, 0);
    try {
      if (opts.parallel_subdomains) {
        auto right = std::async(std::launch::async, [&] { return right_solver.solve(); });
        v = left_solver.solve();
        w = right.get();
      } else {
        v = left_solver.solve();
        w = right_solver.solve();
      }
    } catch (const StabilityError& e) {
      throw StabilityError(std::string(e.what()) + " (SWR iteration " + std::to_string(k) + ")", e.step());
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " (SWR iteration " + std::to_string(k) + ")");
    }

    const auto snapshot = assemble_snapshot(v, w, dec, nx, nt);
    const double err = relative_error(snapshot, ref_final);
    report.errors.push_back(err);
    if (!report.converged_at && err < report.floor) report.converged_at = k;

    if (k < k_max) {
      // Both new traces come from iterate k.
      trace_b = robin_trace(w, grid, dec, InterfaceLocation::at_b, RobinSign::plus, tp);
      trace_a = robin_trace(v, grid, dec, InterfaceLocation::at_a, RobinSign::minus, tp);
    }
  }
  report.iterations_run = static_cast<int>(report.errors.size());
  return report;
}

}  // namespace oswr
