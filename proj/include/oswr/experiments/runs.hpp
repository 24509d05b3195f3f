#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "oswr/core_model.hpp"
#include "oswr/errors.hpp"
#include "oswr/experiments/config.hpp"
#include "oswr/experiments/csv.hpp"
#include "oswr/experiments/parallel.hpp"
#include "oswr/fdtd.hpp"
#include "oswr/frequency.hpp"
#include "oswr/optimizer.hpp"
#include "oswr/swr.hpp"

namespace oswr::experiments {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Shared inputs of one SWR experiment at fixed damping.
struct SwrSetup {
  PhysicalParams phys;
  GridSpec grid;
  Decomposition dec;
  ProblemSpec problem;
  WaveField reference;

  SwrSetup(const ExperimentConfig& cfg, const PhysicalParams& p)
      : phys(p),
        grid(cfg.grid_for(p)),
        dec(cfg.a, cfg.b, p, grid),
        problem(make_problem(p, grid, cfg.sweep.mode)),
        reference(solve_monodomain(problem)) {}
};

/// Final-iterate error of a k-iteration SWR run; NaN when the solve fails.
inline double final_error(const SwrSetup& setup, const TransmissionParams& tp, int k) {
  try {
    return swr_solve(setup.problem, setup.dec, tp, k, setup.reference).errors.back();
  } catch (const Error&) {
    return kNaN;
  }
}

// ---------------------------------------------------------------------------
// Error map: log10 of the SWR error after k_map iterations over a (p, q) grid.

inline CsvTable run_error_map(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto& sw = cfg.sweep;
  const SwrSetup setup(cfg, cfg.phys);
  const auto band = cfg.band();
  const int np = scaled_count(sw.p_count, sw.grid_scale);
  const int nq = scaled_count(sw.q_count, sw.grid_scale);

  struct Point {
    double p, q;
    std::string flag;
  };
  std::vector<Point> points;
  points.reserve(static_cast<std::size_t>(np * nq) + 4);
  for (int i = 0; i < np; ++i) {
    for (int j = 0; j < nq; ++j) {
      points.push_back({lin_node(sw.p_min, sw.p_max, i, np), lin_node(sw.q_min, sw.q_max, j, nq), "grid"});
    }
  }
  const std::size_t n_grid = points.size();
  points.push_back({1.0 / cfg.phys.c, 0.0, "init"});
  for (Strategy s : strategies(cfg.strategy)) {
    const auto opt = optimize_transmission(s, cfg.phys, setup.dec, band);
    points.push_back({opt.p_opt, opt.q_opt, "opt_" + to_string(s)});
  }

  std::vector<double> log_err(points.size(), kNaN);
  parallel_for(points.size(), [&](std::size_t idx) {
    const double e = final_error(setup, {points[idx].p, points[idx].q}, sw.k_map);
    log_err[idx] = std::isnan(e) ? kNaN : std::log10(e);
  });

  CsvTable table({"p", "q", "log10_error", "flag"});
  std::size_t best = n_grid;
  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    const bool failed = std::isnan(log_err[idx]);
    table.add_row({points[idx].p, points[idx].q, log_err[idx], failed ? std::string("failed") : points[idx].flag});
    if (idx < n_grid && !failed && (best == n_grid || log_err[idx] < log_err[best])) best = idx;
  }
  if (best < n_grid) table.add_row({points[best].p, points[best].q, log_err[best], std::string("grid_min")});
  return table;
}

// ---------------------------------------------------------------------------
// Error curves: SWR error against iteration for optimized parameters.

/// Strategy label of the row carrying the FDTD-vs-analytic discrepancy.
inline const std::string kDiscrepancyLabel = "fdtd_vs_analytic";

inline double discretization_error(const SwrSetup& setup, int mode) {
  const int nt = setup.grid.nt();
  const auto exact = analytic_snapshot(setup.problem, mode, setup.grid.t(nt));
  return relative_error(setup.reference.level(nt), exact);
}

inline CsvTable run_error_curves(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto& sw = cfg.sweep;
  const auto band = cfg.band();
  const auto strats = strategies(cfg.strategy);

  std::vector<std::unique_ptr<SwrSetup>> setups(sw.cases.size());
  parallel_for(sw.cases.size(), [&](std::size_t c) {
    PhysicalParams p = cfg.phys;
    p.gamma = sw.cases[c].gamma;
    p.nu = sw.cases[c].nu;
    p.validate();
    setups[c] = std::make_unique<SwrSetup>(cfg, p);
  });

  const std::size_t n_tasks = sw.cases.size() * strats.size();
  std::vector<std::vector<double>> curves(n_tasks);
  parallel_for(n_tasks, [&](std::size_t t) {
    const auto& setup = *setups[t / strats.size()];
    const Strategy s = strats[t % strats.size()];
    auto& curve = curves[t];
    try {
      const auto opt = optimize_transmission(s, setup.phys, setup.dec, band);
      curve = swr_solve(setup.problem, setup.dec, opt.params(), sw.k_max, setup.reference).errors;
    } catch (const Error&) {
      curve.clear();
    }
    curve.resize(static_cast<std::size_t>(sw.k_max) + 1, kNaN);
  });

  CsvTable table({"gamma", "nu", "strategy", "k", "error"});
  for (std::size_t c = 0; c < sw.cases.size(); ++c) {
    const auto& dc = sw.cases[c];
    for (std::size_t si = 0; si < strats.size(); ++si) {
      const auto& curve = curves[c * strats.size() + si];
      for (std::size_t k = 0; k < curve.size(); ++k) {
        table.add_row({dc.gamma, dc.nu, to_string(strats[si]), static_cast<double>(k), curve[k]});
      }
    }
    table.add_row({dc.gamma, dc.nu, kDiscrepancyLabel, -1.0, discretization_error(*setups[c], sw.mode)});
  }
  return table;
}

// ---------------------------------------------------------------------------
// Predicted global convergence factors.

struct RhoContours {
  /// rho over the (p, q) grid at the configured damping, one table per strategy.
  std::map<Strategy, CsvTable> pq;
  /// rho_inf / rho_l2 at their own optimized parameters over the (gamma, nu) grid.
  CsvTable damping;
};

inline CsvTable rho_pq_table(const ExperimentConfig& cfg, Strategy s) {
  cfg.validate();
  const auto& sw = cfg.sweep;
  const auto dec = cfg.decomposition();
  const auto band = cfg.band();
  const int np = scaled_count(sw.p_count, sw.grid_scale);
  const int nq = scaled_count(sw.q_count, sw.grid_scale);
  std::vector<double> rho(static_cast<std::size_t>(np * nq));
  parallel_for(rho.size(), [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / nq, j = static_cast<int>(idx) % nq;
    rho[idx] = penalized_global_factor(
        s, {lin_node(sw.p_min, sw.p_max, i, np), lin_node(sw.q_min, sw.q_max, j, nq)}, cfg.phys, dec, band);
  });
  CsvTable table({"p", "q", "rho"});
  for (int i = 0; i < np; ++i) {
    for (int j = 0; j < nq; ++j) {
      table.add_row({lin_node(sw.p_min, sw.p_max, i, np), lin_node(sw.q_min, sw.q_max, j, nq),
                     rho[static_cast<std::size_t>(i * nq + j)]});
    }
  }
  return table;
}

inline CsvTable rho_damping_table(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto& sw = cfg.sweep;
  const auto band = cfg.band();
  const int ng = scaled_count(sw.gamma_count, sw.grid_scale);
  const int nn = scaled_count(sw.nu_count, sw.grid_scale);
  struct Cell {
    double gamma, nu, rho_inf, rho_l2;
  };
  std::vector<Cell> cells(static_cast<std::size_t>(ng * nn));
  parallel_for(cells.size(), [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / nn, j = static_cast<int>(idx) % nn;
    PhysicalParams p = cfg.phys;
    p.gamma = log_node(sw.gamma_min, sw.gamma_max, i, ng);
    p.nu = log_node(sw.nu_min, sw.nu_max, j, nn);
    const Decomposition dec(cfg.a, cfg.b, p, cfg.grid_for(p));
    cells[idx] = {p.gamma, p.nu, optimize_transmission(Strategy::Linf, p, dec, band).objective_value,
                  optimize_transmission(Strategy::L2, p, dec, band).objective_value};
  });
  CsvTable table({"gamma", "nu", "rho_inf", "rho_l2"});
  for (const auto& c : cells) table.add_row({c.gamma, c.nu, c.rho_inf, c.rho_l2});
  return table;
}

inline RhoContours run_rho_contours(const ExperimentConfig& cfg) {
  RhoContours out;
  for (Strategy s : strategies(cfg.strategy)) out.pq.emplace(s, rho_pq_table(cfg, s));
  out.damping = rho_damping_table(cfg);
  return out;
}

// ---------------------------------------------------------------------------
// Optimized parameters along one-coefficient damping sweeps.

inline CsvTable run_param_isolines(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto& sw = cfg.sweep;
  const auto band = cfg.band();
  const auto strats = strategies(cfg.strategy);

  struct Point {
    std::string sweep_id;
    double gamma, nu;
  };
  std::vector<Point> points;
  const int nn = scaled_count(sw.isoline_nu_count, sw.grid_scale);
  const int ng = scaled_count(sw.isoline_gamma_count, sw.grid_scale);
  for (double g : sw.isoline_gammas) {
    for (int j = 0; j < nn; ++j) {
      points.push_back({"nu@gamma=" + format_number(g), g, log_node(sw.isoline_nu_min, sw.isoline_nu_max, j, nn)});
    }
  }
  for (double n : sw.isoline_nus) {
    for (int i = 0; i < ng; ++i) {
      points.push_back(
          {"gamma@nu=" + format_number(n), log_node(sw.isoline_gamma_min, sw.isoline_gamma_max, i, ng), n});
    }
  }

  std::vector<OptimizationResult> results(points.size() * strats.size());
  std::vector<char> ok(results.size(), 0);
  parallel_for(results.size(), [&](std::size_t t) {
    const auto& pt = points[t / strats.size()];
    try {
      PhysicalParams p = cfg.phys;
      p.gamma = pt.gamma;
      p.nu = pt.nu;
      const Decomposition dec(cfg.a, cfg.b, p, cfg.grid_for(p));
      results[t] = optimize_transmission(strats[t % strats.size()], p, dec, band);
      ok[t] = 1;
    } catch (const Error&) {
    }
  });

  CsvTable table({"sweep_id", "gamma", "nu", "strategy", "p_opt", "q_opt", "objective", "converged"});
  for (std::size_t t = 0; t < results.size(); ++t) {
    const auto& pt = points[t / strats.size()];
    const auto& r = results[t];
    table.add_row({pt.sweep_id, pt.gamma, pt.nu, to_string(strats[t % strats.size()]), ok[t] ? r.p_opt : kNaN,
                   ok[t] ? r.q_opt : kNaN, ok[t] ? r.objective_value : kNaN, (ok[t] && r.converged) ? 1.0 : 0.0});
  }
  return table;
}

// ---------------------------------------------------------------------------
// Monodomain snapshot at t = T against the closed-form solution.

inline CsvTable run_solve(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto grid = cfg.grid();
  const auto problem = make_problem(cfg.phys, grid, cfg.sweep.mode);
  const auto field = solve_monodomain(problem);
  const int nt = grid.nt();
  const auto u = field.level(nt);
  const auto exact = analytic_snapshot(problem, cfg.sweep.mode, grid.t(nt));
  CsvTable table({"x", "u_fdtd", "u_analytic"});
  for (int i = 0; i < grid.nx(); ++i) table.add_row({grid.x(i), u[i], exact[i]});
  return table;
}

// ---------------------------------------------------------------------------
// Plot scripts. Each references its CSV by a path relative to the script.

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open '" + path.string() + "' for writing");
  os << text;
}

inline std::string gnuplot_error_map(const std::string& csv) {
  return "set datafile separator ','\n"
         "set terminal pngcairo size 800,600\n"
         "set output 'error_map.png'\n"
         "set xlabel 'p'\nset ylabel 'q'\nset cblabel 'log10 error'\n"
         "set view map\n"
         "splot '" + csv + "' using 1:2:(strcol(4) eq 'grid' ? $3 : 1/0) with points pt 5 ps 2 palette notitle, \\\n"
         "      '' using 1:2:(strcol(4) eq 'init' ? $3 : 1/0) with points pt 4 ps 2 lc 'black' title 'init', \\\n"
         "      '' using 1:2:(strcol(4) eq 'grid_min' ? $3 : 1/0) with points pt 4 ps 2 lc 'white' title 'grid min', \\\n"
         "      '' using 1:2:(strcol(4) eq 'opt_linf' ? $3 : 1/0) with points pt 7 lc 'red' title 'Linf', \\\n"
         "      '' using 1:2:(strcol(4) eq 'opt_l2' ? $3 : 1/0) with points pt 9 lc 'blue' title 'L2'\n";
}

inline std::string gnuplot_error_curves(const std::string& csv) {
  return "set datafile separator ','\n"
         "set terminal pngcairo size 800,600\n"
         "set output 'error_curves.png'\n"
         "set logscale y\nset xlabel 'iteration k'\nset ylabel 'relative error'\n"
         "plot '" + csv + "' using 4:(strcol(3) eq 'linf' ? $5 : 1/0) with linespoints title 'Linf', \\\n"
         "     '' using 4:(strcol(3) eq 'l2' ? $5 : 1/0) with linespoints title 'L2'\n";
}

inline std::string gnuplot_rho_contours(const std::string& pq_csv, const std::string& damping_csv) {
  return "set datafile separator ','\n"
         "set terminal pngcairo size 1200,500\n"
         "set output 'rho_contours.png'\n"
         "set multiplot layout 1,2\n"
         "set view map\nset dgrid3d 25,25\n"
         "set xlabel 'p'\nset ylabel 'q'\n"
         "splot '" + pq_csv + "' every ::1 using 1:2:3 with pm3d notitle\n"
         "set logscale xy\nset xlabel 'gamma'\nset ylabel 'nu'\n"
         "splot '" + damping_csv + "' every ::1 using 1:2:3 with pm3d title 'rho_inf'\n"
         "unset multiplot\n";
}

inline std::string gnuplot_param_isolines(const std::string& csv) {
  return "set datafile separator ','\n"
         "set terminal pngcairo size 1200,500\n"
         "set output 'param_isolines.png'\n"
         "set multiplot layout 1,2\n"
         "set logscale x\nset xlabel 'damping coefficient'\n"
         "set ylabel 'p_opt'\n"
         "plot '" + csv + "' using (strcol(1)[1:2] eq 'nu' ? $3 : $2):5 with points notitle\n"
         "set ylabel 'q_opt'\n"
         "plot '" + csv + "' using (strcol(1)[1:2] eq 'nu' ? $3 : $2):6 with points notitle\n"
         "unset multiplot\n";
}

}  // namespace oswr::experiments
