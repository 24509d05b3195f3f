// Acceptance suite. Prints one PASS/FAIL line per criterion; exit status 0
// only when every selected criterion passes.

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oswr/experiments/config.hpp"
#include "oswr/experiments/runs.hpp"
#include "oswr/oswr.hpp"

namespace fs = std::filesystem;
using namespace oswr;
using namespace oswr::experiments;

namespace {

// Pinned tolerances and bounds.
constexpr double kIdentityTol = 1e-12;
constexpr double kSimplificationTol = 1e-10;
constexpr int kSimplificationSamples = 1000;
constexpr double kFdtdTol = 1e-3;
constexpr double kOrderLo = 3.0, kOrderHi = 5.0;
constexpr double kBarrierFloor = 1e-12;
constexpr int kBarrierLo = 45, kBarrierHi = 60;
constexpr double kAccelerationRatio = 10.0;
constexpr double kLinearR2 = 0.95;
constexpr double kGridOracleSlack = 0.05;
constexpr double kTrendFraction = 0.90;
constexpr double kTrendSlack = 1e-9;
constexpr double kPLo = 0.0, kPHi = 0.15;
constexpr double kQLo = 2.0, kQHi = 6.0;

struct Outcome {
  bool pass;
  std::string detail;
};

struct Reference {
  PhysicalParams phys;
  GridSpec grid;
  Decomposition dec;
  FrequencyBand band;

  Reference(double gamma, double nu, double h = 0.002)
      : phys{1.0, gamma, nu, 1.0},
        grid(phys, h, h, 5.0),
        dec(0.3, 0.4, phys, grid),
        band(frequency_band(5.0, h)) {}
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double monodomain_error(const Reference& r) {
  const auto prob = make_problem(r.phys, r.grid, 1);
  const auto field = solve_monodomain(prob);
  const int nt = r.grid.nt();
  return relative_error(field.level(nt), analytic_snapshot(prob, 1, r.grid.t(nt)));
}

// 1. rho == 1 on the band for the undamped absorbing parameters.
Outcome undamped_identity() {
  const Reference r(0, 0);
  double worst = 0;
  for (int j = 0; j < r.band.n_nodes(); ++j) {
    worst = std::max(worst, std::abs(convergence_factor(r.band.node(j), {1.0, 0.0}, r.phys, r.dec) - 1.0));
  }
  const double inf = rho_inf({1.0, 0.0}, r.phys, r.dec, r.band);
  const double l2 = rho_l2({1.0, 0.0}, r.phys, r.dec, r.band);
  const bool ok = worst <= kIdentityTol && std::abs(inf - 1) <= kIdentityTol && std::abs(l2 - 1) <= kIdentityTol;
  return {ok, "max|rho-1|=" + fmt(worst) + " rho_inf=" + fmt(inf) + " rho_l2=" + fmt(l2) + " (tol " +
                  fmt(kIdentityTol) + ")"};
}

// 2. sqrt|G^2| against the simplified factor on random admissible inputs.
Outcome simplification_oracle() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> pd(-2, 2), qd(-1, 10), gd(0, 12), nd(0, 0.05), u(0, 1);
  double worst = 0;
  int mismatches = 0, samples = 0;
  while (samples < kSimplificationSamples) {
    const Reference r(gd(rng), nd(rng));
    const TransmissionParams tp{pd(rng), qd(rng)};
    const double w = r.band.omega_min() + u(rng) * (r.band.omega_max() - r.band.omega_min());
    double rho = 0, g = 0;
    try {
      rho = convergence_factor(w, tp, r.phys, r.dec);
      g = std::sqrt(std::abs(g_squared_unsimplified({0.0, w}, tp, r.phys, r.dec, r.phys.L)));
    } catch (const ResonanceError&) {
      continue;
    }
    ++samples;
    const double rel = std::abs(g - rho) / rho;
    worst = std::max(worst, rel);
    if (rel > kSimplificationTol) ++mismatches;
  }
  return {mismatches == 0, std::to_string(mismatches) + "/" + std::to_string(samples) +
                               " tuples exceed rel tol " + fmt(kSimplificationTol) + ", max rel mismatch " +
                               fmt(worst)};
}

// 3. Monodomain FDTD vs closed form at t = T.
Outcome fdtd_accuracy() {
  bool ok = true;
  std::string detail;
  for (auto [g, nu] : {std::pair{4.0, 0.0}, {0.0, 0.05}, {0.0, 0.0}}) {
    const auto t0 = std::chrono::steady_clock::now();
    const double e = monodomain_error(Reference(g, nu));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ok = ok && e < kFdtdTol && secs < 30.0;
    detail += "(gamma=" + fmt(g) + ",nu=" + fmt(nu) + ") err=" + fmt(e) + " ";
  }
  return {ok, detail + "(tol " + fmt(kFdtdTol) + ")"};
}

// 4. One halving of dx and dt.
Outcome fdtd_order() {
  const double coarse = monodomain_error(Reference(0, 0.05, 0.002));
  const double fine = monodomain_error(Reference(0, 0.05, 0.001));
  const double ratio = coarse / fine;
  return {ratio >= kOrderLo && ratio <= kOrderHi,
          "err(0.002)=" + fmt(coarse) + " err(0.001)=" + fmt(fine) + " ratio=" + fmt(ratio) + " (bound [" +
              fmt(kOrderLo) + "," + fmt(kOrderHi) + "])"};
}

// 5. Iteration barrier of the telegrapher equation.
Outcome telegrapher_barrier() {
  const Reference r(4, 0);
  const auto prob = make_problem(r.phys, r.grid, 1);
  const auto ref = solve_monodomain(prob);
  bool ok = true;
  std::string detail;
  for (Strategy s : {Strategy::Linf, Strategy::L2}) {
    const auto opt = optimize_transmission(s, r.phys, r.dec, r.band);
    const auto rep = swr_solve(prob, r.dec, opt.params(), 80, ref);
    int k_star = -1;
    for (std::size_t k = 0; k < rep.errors.size(); ++k) {
      if (rep.errors[k] < kBarrierFloor) {
        k_star = static_cast<int>(k);
        break;
      }
    }
    ok = ok && k_star >= kBarrierLo && k_star <= kBarrierHi;
    detail += to_string(s) + ": (p,q)=(" + fmt(opt.p_opt) + "," + fmt(opt.q_opt) + ") k*=" + std::to_string(k_star) +
              " ";
  }
  return {ok, detail + "(error < " + fmt(kBarrierFloor) + ", bound [" + std::to_string(kBarrierLo) + "," +
                  std::to_string(kBarrierHi) + "])"};
}

double r_squared(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return syy == 0 ? 1.0 : sxy * sxy / (sxx * syy);
}

// 6. Viscoelastic acceleration and linear log-decay.
Outcome viscoelastic_acceleration() {
  const Reference r(0, 0.05);
  const auto prob = make_problem(r.phys, r.grid, 1);
  const auto ref = solve_monodomain(prob);
  const auto opt = optimize_transmission(Strategy::L2, r.phys, r.dec, r.band);
  const auto rep_opt = swr_solve(prob, r.dec, opt.params(), 50, ref);
  const auto rep_init = swr_solve(prob, r.dec, {1.0, 0.0}, 10, ref);
  const double ratio = rep_init.errors[10] / rep_opt.errors[10];

  // Decreasing segment: from the peak to the last iterate above the floor.
  const auto& e = rep_opt.errors;
  const auto peak = static_cast<std::size_t>(std::max_element(e.begin(), e.end()) - e.begin());
  std::vector<double> ks, logs;
  for (std::size_t k = peak; k < e.size() && e[k] > rep_opt.floor; ++k) {
    ks.push_back(static_cast<double>(k));
    logs.push_back(std::log10(e[k]));
  }
  const double r2 = ks.size() >= 3 ? r_squared(ks, logs) : 0.0;
  const bool ok = ratio >= kAccelerationRatio && r2 > kLinearR2;
  return {ok, "L2 (p,q)=(" + fmt(opt.p_opt) + "," + fmt(opt.q_opt) + ") err10=" + fmt(e[10]) +
                  " init err10=" + fmt(rep_init.errors[10]) + " ratio=" + fmt(ratio) + " (need >= " +
                  fmt(kAccelerationRatio) + "); R^2=" + fmt(r2) + " over k=" + std::to_string(peak) + ".." +
                  std::to_string(peak + ks.size() - 1) + " (need > " + fmt(kLinearR2) + ")"};
}

// 7. Optimizer benchmarks, improvement, grid-search oracle.
Outcome optimizer_sanity() {
  using P2 = std::array<double, 2>;
  const auto quad = nelder_mead<2>([](const P2& x) { return std::pow(x[0] - 2, 2) + std::pow(x[1] + 1, 2); }, {0, 0});
  const bool quad_ok = quad.converged && std::abs(quad.x[0] - 2) < 1e-3 && std::abs(quad.x[1] + 1) < 1e-3;
  const auto rosen = nelder_mead<2>(
      [](const P2& x) { return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2); }, {-1.2, 1.0});
  const bool rosen_ok = rosen.converged && std::abs(rosen.x[0] - 1) < 1e-2 && std::abs(rosen.x[1] - 1) < 1e-2;

  bool improve_ok = true;
  int improve_checked = 0;
  for (auto [g, nu] : {std::pair{4.0, 0.0}, {8.0, 0.0}, {10.0, 0.0}, {12.0, 0.0}, {0.0, 0.001}, {0.0, 0.005},
                       {0.0, 0.01}, {0.0, 0.05}}) {
    const Reference r(g, nu);
    for (Strategy s : {Strategy::Linf, Strategy::L2}) {
      const auto opt = optimize_transmission(s, r.phys, r.dec, r.band);
      improve_ok = improve_ok && opt.objective_value <= global_factor(s, {1.0, 0.0}, r.phys, r.dec, r.band);
      ++improve_checked;
    }
  }

  const Reference r(0, 0.001);
  const auto opt = optimize_transmission(Strategy::Linf, r.phys, r.dec, r.band);
  std::vector<double> grid(50 * 50);
  parallel_for(grid.size(), [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / 50, j = static_cast<int>(idx) % 50;
    grid[idx] = penalized_global_factor(Strategy::Linf, {lin_node(0, 2, i, 50), lin_node(-2, 10, j, 50)}, r.phys,
                                        r.dec, r.band);
  });
  const double grid_min = *std::min_element(grid.begin(), grid.end());
  const bool oracle_ok = opt.objective_value <= (1 + kGridOracleSlack) * grid_min;

  return {quad_ok && rosen_ok && improve_ok && oracle_ok,
          std::string("quadratic ") + (quad_ok ? "ok" : "bad") + ", rosenbrock " + (rosen_ok ? "ok" : "bad") +
              ", improvement " + (improve_ok ? "ok" : "bad") + " on " + std::to_string(improve_checked) +
              " runs, nu=0.001 Linf optimum " + fmt(opt.objective_value) + " vs 50x50 grid min " + fmt(grid_min) +
              " (slack " + fmt(kGridOracleSlack) + ")"};
}

// Fraction of adjacent pairs (a, b) along one axis with cmp(a, b) true.
double trend_fraction(const CsvTable& t, int ng, int nn, const std::string& col, bool along_nu, bool increasing) {
  int good = 0, total = 0;
  auto at = [&](int i, int j) { return t.number(static_cast<std::size_t>(i * nn + j), col); };
  const int outer = along_nu ? ng : nn;
  const int inner = along_nu ? nn : ng;
  for (int o = 0; o < outer; ++o) {
    for (int k = 0; k + 1 < inner; ++k) {
      const double a = along_nu ? at(o, k) : at(k, o);
      const double b = along_nu ? at(o, k + 1) : at(k + 1, o);
      const bool ok = increasing ? b >= a * (1 - kTrendSlack) : b <= a * (1 + kTrendSlack);
      good += ok;
      ++total;
    }
  }
  return static_cast<double>(good) / total;
}

// 8. Trends of the optimized global factors over the (gamma, nu) grid.
Outcome rho_trends() {
  const ExperimentConfig cfg;
  const auto t = rho_damping_table(cfg);
  const int ng = cfg.sweep.gamma_count, nn = cfg.sweep.nu_count;
  const double inf_gamma = trend_fraction(t, ng, nn, "rho_inf", false, false);
  const double inf_nu = trend_fraction(t, ng, nn, "rho_inf", true, false);
  const double l2_nu = trend_fraction(t, ng, nn, "rho_l2", true, true);
  const bool ok = inf_gamma >= kTrendFraction && inf_nu >= kTrendFraction && l2_nu >= kTrendFraction;
  return {ok, "rho_inf non-increasing along gamma " + fmt(inf_gamma) + ", along nu " + fmt(inf_nu) +
                  "; rho_l2 non-decreasing along nu " + fmt(l2_nu) + " (need >= " + fmt(kTrendFraction) + ")"};
}

// 9. Optimized parameter trends along one-coefficient sweeps.
Outcome parameter_trends() {
  const ExperimentConfig cfg;
  const auto t = run_param_isolines(cfg);
  bool ok = true;
  std::string detail;
  for (double g : cfg.sweep.isoline_gammas) {
    const std::string id = "nu@gamma=" + format_number(g);
    for (const char* s : {"linf", "l2"}) {
      double nu_max = -1, p_at = NAN;
      for (std::size_t r = 0; r < t.n_rows(); ++r) {
        if (t.text(r, "sweep_id") != id || t.text(r, "strategy") != s) continue;
        if (t.number(r, "nu") > nu_max) {
          nu_max = t.number(r, "nu");
          p_at = t.number(r, "p_opt");
        }
      }
      ok = ok && p_at >= kPLo && p_at <= kPHi;
      detail += id + "/" + s + " p=" + fmt(p_at) + " ";
    }
  }
  for (double nu : cfg.sweep.isoline_nus) {
    const std::string id = "gamma@nu=" + format_number(nu);
    double q_max = -INFINITY;
    for (std::size_t r = 0; r < t.n_rows(); ++r) {
      if (t.text(r, "sweep_id") == id && t.text(r, "strategy") == "linf") q_max = std::max(q_max, t.number(r, "q_opt"));
    }
    ok = ok && q_max >= kQLo && q_max <= kQHi;
    detail += id + " max q=" + fmt(q_max) + " ";
  }
  return {ok, detail + "(p bound [" + fmt(kPLo) + "," + fmt(kPHi) + "], q bound [" + fmt(kQLo) + "," + fmt(kQHi) +
                  "])"};
}

std::string read_file(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

// 10. Two CLI runs per subcommand produce identical bytes.
Outcome cli_determinism(const std::string& cli) {
  if (cli.empty()) return {false, "no CLI path given (--cli)"};
  const fs::path work = fs::temp_directory_path() / "oswr_acceptance_determinism";
  fs::remove_all(work);
  fs::create_directories(work);
  ExperimentConfig cfg;
  cfg.sweep.grid_scale = 0.2;
  cfg.sweep.k_max = 20;
  cfg.sweep.cases = {{4.0, 0.0}, {0.0, 0.05}};
  {
    std::ofstream os(work / "desk.cfg");
    os << to_text(cfg);
  }
  const std::vector<std::string> commands{"error-map", "error-curves", "rho-contours", "param-isolines",
                                          "optimize", "solve"};
  bool ok = true;
  std::string detail;
  for (const auto& cmd : commands) {
    std::array<std::string, 2> outputs;
    for (int run = 0; run < 2; ++run) {
      const fs::path out = work / (cmd + "_" + std::to_string(run));
      // Different worker counts: results must not depend on scheduling.
      const std::string line = "OSWR_THREADS=" + std::to_string(run == 0 ? 1 : 3) + " '" + cli + "' " + cmd +
                               " --config '" + (work / "desk.cfg").string() + "' --out '" + out.string() +
                               "' > '" + (work / (cmd + "_" + std::to_string(run) + ".stdout")).string() + "'";
      if (std::system(line.c_str()) != 0) {
        ok = false;
        detail += cmd + " failed; ";
        continue;
      }
      std::string all;
      if (cmd == "optimize") {
        all = read_file(work / (cmd + "_" + std::to_string(run) + ".stdout"));
      } else {
        std::vector<fs::path> files;
        for (const auto& f : fs::directory_iterator(out)) files.push_back(f.path().filename());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) all += f.string() + "\n" + read_file(out / f);
      }
      outputs[run] = all;
    }
    const bool same = !outputs[0].empty() && outputs[0] == outputs[1];
    ok = ok && same;
    detail += cmd + (same ? " identical; " : " DIFFERS; ");
  }
  fs::remove_all(work);
  return {ok, detail};
}

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> selected;
  std::string cli;
  app.add_option("--criterion", selected, "Criterion number(s) 1-10; all when omitted")->check(CLI::Range(1, 10));
  app.add_option("--cli", cli, "Path to the oswr_cli executable");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all{
      {1, "undamped identity", 1.0, undamped_identity},
      {2, "simplification oracle", 5.0, simplification_oracle},
      {3, "FDTD accuracy", 90.0, fdtd_accuracy},
      {4, "FDTD order", 120.0, fdtd_order},
      {5, "telegrapher barrier", 600.0, telegrapher_barrier},
      {6, "viscoelastic acceleration", 300.0, viscoelastic_acceleration},
      {7, "optimizer sanity", 600.0, optimizer_sanity},
      {8, "rho trends", 1200.0, rho_trends},
      {9, "parameter trends", 900.0, parameter_trends},
      {10, "CLI determinism", 1800.0, [&] { return cli_determinism(cli); }},
  };

  bool all_pass = true;
  for (const auto& c : all) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.pass && in_time;
    all_pass = all_pass && pass;
    std::printf("criterion %d %s: %s | %s | %.1f s (budget %.0f s)%s\n", c.id, c.name.c_str(), pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs, c.budget_s, in_time ? "" : " OVER BUDGET");
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}
