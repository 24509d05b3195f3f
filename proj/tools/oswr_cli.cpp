// Command-line driver for the SWR experiments.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "oswr/experiments/config.hpp"
#include "oswr/experiments/runs.hpp"

namespace fs = std::filesystem;
using namespace oswr;
using namespace oswr::experiments;

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::string> out;
  std::optional<double> gamma;
  std::optional<double> nu;
  std::optional<std::string> strategy;
  std::optional<int> kmax;
  std::optional<double> grid_scale;
};

ExperimentConfig build_config(const Overrides& o, bool single_case) {
  ExperimentConfig cfg = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
  if (o.out) cfg.output_dir = *o.out;
  if (o.gamma) cfg.phys.gamma = *o.gamma;
  if (o.nu) cfg.phys.nu = *o.nu;
  if (o.strategy) cfg.strategy = parse_strategy_choice(*o.strategy);
  if (o.kmax) cfg.sweep.k_max = *o.kmax;
  if (o.grid_scale) cfg.sweep.grid_scale = *o.grid_scale;
  if (single_case && (o.gamma || o.nu)) cfg.sweep.cases = {{cfg.phys.gamma, cfg.phys.nu}};
  cfg.phys.validate();
  cfg.validate();
  return cfg;
}

void write_table(const CsvTable& t, const fs::path& path) {
  t.write(path);
  std::cout << "wrote " << path.string() << " (" << t.n_rows() << " rows)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimized Schwarz waveform relaxation experiments for the 1D damped wave equation"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  app.add_option("--config", o.config_path, "Flat key = value config file");
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--gamma", o.gamma, "Telegrapher damping coefficient");
  app.add_option("--nu", o.nu, "Viscoelastic damping coefficient");
  app.add_option("--strategy", o.strategy, "linf, l2 or both");
  app.add_option("--kmax", o.kmax, "SWR iterations for error curves");
  app.add_option("--grid-scale", o.grid_scale, "Multiplier on sweep resolutions");

  auto* error_map = app.add_subcommand("error-map", "log10 SWR error over a (p, q) grid");
  auto* error_curves = app.add_subcommand("error-curves", "SWR error against iteration");
  auto* rho_contours = app.add_subcommand("rho-contours", "Predicted global convergence factors");
  auto* isolines = app.add_subcommand("param-isolines", "Optimized parameters along damping sweeps");
  auto* optimize = app.add_subcommand("optimize", "Print p, q and the optimized factor");
  auto* solve = app.add_subcommand("solve", "Monodomain snapshot at t = T");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 1;
  }

  try {
    if (*optimize) {
      const auto cfg = build_config(o, false);
      const auto dec = cfg.decomposition();
      const auto band = cfg.band();
      for (Strategy s : strategies(cfg.strategy)) {
        const auto r = optimize_transmission(s, cfg.phys, dec, band);
        std::cout << format_number(r.p_opt) << ' ' << format_number(r.q_opt) << ' '
                  << format_number(r.objective_value) << '\n';
      }
      return 0;
    }

    const bool single_case = static_cast<bool>(*error_curves);
    const auto cfg = build_config(o, single_case);
    const fs::path out = cfg.output_dir;

    if (*error_map) {
      write_table(run_error_map(cfg), out / "error_map.csv");
      write_text(out / "error_map.gp", gnuplot_error_map("error_map.csv"));
    } else if (*error_curves) {
      write_table(run_error_curves(cfg), out / "error_curves.csv");
      write_text(out / "error_curves.gp", gnuplot_error_curves("error_curves.csv"));
    } else if (*rho_contours) {
      const auto r = run_rho_contours(cfg);
      std::string first_pq;
      for (const auto& [s, table] : r.pq) {
        const std::string name = "rho_pq_" + to_string(s) + ".csv";
        if (first_pq.empty()) first_pq = name;
        write_table(table, out / name);
      }
      write_table(r.damping, out / "rho_damping.csv");
      write_text(out / "rho_contours.gp", gnuplot_rho_contours(first_pq, "rho_damping.csv"));
    } else if (*isolines) {
      write_table(run_param_isolines(cfg), out / "param_isolines.csv");
      write_text(out / "param_isolines.gp", gnuplot_param_isolines("param_isolines.csv"));
    } else if (*solve) {
      write_table(run_solve(cfg), out / "snapshot.csv");
    }
    return 0;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  }
}
