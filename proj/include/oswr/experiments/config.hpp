#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "oswr/core_model.hpp"
#include "oswr/errors.hpp"
#include "oswr/experiments/csv.hpp"
#include "oswr/frequency.hpp"
#include "oswr/optimizer.hpp"

namespace oswr::experiments {

enum class StrategyChoice { Linf, L2, both };

inline std::vector<Strategy> strategies(StrategyChoice c) {
  switch (c) {
    case StrategyChoice::Linf:
      return {Strategy::Linf};
    case StrategyChoice::L2:
      return {Strategy::L2};
    default:
      return {Strategy::Linf, Strategy::L2};
  }
}

inline std::string to_string(StrategyChoice c) {
  return c == StrategyChoice::Linf ? "linf" : c == StrategyChoice::L2 ? "l2" : "both";
}

inline StrategyChoice parse_strategy_choice(const std::string& s) {
  if (s == "both") return StrategyChoice::both;
  return parse_strategy(s) == Strategy::Linf ? StrategyChoice::Linf : StrategyChoice::L2;
}

struct DampingCase {
  double gamma = 0.0;
  double nu = 0.0;
  bool operator==(const DampingCase&) const = default;
};

/// Axis ranges and resolutions of the figure sweeps.
struct SweepSpec {
  // (p, q) plane: error maps and rho contours.
  double p_min = 0.0, p_max = 2.0;
  int p_count = 25;
  double q_min = -2.0, q_max = 10.0;
  int q_count = 25;
  // Iterations for error maps / error curves.
  int k_map = 10;
  int k_max = 80;
  int mode = 1;
  // Error-curve cases (gamma:nu pairs).
  std::vector<DampingCase> cases{{4, 0}, {8, 0}, {10, 0}, {12, 0}, {0, 0.001}, {0, 0.005}, {0, 0.01}, {0, 0.05}};
  // Log-spaced (gamma, nu) grid for rho contours.
  double gamma_min = 0.1, gamma_max = 12.0;
  int gamma_count = 8;
  double nu_min = 1e-4, nu_max = 0.05;
  int nu_count = 8;
  // Parameter isolines: nu-sweeps at each fixed gamma, gamma-sweeps at each fixed nu.
  std::vector<double> isoline_gammas{0.0, 1.0, 4.0, 12.0};
  std::vector<double> isoline_nus{0.0, 0.001, 0.01, 0.05};
  double isoline_nu_min = 1e-4, isoline_nu_max = 1.0;
  int isoline_nu_count = 10;
  double isoline_gamma_min = 0.1, isoline_gamma_max = 12.0;
  int isoline_gamma_count = 10;
  // Multiplier on every sweep resolution.
  double grid_scale = 1.0;
};

/// Complete description of one experiment run. Defaults are the reference
/// setting: c = 1, L = 1, a = 0.3, b = 0.4, dx = dt = 0.002, T = 5.
struct ExperimentConfig {
  PhysicalParams phys{1.0, 0.0, 0.05, 1.0};
  double dx = 0.002;
  double dt = 0.002;
  double T = 5.0;
  double a = 0.3;
  double b = 0.4;
  int band_nodes = 1000;
  SweepSpec sweep;
  StrategyChoice strategy = StrategyChoice::both;
  std::string output_dir = "out";

  GridSpec grid() const { return GridSpec(phys, dx, dt, T); }
  GridSpec grid_for(const PhysicalParams& p) const { return GridSpec(p, dx, dt, T); }
  Decomposition decomposition() const { return Decomposition(a, b, phys, grid()); }
  FrequencyBand band() const { return frequency_band(T, dt, band_nodes); }

  /// Throws ValidationError when any derived object cannot be built.
  void validate() const {
    (void)decomposition();
    (void)band();
    const auto& s = sweep;
    detail::require(s.p_count >= 1 && s.q_count >= 1, "sweep counts must be >= 1");
    detail::require(s.gamma_count >= 1 && s.nu_count >= 1, "sweep counts must be >= 1");
    detail::require(s.isoline_nu_count >= 1 && s.isoline_gamma_count >= 1, "sweep counts must be >= 1");
    detail::require(s.k_map >= 0 && s.k_max >= 0, "iteration counts must be >= 0");
    detail::require(s.mode >= 1, "sweep.mode must be >= 1");
    detail::require(s.gamma_min > 0.0 && s.gamma_max >= s.gamma_min, "log-spaced gamma range must be positive");
    detail::require(s.nu_min > 0.0 && s.nu_max >= s.nu_min, "log-spaced nu range must be positive");
    detail::require(s.isoline_nu_min > 0.0 && s.isoline_nu_max >= s.isoline_nu_min,
                    "log-spaced isoline nu range must be positive");
    detail::require(s.isoline_gamma_min > 0.0 && s.isoline_gamma_max >= s.isoline_gamma_min,
                    "log-spaced isoline gamma range must be positive");
    detail::require(s.grid_scale > 0.0 && std::isfinite(s.grid_scale), "grid_scale must be > 0");
  }
};

/// Resolution after applying the desk-scale multiplier; endpoints are kept.
inline int scaled_count(int count, double scale) {
  if (count <= 1) return count;
  return std::max(2, static_cast<int>(std::lround((count - 1) * scale)) + 1);
}

/// i-th of n uniformly spaced values in [lo, hi]. The fraction i/(n-1) is
/// formed first so equal fractions give bit-identical values across
/// resolutions.
inline double lin_node(double lo, double hi, int i, int n) {
  if (n <= 1) return lo;
  if (i == n - 1) return hi;
  const double t = static_cast<double>(i) / static_cast<double>(n - 1);
  return lo + (hi - lo) * t;
}

inline double log_node(double lo, double hi, int i, int n) {
  if (n <= 1) return lo;
  if (i == n - 1) return hi;
  if (i == 0) return lo;
  const double t = static_cast<double>(i) / static_cast<double>(n - 1);
  return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * t);
}

namespace config_detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) throw ValidationError("config key '" + key + "': not a number: '" + v + "'");
  return out;
}

inline int parse_int(const std::string& key, const std::string& v) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ValidationError("config key '" + key + "': not an integer: '" + v + "'");
  }
  return out;
}

inline std::vector<std::string> split(const std::string& v, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split(v, ',')) out.push_back(parse_double(key, item));
  return out;
}

inline std::vector<DampingCase> parse_cases(const std::string& key, const std::string& v) {
  std::vector<DampingCase> out;
  for (const auto& item : split(v, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ValidationError("config key '" + key + "': expected gamma:nu pairs");
    out.push_back({parse_double(key, trim(item.substr(0, colon))), parse_double(key, trim(item.substr(colon + 1)))});
  }
  return out;
}

inline std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + format_number(xs[i]);
  return out;
}

struct Field {
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <class T>
Field number_field(T ExperimentConfig::*member) {
  return {[member](ExperimentConfig& c, const std::string& v) {
            if constexpr (std::is_same_v<T, int>) {
              c.*member = parse_int("", v);
            } else {
              c.*member = parse_double("", v);
            }
          },
          [member](const ExperimentConfig& c) {
            if constexpr (std::is_same_v<T, int>) {
              return std::to_string(c.*member);
            } else {
              return format_number(c.*member);
            }
          }};
}

template <class T>
Field sweep_field(T SweepSpec::*member) {
  return {[member](ExperimentConfig& c, const std::string& v) {
            if constexpr (std::is_same_v<T, int>) {
              c.sweep.*member = parse_int("", v);
            } else {
              c.sweep.*member = parse_double("", v);
            }
          },
          [member](const ExperimentConfig& c) {
            if constexpr (std::is_same_v<T, int>) {
              return std::to_string(c.sweep.*member);
            } else {
              return format_number(c.sweep.*member);
            }
          }};
}

inline Field phys_field(double PhysicalParams::*member) {
  return {[member](ExperimentConfig& c, const std::string& v) { c.phys.*member = parse_double("", v); },
          [member](const ExperimentConfig& c) { return format_number(c.phys.*member); }};
}

/// Ordered key table; the order is the serialization order.
inline const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = [] {
    std::vector<std::pair<std::string, Field>> t;
    t.emplace_back("phys.c", phys_field(&PhysicalParams::c));
    t.emplace_back("phys.gamma", phys_field(&PhysicalParams::gamma));
    t.emplace_back("phys.nu", phys_field(&PhysicalParams::nu));
    t.emplace_back("phys.L", phys_field(&PhysicalParams::L));
    t.emplace_back("grid.dx", number_field(&ExperimentConfig::dx));
    t.emplace_back("grid.dt", number_field(&ExperimentConfig::dt));
    t.emplace_back("grid.T", number_field(&ExperimentConfig::T));
    t.emplace_back("dec.a", number_field(&ExperimentConfig::a));
    t.emplace_back("dec.b", number_field(&ExperimentConfig::b));
    t.emplace_back("band.n_nodes", number_field(&ExperimentConfig::band_nodes));
    t.emplace_back("sweep.p_min", sweep_field(&SweepSpec::p_min));
    t.emplace_back("sweep.p_max", sweep_field(&SweepSpec::p_max));
    t.emplace_back("sweep.p_count", sweep_field(&SweepSpec::p_count));
    t.emplace_back("sweep.q_min", sweep_field(&SweepSpec::q_min));
    t.emplace_back("sweep.q_max", sweep_field(&SweepSpec::q_max));
    t.emplace_back("sweep.q_count", sweep_field(&SweepSpec::q_count));
    t.emplace_back("sweep.k_map", sweep_field(&SweepSpec::k_map));
    t.emplace_back("sweep.k_max", sweep_field(&SweepSpec::k_max));
    t.emplace_back("sweep.mode", sweep_field(&SweepSpec::mode));
    t.emplace_back("sweep.cases",
                   Field{[](ExperimentConfig& c, const std::string& v) { c.sweep.cases = parse_cases("sweep.cases", v); },
                         [](const ExperimentConfig& c) {
                           std::string out;
                           for (std::size_t i = 0; i < c.sweep.cases.size(); ++i) {
                             out += (i ? ", " : "") + format_number(c.sweep.cases[i].gamma) + ":" +
                                    format_number(c.sweep.cases[i].nu);
                           }
                           return out;
                         }});
    t.emplace_back("sweep.gamma_min", sweep_field(&SweepSpec::gamma_min));
    t.emplace_back("sweep.gamma_max", sweep_field(&SweepSpec::gamma_max));
    t.emplace_back("sweep.gamma_count", sweep_field(&SweepSpec::gamma_count));
    t.emplace_back("sweep.nu_min", sweep_field(&SweepSpec::nu_min));
    t.emplace_back("sweep.nu_max", sweep_field(&SweepSpec::nu_max));
    t.emplace_back("sweep.nu_count", sweep_field(&SweepSpec::nu_count));
    t.emplace_back("sweep.isoline_gammas",
                   Field{[](ExperimentConfig& c, const std::string& v) {
                           c.sweep.isoline_gammas = parse_list("sweep.isoline_gammas", v);
                         },
                         [](const ExperimentConfig& c) { return join(c.sweep.isoline_gammas); }});
    t.emplace_back("sweep.isoline_nus",
                   Field{[](ExperimentConfig& c, const std::string& v) {
                           c.sweep.isoline_nus = parse_list("sweep.isoline_nus", v);
                         },
                         [](const ExperimentConfig& c) { return join(c.sweep.isoline_nus); }});
    t.emplace_back("sweep.isoline_nu_min", sweep_field(&SweepSpec::isoline_nu_min));
    t.emplace_back("sweep.isoline_nu_max", sweep_field(&SweepSpec::isoline_nu_max));
    t.emplace_back("sweep.isoline_nu_count", sweep_field(&SweepSpec::isoline_nu_count));
    t.emplace_back("sweep.isoline_gamma_min", sweep_field(&SweepSpec::isoline_gamma_min));
    t.emplace_back("sweep.isoline_gamma_max", sweep_field(&SweepSpec::isoline_gamma_max));
    t.emplace_back("sweep.isoline_gamma_count", sweep_field(&SweepSpec::isoline_gamma_count));
    t.emplace_back("sweep.grid_scale", sweep_field(&SweepSpec::grid_scale));
    t.emplace_back("strategy",
                   Field{[](ExperimentConfig& c, const std::string& v) { c.strategy = parse_strategy_choice(v); },
                         [](const ExperimentConfig& c) { return to_string(c.strategy); }});
    t.emplace_back("output_dir", Field{[](ExperimentConfig& c, const std::string& v) { c.output_dir = v; },
                                       [](const ExperimentConfig& c) { return c.output_dir; }});
    return t;
  }();
  return table;
}

}  // namespace config_detail

/// Applies `key = value` lines to `base`. '#' starts a comment; unknown keys
/// are rejected.
inline ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {}) {
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = config_detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = config_detail::trim(line.substr(0, eq));
    const std::string value = config_detail::trim(line.substr(eq + 1));
    bool found = false;
    for (const auto& [name, field] : config_detail::fields()) {
      if (name != key) continue;
      try {
        field.set(base, value);
      } catch (const ValidationError& e) {
        throw ValidationError("config key '" + key + "': " + e.what());
      }
      found = true;
      break;
    }
    if (!found) throw ValidationError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  return base;
}

inline ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {}) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot read config file '" + path.string() + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

/// Serializes every key; parse_config(to_text(c)) reproduces c exactly.
inline std::string to_text(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& [name, field] : config_detail::fields()) out += name + " = " + field.get(cfg) + "\n";
  return out;
}

}  // namespace oswr::experiments
