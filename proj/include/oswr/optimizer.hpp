#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "oswr/core_model.hpp"
#include "oswr/frequency.hpp"
#include "oswr/nelder_mead.hpp"

namespace oswr {

enum class Strategy { Linf, L2 };

inline std::string to_string(Strategy s) { return s == Strategy::Linf ? "linf" : "l2"; }

inline Strategy parse_strategy(const std::string& s) {
  if (s == "linf" || s == "Linf" || s == "inf") return Strategy::Linf;
  if (s == "l2" || s == "L2") return Strategy::L2;
  throw ValidationError("unknown strategy '" + s + "' (expected linf or l2)");
}

/// Objective value assigned to transmission parameters that resonate
/// somewhere on the band.
inline constexpr double kResonancePenalty = 1e6;

struct OptimizationResult {
  double p_opt = 0.0;
  double q_opt = 0.0;
  double objective_value = 0.0;
  Strategy strategy = Strategy::Linf;
  int n_evaluations = 0;
  bool converged = false;

  TransmissionParams params() const { return {p_opt, q_opt}; }
};

/// rho_inf or rho_l2 at (p, q); throws on resonance.
inline double global_factor(Strategy strategy, const TransmissionParams& tp, const PhysicalParams& phys,
                            const Decomposition& dec, const FrequencyBand& band) {
  return strategy == Strategy::Linf ? rho_inf(tp, phys, dec, band) : rho_l2(tp, phys, dec, band);
}

/// global_factor with resonances and non-finite values mapped to the penalty.
inline double penalized_global_factor(Strategy strategy, const TransmissionParams& tp, const PhysicalParams& phys,
                                      const Decomposition& dec, const FrequencyBand& band) {
  try {
    const double v = global_factor(strategy, tp, phys, dec, band);
    return std::isfinite(v) ? v : kResonancePenalty;
  } catch (const ResonanceError&) {
    return kResonancePenalty;
  }
}

/// Minimizes the chosen global convergence factor over (p, q), starting from
/// the absorbing parameters (1/c, 0).
inline OptimizationResult optimize_transmission(Strategy strategy, const PhysicalParams& phys,
                                                const Decomposition& dec, const FrequencyBand& band,
                                                const NelderMeadConfig& cfg = {}) {
  phys.validate();
  auto objective = [&](const std::array<double, 2>& x) {
    return penalized_global_factor(strategy, {x[0], x[1]}, phys, dec, band);
  };
  const auto res = nelder_mead<2>(objective, {1.0 / phys.c, 0.0}, cfg);
  OptimizationResult out;
  out.p_opt = res.x[0];
  out.q_opt = res.x[1];
  out.objective_value = res.value;
  out.strategy = strategy;
  out.n_evaluations = res.n_evaluations;
  out.converged = res.converged;
  return out;
}

}  // namespace oswr
