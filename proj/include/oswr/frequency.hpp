#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <type_traits>
#include <utility>

#include "oswr/core_model.hpp"
#include "oswr/errors.hpp"

namespace oswr {

using Complex = std::complex<double>;

/// Uniform sampling of the resolvable frequency band [omega_min, omega_max].
class FrequencyBand {
 public:
  FrequencyBand(double omega_min, double omega_max, int n_nodes = 1000)
      : omega_min_(omega_min), omega_max_(omega_max), n_nodes_(n_nodes) {
    detail::require(std::isfinite(omega_min) && omega_min > 0.0, "omega_min must be > 0");
    detail::require(std::isfinite(omega_max) && omega_max > omega_min, "omega_max must exceed omega_min");
    detail::require(n_nodes >= 2, "frequency band needs at least two nodes");
  }

  double omega_min() const noexcept { return omega_min_; }
  double omega_max() const noexcept { return omega_max_; }
  int n_nodes() const noexcept { return n_nodes_; }
  double spacing() const noexcept { return (omega_max_ - omega_min_) / (n_nodes_ - 1); }
  double node(int j) const noexcept {
    return j == n_nodes_ - 1 ? omega_max_ : omega_min_ + j * spacing();
  }

 private:
  double omega_min_;
  double omega_max_;
  int n_nodes_;
};

/// Band from the smallest resolvable frequency pi/T up to Nyquist pi/dt.
inline FrequencyBand frequency_band(double T, double dt, int n_nodes = 1000) {
  detail::require(T > 0.0 && dt > 0.0, "T and dt must be positive");
  detail::require(dt < T, "dt must be smaller than T (degenerate band)");
  return FrequencyBand(std::numbers::pi / T, std::numbers::pi / dt, n_nodes);
}

/// Laplace symbol kappa(s) = -i (s/c) sqrt((1 + gamma/s) / (1 + nu s / c^2)),
/// principal branch of the square root.
inline Complex kappa(Complex s, const PhysicalParams& phys) {
  if (s == Complex(0.0, 0.0)) throw SingularityError("kappa: singular at s = 0");
  const Complex denom = 1.0 + phys.nu * s / (phys.c * phys.c);
  if (std::abs(denom) == 0.0) throw SingularityError("kappa: pole where 1 + nu s / c^2 = 0");
  const Complex I(0.0, 1.0);
  return -I * (s / phys.c) * std::sqrt((1.0 + phys.gamma / s) / denom);
}

/// Pointwise SWR convergence factor on the imaginary axis s = i omega:
///   | (kappa cos(kappa a) - lambda sin(kappa a)) / (kappa cos(kappa b) + lambda sin(kappa b)) |.
/// Throws ResonanceError when the denominator vanishes numerically.
inline double convergence_factor(double omega, const TransmissionParams& tp, const PhysicalParams& phys,
                                 const Decomposition& dec) {
  detail::require(omega > 0.0, "convergence_factor: omega must be > 0");
  const Complex s(0.0, omega);
  const Complex k = kappa(s, phys);
  const Complex lam = tp.symbol(s);
  const Complex ka = k * dec.a();
  const Complex kb = k * dec.b();
  const Complex num = k * std::cos(ka) - lam * std::sin(ka);
  const Complex den = k * std::cos(kb) + lam * std::sin(kb);
  if (!(std::abs(den) > 1e-300)) {
    throw ResonanceError("transmission operator resonates at omega = " + std::to_string(omega));
  }
  return std::abs(num / den);
}

/// Two-step amplitude ratio G^2 = N_w N_v / (D_v D_w) built from the
/// unsimplified travelling-wave factors, boundary terms e^{2 i kappa L}
/// included. Evaluated in extended precision: e^{2 i kappa L} exceeds the
/// double range for strongly viscous high-frequency inputs.
inline Complex g_squared_unsimplified(Complex s, const TransmissionParams& tp, const PhysicalParams& phys,
                                      const Decomposition& dec, double L) {
  using Ext = std::complex<long double>;
  const Complex k_d = kappa(s, phys);
  const Ext k(k_d.real(), k_d.imag());
  const Ext lam(tp.symbol(s).real(), tp.symbol(s).imag());
  const Ext I(0.0L, 1.0L);
  const long double a = dec.a();
  const long double b = dec.b();
  const Ext wall = std::exp(2.0L * I * k * static_cast<long double>(L));
  const Ext eb = std::exp(I * k * b), eb_inv = std::exp(-I * k * b);
  const Ext ea = std::exp(I * k * a), ea_inv = std::exp(-I * k * a);

  const Ext d_v = I * k * (eb + eb_inv) + lam * (eb - eb_inv);
  const Ext n_w = I * k * (eb + wall * eb_inv) + lam * (eb - wall * eb_inv);
  const Ext d_w = I * k * (ea + wall * ea_inv) - lam * (ea - wall * ea_inv);
  const Ext n_v = I * k * (ea + ea_inv) - lam * (ea - ea_inv);

  const Ext den = d_v * d_w;
  if (!(std::abs(den) > 0.0L) || !std::isfinite(std::abs(den))) {
    throw ResonanceError("G^2: vanishing or overflowing denominator");
  }
  const Ext g2 = (n_w * n_v) / den;
  return {static_cast<double>(g2.real()), static_cast<double>(g2.imag())};
}

/// Discrete maximum of rho(omega) over the band nodes.
template <class RhoFn>
  requires std::is_invocable_r_v<double, RhoFn, double>
double rho_inf(const FrequencyBand& band, RhoFn&& rho) {
  double best = 0.0;
  for (int j = 0; j < band.n_nodes(); ++j) best = std::max(best, static_cast<double>(rho(band.node(j))));
  return best;
}

/// RMS of rho over the band, composite trapezoid on the uniform nodes.
template <class RhoFn>
  requires std::is_invocable_r_v<double, RhoFn, double>
double rho_l2(const FrequencyBand& band, RhoFn&& rho) {
  double prev = rho(band.node(0));
  prev *= prev;
  double sum = 0.0;
  for (int j = 1; j < band.n_nodes(); ++j) {
    double cur = rho(band.node(j));
    cur *= cur;
    sum += 0.5 * (prev + cur);
    prev = cur;
  }
  // Uniform spacing: h * sum / (omega_max - omega_min) == sum / (n - 1).
  return std::sqrt(sum / (band.n_nodes() - 1));
}

inline double rho_inf(const TransmissionParams& tp, const PhysicalParams& phys, const Decomposition& dec,
                      const FrequencyBand& band) {
  return rho_inf(band, [&](double w) { return convergence_factor(w, tp, phys, dec); });
}

inline double rho_l2(const TransmissionParams& tp, const PhysicalParams& phys, const Decomposition& dec,
                     const FrequencyBand& band) {
  return rho_l2(band, [&](double w) { return convergence_factor(w, tp, phys, dec); });
}

}  // namespace oswr
