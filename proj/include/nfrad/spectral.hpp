#pragma once

// Frequency integrals of the planar transmissivities: net heat flux, linearized
// conductance, and the thermal part of the non-equilibrium pressure.

#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "nfrad/constants.hpp"
#include "nfrad/materials.hpp"
#include "nfrad/quadrature.hpp"
#include "nfrad/transmissivity.hpp"

namespace nfrad {

/// Frequency window [1e-7, 60] kB T / hbar. Above it the Bose weight is below
/// 1e-25; the low edge sits far down because momentum and metal transmissivities
/// stay finite as omega -> 0, so the band below it contributes ~1e-7 of its width.
inline std::pair<double, double> auto_window(double temperature) {
  const double scale = kBoltzmann * temperature / kHbar;
  return {1e-7 * scale, 60.0 * scale};
}

struct SpectralResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;        // outer frequency integral
  bool inner_converged = true;  // every wavevector integral it called
  double omega_lo = 0.0;
  double omega_hi = 0.0;
  std::size_t evaluations = 0;  // transmissivity evaluations

  bool ok() const { return converged && inner_converged; }
};

namespace detail {

inline constexpr std::size_t kFrequencyPanels = 96;
// Inner wavevector tolerance relative to the outer frequency tolerance.
inline constexpr double kInnerTightening = 10.0;

/// Integrates (1/2pi) weight(w) T(w) over the window. `reference` is the
/// black-body value of the same quantity; a tolerance floor 1e-6 below it keeps
/// rounding-level integrands (ideal mirrors) from exhausting the subdivision budget.
template <class Weight>
SpectralResult frequency_integral(const GapSystem& system, TransferKind kind, Weight&& weight,
                                  std::pair<double, double> window, double reference, const IntegrationSpec& spec) {
  SpectralResult out;
  out.omega_lo = window.first;
  out.omega_hi = window.second;
  const IntegrationSpec inner = spec.tightened(kInnerTightening);
  std::atomic<bool> inner_ok{true};
  std::atomic<std::size_t> count{0};
  auto integrand = [&](double omega) {
    const double w = weight(omega);
    if (w == 0.0) return 0.0;
    const ChannelBreakdown t = transmissivity(system, omega, kind, inner);
    if (!t.converged) inner_ok = false;
    ++count;
    return w * t.total * (0.5 / std::numbers::pi);
  };
  IntegrationSpec outer = spec;
  outer.absolute = std::max(spec.absolute, spec.relative * 1e-6 * std::abs(reference));
  const auto breaks = log_breaks(window.first, window.second, kFrequencyPanels);
  const QuadratureResult q = adaptive_integrate(integrand, std::span<const double>(breaks), outer);
  out.value = q.value;
  out.error = q.error;
  out.converged = q.converged;
  out.inner_converged = inner_ok;
  out.evaluations = count;
  return out;
}

inline std::pair<double, double> pick_window(const IntegrationSpec& spec, double temperature) {
  if (spec.window) return *spec.window;
  return auto_window(temperature);
}

}  // namespace detail

/// Net radiative flux from body 1 to body 2 (W/m^2). The zero-point part of the
/// mode energy cancels in the temperature difference, so only the thermal part enters.
inline SpectralResult heat_flux(const GapSystem& system, const IntegrationSpec& spec = {}) {
  system.validate();
  spec.validate();
  if (system.t1 == 0.0 && system.t2 == 0.0) throw std::invalid_argument("heat_flux: both temperatures are zero");
  const double tmax = std::max(system.t1, system.t2);
  const auto window = detail::pick_window(spec, tmax);
  if (system.t1 == system.t2) return {0.0, 0.0, true, true, window.first, window.second, 0};
  const double t1 = system.t1, t2 = system.t2;
  auto weight = [t1, t2](double omega) { return planck_energy_thermal(omega, t1) - planck_energy_thermal(omega, t2); };
  const double reference = kStefanBoltzmann * (std::pow(t1, 4) - std::pow(t2, 4));
  return detail::frequency_integral(system, TransferKind::energy, weight, window, reference, spec);
}

/// Linearized radiative conductance at temperature T (W m^-2 K^-1).
inline SpectralResult conductance(const GapSystem& system, double temperature, const IntegrationSpec& spec = {}) {
  system.validate();
  spec.validate();
  if (!std::isfinite(temperature) || temperature <= 0.0) throw std::invalid_argument("conductance: T must be positive");
  const auto window = detail::pick_window(spec, temperature);
  auto weight = [temperature](double omega) { return planck_energy_dT(omega, temperature); };
  const double reference = 4.0 * kStefanBoltzmann * std::pow(temperature, 3);
  return detail::frequency_integral(system, TransferKind::energy, weight, window, reference, spec);
}

/// Thermal part of the non-equilibrium pressure (Pa) produced by sources in
/// `source_body` (1 or 2) at `source_temperature`, the other body held at 0 K.
/// The zero-point (equilibrium Casimir) contribution is not included.
inline SpectralResult neq_pressure(const GapSystem& system, int source_body, double source_temperature,
                                   const IntegrationSpec& spec = {}) {
  system.validate();
  spec.validate();
  if (source_body != 1 && source_body != 2) throw std::invalid_argument("neq_pressure: source body must be 1 or 2");
  if (!std::isfinite(source_temperature) || source_temperature < 0.0)
    throw std::invalid_argument("neq_pressure: source temperature must be >= 0");
  if (source_temperature == 0.0) return {};
  const GapSystem oriented = source_body == 1 ? system : system.swapped();
  const auto window = detail::pick_window(spec, source_temperature);
  auto weight = [source_temperature](double omega) { return planck_energy_thermal(omega, source_temperature); };
  const double reference = 2.0 / 3.0 * kStefanBoltzmann * std::pow(source_temperature, 4) / kSpeedOfLight;
  return detail::frequency_integral(oriented, TransferKind::momentum, weight, window, reference, spec);
}

}  // namespace nfrad
