#pragma once

// Planar generalized transmissivities for energy and momentum across a vacuum gap.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nfrad/planar.hpp"
#include "nfrad/quadrature.hpp"

namespace nfrad {

/// Two layer stacks facing each other across a vacuum gap (m), with body temperatures (K).
struct GapSystem {
  LayerStack body1;
  LayerStack body2;
  double gap = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;

  void validate() const {
    if (!std::isfinite(gap) || gap <= 0.0) throw std::invalid_argument("GapSystem: gap must be positive");
    if (!std::isfinite(t1) || !std::isfinite(t2) || t1 < 0.0 || t2 < 0.0)
      throw std::invalid_argument("GapSystem: temperatures must be finite and >= 0");
  }

  GapSystem swapped() const { return {body2, body1, gap, t2, t1}; }
  GapSystem dual() const { return {body1.dual(), body2.dual(), gap, t1, t2}; }
};

enum class Branch { propagating, evanescent };

/// Per-channel transmissivity values. `total` is the sum of the four channels.
struct ChannelBreakdown {
  double prop_s = 0.0;
  double prop_p = 0.0;
  double evan_s = 0.0;
  double evan_p = 0.0;
  double total = 0.0;
  double error = 0.0;
  bool converged = true;
  double krho_max = 0.0;  // evanescent cutoff, rad/m

  double channel(Polarization pol, Branch branch) const {
    if (branch == Branch::propagating) return pol == Polarization::s ? prop_s : prop_p;
    return pol == Polarization::s ? evan_s : evan_p;
  }
  double propagating() const { return prop_s + prop_p; }
  double evanescent() const { return evan_s + evan_p; }
};

// ---------------------------------------------------------------------------
// Integrands. `phase` is e^{2 i k_hz l} on the propagating side and `decay`
// is e^{-2 |k_hz| l} on the evanescent side.

namespace detail {

inline double norm_one_minus(cplx r1, cplx r2, cplx factor) {
  return std::norm(1.0 - symmetric_product(r1, r2) * factor);
}

}  // namespace detail

namespace detail {

// Forms taking 1 - |R|^2 precomputed (see Reflection).
inline double energy_propagating(const Reflection& a, const Reflection& b, cplx phase) {
  return (a.absorbed * b.absorbed) / norm_one_minus(a.r, b.r, phase);
}

inline double momentum_propagating_core(const Reflection& a, const Reflection& b, cplx phase) {
  return -(a.absorbed * (1.0 + std::norm(b.r))) / norm_one_minus(a.r, b.r, phase);
}

}  // namespace detail

inline double energy_propagating(cplx r1, cplx r2, cplx phase) {
  return ((1.0 - std::norm(r1)) * (1.0 - std::norm(r2))) / detail::norm_one_minus(r1, r2, phase);
}

inline double energy_evanescent(cplx r1, cplx r2, double decay) {
  return 4.0 * (r1.imag() * r2.imag()) * decay / detail::norm_one_minus(r1, r2, cplx(decay, 0.0));
}

/// k_hz-weighted momentum integrand without the k_hz/omega prefactor.
inline double momentum_propagating_core(cplx r1, cplx r2, cplx phase) {
  return -((1.0 - std::norm(r1)) * (1.0 + std::norm(r2))) / detail::norm_one_minus(r1, r2, phase);
}

inline double momentum_evanescent_core(cplx r1, cplx r2, double decay) {
  return 4.0 * r1.imag() * r2.real() * decay / detail::norm_one_minus(r1, r2, cplx(decay, 0.0));
}

/// Energy integrand at (krho, omega) for a gap l. The branch follows from krho vs omega/c;
/// krho == omega/c exactly is not allowed.
inline double energy_integrand(cplx r1, cplx r2, double krho, double omega, double gap) {
  const double k0 = omega / kSpeedOfLight;
  if (krho == k0) throw std::domain_error("energy_integrand: krho on the light line");
  if (krho < k0) {
    const double khz = std::sqrt(k0 * k0 - krho * krho);
    return energy_propagating(r1, r2, std::polar(1.0, 2.0 * khz * gap));
  }
  const double kappa = std::sqrt(krho * krho - k0 * k0);
  return energy_evanescent(r1, r2, std::exp(-2.0 * kappa * gap));
}

/// Momentum integrand including the k_hz/omega weight.
inline double momentum_integrand(cplx r1, cplx r2, double krho, double omega, double gap) {
  const double k0 = omega / kSpeedOfLight;
  if (krho == k0) throw std::domain_error("momentum_integrand: krho on the light line");
  if (krho < k0) {
    const double khz = std::sqrt(k0 * k0 - krho * krho);
    return khz / omega * momentum_propagating_core(r1, r2, std::polar(1.0, 2.0 * khz * gap));
  }
  const double kappa = std::sqrt(krho * krho - k0 * k0);
  return kappa / omega * momentum_evanescent_core(r1, r2, std::exp(-2.0 * kappa * gap));
}

// ---------------------------------------------------------------------------

enum class TransferKind { energy, momentum };

namespace detail {

// Evanescent cutoff in t = |k_hz| l: 2t = 40.
inline constexpr double kEvanescentCutoff = 20.0;
inline constexpr std::size_t kEvanescentPanels = 64;

inline std::vector<double> evanescent_breaks() {
  std::vector<double> b{0.0};
  auto logs = log_breaks(kEvanescentCutoff * 1e-6, kEvanescentCutoff, kEvanescentPanels);
  b.insert(b.end(), logs.begin(), logs.end());
  return b;
}

inline std::vector<double> propagating_breaks(double k0, double gap) {
  // Enough panels to resolve the Fabry-Perot oscillation in e^{2 i k_hz l}.
  const double cycles = k0 * gap / std::numbers::pi;
  const std::size_t n = static_cast<std::size_t>(std::clamp(8.0 + std::ceil(cycles), 8.0, 512.0));
  std::vector<double> b(n + 1);
  for (std::size_t i = 0; i <= n; ++i) b[i] = k0 * static_cast<double>(i) / static_cast<double>(n);
  b.back() = k0;
  return b;
}

inline ChannelBreakdown transmissivity(const GapSystem& system, double omega, TransferKind kind,
                                       const IntegrationSpec& spec) {
  system.validate();
  spec.validate();
  if (!std::isfinite(omega) || omega <= 0.0) throw std::invalid_argument("transmissivity: omega must be positive");
  IntegrationSpec inner = spec;
  inner.threads = 1;
  inner.window.reset();

  const StackAtFrequency s1(system.body1, omega);
  const StackAtFrequency s2(system.body2, omega);
  const double k0 = omega / kSpeedOfLight;
  const double k0_sq = k0 * k0;
  const double l = system.gap;
  constexpr double inv_2pi = 0.5 / std::numbers::pi;
  const bool energy = kind == TransferKind::energy;

  // Floor the absolute tolerance 1e-6 below the black-body scale of the channel,
  // and never below its rounding level, so near-zero integrands (ideal mirrors) terminate.
  const double scale = energy ? k0_sq * inv_2pi : k0_sq * inv_2pi / kSpeedOfLight;
  constexpr double rounding = 64.0 * std::numeric_limits<double>::epsilon();
  inner.absolute = std::max({spec.absolute, spec.relative * 1e-6 * scale, rounding * scale});

  ChannelBreakdown out;
  out.krho_max = std::sqrt(k0_sq + (kEvanescentCutoff / l) * (kEvanescentCutoff / l));

  const auto prop_breaks = propagating_breaks(k0, l);
  const auto evan_breaks = evanescent_breaks();
  bool finite = true;

  for (Polarization pol : kPolarizations) {
    // Propagating branch in u = k_hz: krho dkrho = u du, smooth at grazing incidence.
    auto prop = [&](double u) {
      const double krho_sq = std::max(0.0, k0_sq - u * u);
      const cplx kzv(u, 0.0);
      const Reflection r1 = s1.reflect(pol, krho_sq, kzv);
      const Reflection r2 = s2.reflect(pol, krho_sq, kzv);
      const cplx phase = std::polar(1.0, 2.0 * u * l);
      const double core = energy ? detail::energy_propagating(r1, r2, phase)
                                 : u / omega * detail::momentum_propagating_core(r1, r2, phase);
      return u * inv_2pi * core;
    };
    // Evanescent branch in t = |k_hz| l: krho dkrho = t dt / l^2.
    auto evan = [&](double t) {
      const double kappa = t / l;
      const double krho_sq = k0_sq + kappa * kappa;
      const cplx kzv(0.0, kappa);
      const cplx r1 = s1.reflection(pol, krho_sq, kzv);
      const cplx r2 = s2.reflection(pol, krho_sq, kzv);
      const double decay = std::exp(-2.0 * t);
      const double core = energy ? energy_evanescent(r1, r2, decay) : kappa / omega * momentum_evanescent_core(r1, r2, decay);
      return t / (l * l) * inv_2pi * core;
    };
    const QuadratureResult qp = adaptive_integrate(prop, std::span<const double>(prop_breaks), inner);
    const QuadratureResult qe = adaptive_integrate(evan, std::span<const double>(evan_breaks), inner);
    if (pol == Polarization::s) {
      out.prop_s = qp.value;
      out.evan_s = qe.value;
    } else {
      out.prop_p = qp.value;
      out.evan_p = qe.value;
    }
    out.error += qp.error + qe.error;
    out.converged = out.converged && qp.converged && qe.converged;
    finite = finite && qp.finite && qe.finite;
  }
  out.total = (out.prop_s + out.prop_p) + (out.evan_s + out.evan_p);
  // The tolerance applies to the total. A minor channel whose rounding noise
  // exceeds its own relative target does not make the total unconverged.
  if (!out.converged && finite && out.error <= std::max(inner.relative * std::abs(out.total), inner.absolute))
    out.converged = true;
  return out;
}

}  // namespace detail

/// Energy transmissivity T^e(omega) between the two bodies, in m^-2.
inline ChannelBreakdown energy_transmissivity_pp(const GapSystem& system, double omega,
                                                 const IntegrationSpec& spec = {}) {
  return detail::transmissivity(system, omega, TransferKind::energy, spec);
}

/// Momentum transmissivity T^m(omega) for sources in body 1, in s m^-3.
/// Negative propagating contributions push body 2 away from body 1.
inline ChannelBreakdown momentum_transmissivity_pp(const GapSystem& system, double omega,
                                                   const IntegrationSpec& spec = {}) {
  return detail::transmissivity(system, omega, TransferKind::momentum, spec);
}

}  // namespace nfrad
