#pragma once

// Frequency-dependent material response and thermal occupation functions.

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "nfrad/constants.hpp"

namespace nfrad {

using cplx = std::complex<double>;

/// One damped oscillator term  s w0^2 / (w0^2 - w^2 - i G w).
struct Oscillator {
  double strength = 0.0;
  double resonance = 0.0;  // rad/s
  double damping = 0.0;    // rad/s
};

/// One row of a tabulated dispersion: omega and the complex eps, mu.
struct DispersionSample {
  double omega = 0.0;
  cplx eps{1.0, 0.0};
  cplx mu{1.0, 0.0};
};

struct ConstantModel {
  cplx eps{1.0, 0.0};
  cplx mu{1.0, 0.0};
};

/// eps = eps_inf - wp^2 / (w^2 + i gamma w); mu is frequency independent.
/// With `magnetic` set the roles flip: the Drude form is mu and `mu` holds a constant eps.
struct DrudeModel {
  double eps_inf = 1.0;
  double plasma = 0.0;   // rad/s
  double damping = 0.0;  // rad/s
  cplx mu{1.0, 0.0};
  bool magnetic = false;
};

/// eps = eps_inf + sum of oscillators, and the same form for mu.
struct LorentzModel {
  double eps_inf = 1.0;
  std::vector<Oscillator> eps_terms;
  double mu_inf = 1.0;
  std::vector<Oscillator> mu_terms;
};

/// Piecewise-linear interpolation of the four real components between samples.
struct TabulatedModel {
  std::vector<DispersionSample> samples;
};

/// Ideal absorber with vacuum-matched response; its reflection coefficient is zero.
struct BlackModel {};

/// eps, mu at one frequency. `black` marks a non-reflecting ideal absorber.
struct Response {
  cplx eps{1.0, 0.0};
  cplx mu{1.0, 0.0};
  bool black = false;
};

class MaterialError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A dispersion model. Construct through the named factories, which validate
/// finiteness and passivity of the parameters.
class Material {
 public:
  using Model = std::variant<ConstantModel, DrudeModel, LorentzModel, TabulatedModel, BlackModel>;

  Material() : model_(ConstantModel{}) {}

  static Material vacuum() { return Material(ConstantModel{}); }

  static Material constant(cplx eps, cplx mu = {1.0, 0.0}) {
    require_finite(eps, "constant eps");
    require_finite(mu, "constant mu");
    if (eps.imag() < 0.0 || mu.imag() < 0.0)
      throw MaterialError("constant material is not passive (negative imaginary part)");
    return Material(ConstantModel{eps, mu});
  }

  static Material drude(double eps_inf, double plasma, double damping, cplx mu = {1.0, 0.0}) {
    require_finite(eps_inf, "drude eps_inf");
    require_finite(plasma, "drude plasma frequency");
    require_finite(damping, "drude damping");
    require_finite(mu, "drude mu");
    if (plasma < 0.0 || damping < 0.0)
      throw MaterialError("drude plasma frequency and damping must be non-negative");
    if (mu.imag() < 0.0) throw MaterialError("drude mu is not passive");
    return Material(DrudeModel{eps_inf, plasma, damping, mu});
  }

  static Material lorentz(double eps_inf, std::vector<Oscillator> eps_terms, double mu_inf = 1.0,
                          std::vector<Oscillator> mu_terms = {}) {
    require_finite(eps_inf, "lorentz eps_inf");
    require_finite(mu_inf, "lorentz mu_inf");
    for (const auto* terms : {&eps_terms, &mu_terms}) {
      for (const auto& t : *terms) {
        require_finite(t.strength, "oscillator strength");
        require_finite(t.resonance, "oscillator resonance");
        require_finite(t.damping, "oscillator damping");
        if (t.strength < 0.0 || t.damping < 0.0 || t.resonance < 0.0)
          throw MaterialError("oscillator strength, resonance and damping must be non-negative");
      }
    }
    return Material(LorentzModel{eps_inf, std::move(eps_terms), mu_inf, std::move(mu_terms)});
  }

  static Material tabulated(std::vector<DispersionSample> samples) {
    if (samples.size() < 2) throw MaterialError("tabulated material needs at least two samples");
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const auto& s = samples[i];
      require_finite(s.omega, "table omega");
      require_finite(s.eps, "table eps");
      require_finite(s.mu, "table mu");
      if (s.omega <= 0.0) throw MaterialError("table omega must be positive");
      if (s.eps.imag() < 0.0 || s.mu.imag() < 0.0)
        throw MaterialError("table sample is not passive (negative imaginary part)");
      if (i > 0 && !(s.omega > samples[i - 1].omega)) throw MaterialError("non-monotonic table");
    }
    return Material(TabulatedModel{std::move(samples)});
  }

  static Material black() { return Material(BlackModel{}); }

  const Model& model() const { return model_; }
  bool is_black() const { return std::holds_alternative<BlackModel>(model_); }

  /// Swaps the roles of eps and mu. Used for duality checks.
  Material dual() const {
    return std::visit(
        [](const auto& m) -> Material {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, ConstantModel>) {
            return Material(ConstantModel{m.mu, m.eps});
          } else if constexpr (std::is_same_v<M, DrudeModel>) {
            DrudeModel d = m;
            d.magnetic = !d.magnetic;
            return Material(d);
          } else if constexpr (std::is_same_v<M, LorentzModel>) {
            return Material(LorentzModel{m.mu_inf, m.mu_terms, m.eps_inf, m.eps_terms});
          } else if constexpr (std::is_same_v<M, TabulatedModel>) {
            TabulatedModel t = m;
            for (auto& s : t.samples) std::swap(s.eps, s.mu);
            return Material(std::move(t));
          } else {
            return Material(m);
          }
        },
        model_);
  }

 private:
  explicit Material(ConstantModel m) : model_(m) {}
  explicit Material(DrudeModel m) : model_(m) {}
  explicit Material(LorentzModel m) : model_(std::move(m)) {}
  explicit Material(TabulatedModel m) : model_(std::move(m)) {}
  explicit Material(BlackModel m) : model_(m) {}

  static void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw MaterialError(std::string(what) + " is not finite");
  }
  static void require_finite(cplx v, const char* what) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw MaterialError(std::string(what) + " is not finite");
  }

  Model model_;

  friend Response eval_response(const Material& material, double omega);
};

namespace detail {

inline cplx oscillator_sum(double background, const std::vector<Oscillator>& terms, double omega) {
  cplx sum{background, 0.0};
  for (const auto& t : terms) {
    const double w02 = t.resonance * t.resonance;
    sum += t.strength * w02 / cplx(w02 - omega * omega, -t.damping * omega);
  }
  return sum;
}

inline cplx drude_eps(const DrudeModel& m, double omega) {
  return m.eps_inf - m.plasma * m.plasma / cplx(omega * omega, m.damping * omega);
}

inline double lerp(double a, double b, double f) { return a + f * (b - a); }

inline cplx lerp(cplx a, cplx b, double f) {
  return {lerp(a.real(), b.real(), f), lerp(a.imag(), b.imag(), f)};
}

}  // namespace detail

/// Evaluates eps(omega) and mu(omega). Throws MaterialError for omega <= 0,
/// non-finite omega, or omega outside a tabulated range.
inline Response eval_response(const Material& material, double omega) {
  if (!std::isfinite(omega) || omega <= 0.0)
    throw MaterialError("eval_response: omega must be positive and finite");
  return std::visit(
      [&](const auto& m) -> Response {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, ConstantModel>) {
          return {m.eps, m.mu, false};
        } else if constexpr (std::is_same_v<M, DrudeModel>) {
          const cplx e = detail::drude_eps(m, omega);
          if (m.magnetic) return {m.mu, e, false};
          return {e, m.mu, false};
        } else if constexpr (std::is_same_v<M, LorentzModel>) {
          return {detail::oscillator_sum(m.eps_inf, m.eps_terms, omega),
                  detail::oscillator_sum(m.mu_inf, m.mu_terms, omega), false};
        } else if constexpr (std::is_same_v<M, TabulatedModel>) {
          const auto& s = m.samples;
          if (omega < s.front().omega || omega > s.back().omega)
            throw MaterialError("eval_response: omega outside tabulated range");
          auto hi = std::lower_bound(s.begin(), s.end(), omega,
                                     [](const DispersionSample& a, double w) { return a.omega < w; });
          if (hi->omega == omega) return {hi->eps, hi->mu, false};
          auto lo = hi - 1;
          const double f = (omega - lo->omega) / (hi->omega - lo->omega);
          return {detail::lerp(lo->eps, hi->eps, f), detail::lerp(lo->mu, hi->mu, f), false};
        } else {
          return {{1.0, 0.0}, {1.0, 0.0}, true};
        }
      },
      material.model_);
}

// ---------------------------------------------------------------------------
// Thermal occupation.

/// Mean thermal energy of a mode above the zero point, hbar w / (exp(hbar w / kB T) - 1).
inline double planck_energy_thermal(double omega, double temperature) {
  if (!std::isfinite(omega) || !std::isfinite(temperature) || omega <= 0.0 || temperature < 0.0)
    throw std::domain_error("planck_energy: requires omega > 0, T >= 0, both finite");
  if (temperature == 0.0) return 0.0;
  const double quantum = kHbar * omega;
  return quantum / std::expm1(quantum / (kBoltzmann * temperature));
}

/// Half-coth form (hbar w / 2) coth(hbar w / 2 kB T): thermal part plus the zero point.
inline double planck_energy_total(double omega, double temperature) {
  return planck_energy_thermal(omega, temperature) + 0.5 * kHbar * omega;
}

/// Temperature derivative of the mean thermal energy, kB x^2 e^x / (e^x - 1)^2 with x = hbar w / kB T.
inline double planck_energy_dT(double omega, double temperature) {
  if (!std::isfinite(omega) || !std::isfinite(temperature) || omega <= 0.0 || temperature <= 0.0)
    throw std::domain_error("planck_energy_dT: requires omega > 0 and T > 0");
  const double x = kHbar * omega / (kBoltzmann * temperature);
  // e^-x / (1 - e^-x)^2 stays finite for large x
  const double em1 = std::expm1(-x);
  return kBoltzmann * x * x * std::exp(-x) / (em1 * em1);
}

}  // namespace nfrad
