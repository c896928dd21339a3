#pragma once

// Plane-wave optics of layered media: z-wavevectors, interface Fresnel
// coefficients for both polarizations with eps and mu, and the downward
// recursion for the reflection coefficient of a multilayer seen from vacuum.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nfrad/constants.hpp"
#include "nfrad/materials.hpp"

namespace nfrad {

enum class Polarization { s, p };

inline constexpr Polarization kPolarizations[] = {Polarization::s, Polarization::p};

inline const char* to_string(Polarization pol) { return pol == Polarization::s ? "s" : "p"; }

class DegenerateInterfaceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A film of finite thickness (m) inside a layer stack.
struct Film {
  Material material;
  double thickness = 0.0;
};

/// Semi-infinite terminal medium plus films ordered from the vacuum interface inward.
/// Zero thickness is accepted here (it is a no-op layer); negative is not.
class LayerStack {
 public:
  LayerStack() = default;
  explicit LayerStack(Material terminal, std::vector<Film> films = {})
      : terminal_(std::move(terminal)), films_(std::move(films)) {
    for (const auto& f : films_) {
      if (!std::isfinite(f.thickness) || f.thickness < 0.0)
        throw std::invalid_argument("LayerStack: film thickness must be finite and non-negative");
      if (f.material.is_black()) throw std::invalid_argument("LayerStack: a black material can only be the terminal medium");
    }
  }

  const Material& terminal() const { return terminal_; }
  const std::vector<Film>& films() const { return films_; }

  LayerStack dual() const {
    std::vector<Film> films;
    films.reserve(films_.size());
    for (const auto& f : films_) films.push_back({f.material.dual(), f.thickness});
    return LayerStack(terminal_.dual(), std::move(films));
  }

 private:
  Material terminal_ = Material::vacuum();
  std::vector<Film> films_;
};

namespace detail {

// Product written out so that a*b and b*a round identically.
inline cplx symmetric_product(cplx a, cplx b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

// sqrt on the branch with Im >= 0 (and Re >= 0 when Im == 0).
inline cplx upper_sqrt(cplx z) {
  cplx r = std::sqrt(z);
  if (r.imag() < 0.0 || (r.imag() == 0.0 && r.real() < 0.0)) r = -r;
  return r;
}

}  // namespace detail

/// z-wavevector from k0^2 = (w/c)^2 and krho^2.
inline cplx kz_from_squares(cplx eps, cplx mu, double k0_sq, double krho_sq) {
  return detail::upper_sqrt(detail::symmetric_product(eps, mu) * k0_sq - krho_sq);
}

/// k_z = sqrt(eps mu w^2/c^2 - krho^2) with Im k_z >= 0.
inline cplx kz(cplx eps, cplx mu, double omega, double krho) {
  const double k0 = omega / kSpeedOfLight;
  return kz_from_squares(eps, mu, k0 * k0, krho * krho);
}

/// A reflection coefficient together with 1 - |r|^2, the latter evaluated
/// without the cancellation of 1 - norm(r) when |r| is close to 1.
struct Reflection {
  cplx r{0.0, 0.0};
  double absorbed = 1.0;
};

namespace detail {

// r = (a - b) / (a + b) and 1 - |r|^2 = 4 Re(a conj(b)) / |a + b|^2.
inline Reflection fresnel_parts(cplx w_from, cplx kz_from, cplx w_to, cplx kz_to) {
  const cplx a = w_to * kz_from;
  const cplx b = w_from * kz_to;
  const cplx den = a + b;
  if (den == cplx(0.0, 0.0)) throw DegenerateInterfaceError("Fresnel coefficient denominator vanishes");
  const double re_ab = a.real() * b.real() + a.imag() * b.imag();
  return {(a - b) / den, 4.0 * re_ab / std::norm(den)};
}

inline cplx fresnel(cplx w_from, cplx kz_from, cplx w_to, cplx kz_to) {
  return fresnel_parts(w_from, kz_from, w_to, kz_to).r;
}

// R = (r + x) / (1 + r x) with x = R_below e^{2 i kz d}. Uses
// |1 + r x|^2 - |r + x|^2 = (1 - |r|^2)(1 - |x|^2) - 4 Im r Im x and
// 1 - |x|^2 = (1 - |e|^2) + |e|^2 (1 - |R_below|^2).
inline Reflection compose(const Reflection& top, const Reflection& below, cplx kz, double thickness) {
  const cplx phase = std::exp(cplx(0.0, 2.0) * kz * thickness);
  const double decay_sq = std::exp(-4.0 * kz.imag() * thickness);
  const double lost = -std::expm1(-4.0 * kz.imag() * thickness);
  const cplx x = below.r * phase;
  const double x_absorbed = lost + decay_sq * below.absorbed;
  const cplx den = 1.0 + top.r * x;
  const double num = top.absorbed * x_absorbed - 4.0 * top.r.imag() * x.imag();
  return {(top.r + x) / den, num / std::norm(den)};
}

}  // namespace detail

/// Fresnel reflection for a wave in `from` hitting `to`. s uses mu weights,
/// p uses eps weights: r = (w_to kz_from - w_from kz_to) / (w_to kz_from + w_from kz_to).
inline cplx interface_reflection(const Response& from, const Response& to, Polarization pol, double omega,
                                 double krho) {
  const cplx kf = kz(from.eps, from.mu, omega, krho);
  const cplx kt = kz(to.eps, to.mu, omega, krho);
  if (pol == Polarization::s) return detail::fresnel(from.mu, kf, to.mu, kt);
  return detail::fresnel(from.eps, kf, to.eps, kt);
}

/// A LayerStack with every layer's response evaluated at one frequency, so
/// repeated reflection evaluations over krho skip the dispersion models.
class StackAtFrequency {
 public:
  StackAtFrequency(const LayerStack& stack, double omega) : omega_(omega) {
    const double k0 = omega / kSpeedOfLight;
    k0_sq_ = k0 * k0;
    const Response terminal = eval_response(stack.terminal(), omega);
    layers_.reserve(stack.films().size() + 1);
    // Zero-thickness films are skipped: they leave R exactly unchanged.
    for (const auto& f : stack.films())
      if (f.thickness > 0.0) layers_.push_back({eval_response(f.material, omega), f.thickness});
    black_ = terminal.black && layers_.empty();
    // A black terminal under films is a matched (vacuum-like) absorber.
    layers_.push_back({terminal, 0.0});
  }

  double omega() const { return omega_; }
  double k0_sq() const { return k0_sq_; }

  /// Reflection seen from vacuum, given krho^2 and the vacuum k_z.
  Reflection reflect(Polarization pol, double krho_sq, cplx kz_vacuum) const {
    if (black_) return {};
    const bool use_mu = pol == Polarization::s;
    // Walk from the deepest interface up to the vacuum one.
    const std::size_t n = layers_.size();
    cplx kz_below = kz_from_squares(layers_[n - 1].response.eps, layers_[n - 1].response.mu, k0_sq_, krho_sq);
    cplx w_below = use_mu ? layers_[n - 1].response.mu : layers_[n - 1].response.eps;
    Reflection reflected;
    for (std::size_t i = n - 1; i-- > 0;) {
      const auto& layer = layers_[i];
      const cplx kz_here = kz_from_squares(layer.response.eps, layer.response.mu, k0_sq_, krho_sq);
      const cplx w_here = use_mu ? layer.response.mu : layer.response.eps;
      const Reflection r = detail::fresnel_parts(w_here, kz_here, w_below, kz_below);
      reflected = i == n - 2 ? r : detail::compose(r, reflected, kz_below, layers_[i + 1].thickness);
      kz_below = kz_here;
      w_below = w_here;
    }
    const Reflection r0 = detail::fresnel_parts({1.0, 0.0}, kz_vacuum, w_below, kz_below);
    if (n == 1) return r0;
    return detail::compose(r0, reflected, kz_below, layers_[0].thickness);
  }

  cplx reflection(Polarization pol, double krho_sq, cplx kz_vacuum) const {
    return reflect(pol, krho_sq, kz_vacuum).r;
  }

  cplx reflection_at(Polarization pol, double krho) const {
    const double krho_sq = krho * krho;
    return reflection(pol, krho_sq, kz_from_squares({1.0, 0.0}, {1.0, 0.0}, k0_sq_, krho_sq));
  }

 private:
  struct Layer {
    Response response;
    double thickness;
  };
  double omega_ = 0.0;
  double k0_sq_ = 0.0;
  bool black_ = false;
  std::vector<Layer> layers_;
};

/// Reflection coefficient of a stack seen from vacuum; exactly 0 for a bare black terminal.
inline cplx stack_reflection(const LayerStack& stack, Polarization pol, double omega, double krho) {
  return StackAtFrequency(stack, omega).reflection_at(pol, krho);
}

}  // namespace nfrad
