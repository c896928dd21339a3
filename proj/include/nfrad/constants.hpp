#pragma once

#include <numbers>

namespace nfrad {

/// CODATA 2018 exact defining constants and the values derived from them.
struct PhysicalConstants {
  static constexpr double planck = 6.62607015e-34;            // J s
  static constexpr double hbar = planck / (2.0 * std::numbers::pi);  // J s
  static constexpr double boltzmann = 1.380649e-23;           // J/K
  static constexpr double speed_of_light = 299792458.0;       // m/s
  // pi^2 kB^4 / (60 c^2 hbar^3), evaluated at 40 digits from the exact constants.
  static constexpr double stefan_boltzmann = 5.670374419184429453970996731889e-8;  // W m^-2 K^-4
};

inline constexpr double kHbar = PhysicalConstants::hbar;
inline constexpr double kBoltzmann = PhysicalConstants::boltzmann;
inline constexpr double kSpeedOfLight = PhysicalConstants::speed_of_light;
inline constexpr double kStefanBoltzmann = PhysicalConstants::stefan_boltzmann;

/// Stefan-Boltzmann constant recomputed from hbar, kB and c.
constexpr double derived_stefan_boltzmann() {
  constexpr double pi = std::numbers::pi;
  constexpr double k = kBoltzmann;
  constexpr double c = kSpeedOfLight;
  constexpr double h = kHbar;
  return pi * pi * (k * k * k * k) / (60.0 * c * c * (h * h * h));
}

}  // namespace nfrad
