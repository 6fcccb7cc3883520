#pragma once

#include <numbers>

namespace twistbeam::constants {

inline constexpr double pi = std::numbers::pi;

/// Speed of light in vacuum (m/s, exact).
inline constexpr double c_light = 299792458.0;

/// Planck constant (J·s, exact SI).
inline constexpr double planck_h = 6.62607015e-34;

/// Reduced Planck constant ħ (J·s).
inline constexpr double hbar = planck_h / (2.0 * pi);

/// Elementary charge (C, exact SI).
inline constexpr double elementary_charge = 1.602176634e-19;

/// Electron rest mass (kg, CODATA 2018).
inline constexpr double electron_mass = 9.1093837015e-31;

/// 1 eV in joules.
inline constexpr double electron_volt = elementary_charge;

inline constexpr double ev_to_joule(double ev) { return ev * electron_volt; }
inline constexpr double joule_to_ev(double j) { return j / electron_volt; }

} // namespace twistbeam::constants
