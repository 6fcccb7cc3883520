#pragma once

#include "twistbeam/beamcore.hpp"

namespace twistbeam::units {

/// A mutually consistent (k, E) pair. E is the total energy in joules;
/// K = mc/ħ is the Compton wavenumber (0 for the photon).
struct UnitState {
    double k = 0.0;   ///< rad/m
    double E = 0.0;   ///< J
    double K = 0.0;   ///< rad/m
};

enum class QuantityKind {
    wavelength,               ///< photon vacuum wavelength (m)
    photon_energy,            ///< photon energy (J)
    electron_kinetic_energy,  ///< electron kinetic energy (J)
    wavenumber,               ///< k (rad/m), either species
};

/// Convert a single positive input quantity into a consistent (k, E) pair.
/// For electrons the dispersion is E² = (ħkc)² + (mc²)²; inputs implying
/// E < mc² are rejected.
UnitState convert_units(QuantityKind kind, double value, Species species,
                        double mass = constants::electron_mass);

} // namespace twistbeam::units
