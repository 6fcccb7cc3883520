#include "twistbeam/units.hpp"

#include <cmath>

#include "twistbeam/errors.hpp"

namespace twistbeam::units {

namespace {
using constants::c_light;
using constants::hbar;
using constants::pi;
} // namespace

UnitState convert_units(QuantityKind kind, double value, Species species, double mass) {
    if (!(value >= 0.0) || !std::isfinite(value))
        throw ValidationError("convert_units: input must be finite and >= 0");

    UnitState out;
    const bool electron = species == Species::electron;
    const double m = electron ? mass : 0.0;
    const double mc2 = m * c_light * c_light;
    out.K = m * c_light / hbar;

    switch (kind) {
    case QuantityKind::wavelength:
        if (electron) throw ValidationError("convert_units: wavelength input is photon-only");
        if (value == 0.0) throw ValidationError("convert_units: wavelength must be > 0");
        out.k = 2.0 * pi / value;
        out.E = hbar * c_light * out.k;
        break;
    case QuantityKind::photon_energy:
        if (electron) throw ValidationError("convert_units: photon-energy input is photon-only");
        if (value == 0.0) throw ValidationError("convert_units: energy must be > 0");
        out.E = value;
        out.k = value / (hbar * c_light);
        break;
    case QuantityKind::electron_kinetic_energy: {
        if (!electron) throw ValidationError("convert_units: kinetic-energy input is electron-only");
        out.E = value + mc2;  // total energy; kinetic 0 is the rest limit, k = 0
        const double pc2 = out.E * out.E - mc2 * mc2;
        if (pc2 < 0.0) throw ValidationError("convert_units: total energy below mc^2");
        out.k = std::sqrt(pc2) / (hbar * c_light);
        break;
    }
    case QuantityKind::wavenumber:
        if (value == 0.0 && !electron)
            throw ValidationError("convert_units: photon wavenumber must be > 0");
        out.k = value;
        out.E = electron ? std::hypot(hbar * value * c_light, mc2) : hbar * c_light * value;
        break;
    }
    return out;
}

} // namespace twistbeam::units
