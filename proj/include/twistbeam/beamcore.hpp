#pragma once

/**
 * beamcore — beam-geometry scalars, special functions and normalization
 * constants shared by every other module.
 *
 * All lengths are in meters, wavenumbers in rad/m, energies in joules.
 * eV/nm/μm conversions happen at the CLI boundary only.
 */

#include <cmath>
#include <limits>
#include <string>

#include "twistbeam/constants.hpp"

namespace twistbeam {

enum class Species { photon, electron };

const char* to_string(Species s);
Species species_from_string(const std::string& s);

/// Quantum numbers and waist defining one Laguerre-Gauss mode.
///
/// Paraxiality is judged by the witness ζ/(k²w0²): construction warns above
/// 0.1 and rejects above 0.5.
struct ModeSpec {
    int n = 0;          ///< radial quantum number, n ≥ 0
    int l = 0;          ///< azimuthal index, signed
    double k = 0.0;     ///< wavenumber (rad/m)
    double w0 = 0.0;    ///< waist (m)
    Species species = Species::photon;
    double m = 0.0;     ///< rest mass (kg); 0 for the photon

    ModeSpec(int n, int l, double k, double w0, Species species, double mass);

    static ModeSpec photon(int n, int l, double k, double w0);
    static ModeSpec electron(int n, int l, double k, double w0,
                             double mass = constants::electron_mass);

    /// Mode weight ζ = 2n + |l| + 1.
    [[nodiscard]] int zeta() const { return 2 * n + std::abs(l) + 1; }

    /// Paraxiality witness ζ/(k²w0²).
    [[nodiscard]] double paraxiality() const {
        return static_cast<double>(zeta()) / (k * k * w0 * w0);
    }

    /// Rayleigh length zR = k·w0²/2 (m).
    [[nodiscard]] double rayleigh_length() const { return 0.5 * k * w0 * w0; }

    /// Compton wavenumber K = mc/ħ (rad/m); 0 for the photon.
    [[nodiscard]] double compton_wavenumber() const {
        return m * constants::c_light / constants::hbar;
    }

    /// Mode energy: ħck for the photon, √(m²c⁴ + ħ²k²c²) for the electron (J).
    [[nodiscard]] double energy() const;
};

/// Width, curvature and Gouy phase of the Gaussian envelope at plane z.
///
/// The flat wavefront at z = 0 is represented by curvature = 0 rather than an
/// infinite radius; radius() reports +inf there.
struct BeamGeometry {
    double w = 0.0;           ///< beam width w(z) (m)
    double curvature = 0.0;   ///< 1/R(z) (1/m), signed, 0 at the waist
    double gouy = 0.0;        ///< Gouy phase arctan(z/zR), in (−π/2, π/2)
    double zR = 0.0;          ///< Rayleigh length (m)

    [[nodiscard]] bool flat() const { return curvature == 0.0; }
    [[nodiscard]] double radius() const {
        return flat() ? std::numeric_limits<double>::infinity() : 1.0 / curvature;
    }
};

/// Evaluate w(z), 1/R(z) and the Gouy phase. Total function of z.
BeamGeometry beam_geometry(double z, const ModeSpec& mode);

/// Generalized Laguerre polynomial L_n^α(x) by the upward three-term
/// recurrence, stable for α ≥ 0. Supported up to n = 50 (accuracy beyond
/// that is not established here); rejects n < 0, α < 0 and n > 50.
double laguerre(int n, int alpha, double x);

/// dL_n^α/dx = −L_{n−1}^{α+1}(x).
double laguerre_derivative(int n, int alpha, double x);

/// Normalization constant C_nl = √(2·n!/(π·(n+|l|)!)). The factorial ratio
/// is accumulated as a running product, never as two factorials.
double norm_const(int n, int l);

} // namespace twistbeam
