#pragma once

/**
 * expectations — mode moments and the quantized longitudinal velocity.
 *
 * Closed forms (ζ = 2n+|l|+1):
 *     ⟨r²⟩ = ζ w²(z)/2,   ⟨∂Φ/∂z⟩ = −ζ/(k w0²),   ⟨p⊥²⟩/ħ² = 2ζ/w0²,
 *     photon   ⟨v_z⟩ = c (1 − ζ/(k²w0²)),
 *     electron ⟨v_z⟩ = c k/√(k²+K²) · (1 − ζ/(k²w0²)),  K = mc/ħ.
 *
 * Each closed form is paired with an independent quadrature: ⟨r²⟩ and
 * ⟨p⊥²⟩ integrate |Ψ|²r² and |∇⊥Ψ|² on the Gauss-Laguerre polar grid;
 * ⟨∂Φ/∂z⟩ integrates a central finite difference of the phase. The two
 * derivative-based routes share nothing, so neither can hide an error in
 * the other.
 */

#include <string>
#include <vector>

#include "twistbeam/beamcore.hpp"

namespace twistbeam {

struct MomentValue {
    double analytic = 0.0;
    double numeric = 0.0;
    double abs_diff = 0.0;
};

struct MomentReport {
    MomentValue r2;        ///< ⟨r²⟩ (m²); z-dependent
    MomentValue dphi_dz;   ///< ⟨∂Φ/∂z⟩ (rad/m); z-independent
    MomentValue pperp2;    ///< ⟨k⊥²⟩ (rad²/m²); z-independent
};

struct MomentOptions {
    int n_radial = 64;
    int n_azimuthal = 64;
    bool convergence_check = true;   ///< recompute at 2× radial nodes
    double fd_step_fraction = 1e-6;  ///< z step for the phase difference, in units of zR
};

/// Analytic and quadrature moments at plane z. Throws ConvergenceError when
/// doubling the radial nodes moves any numeric value by more than 1e-8
/// relative.
MomentReport moments(const ModeSpec& mode, double z, const MomentOptions& opts = {});

/// ∫ A (∂A/∂z) r dr dφ with ∂A/∂z by central finite difference. Vanishes
/// identically (it is half the z-derivative of the norm).
double amplitude_flux(const ModeSpec& mode, double z, const MomentOptions& opts = {});

double photon_vz(const ModeSpec& mode);    ///< m/s; requires species = photon
double electron_vz(const ModeSpec& mode);  ///< m/s; requires species = electron
double mode_vz(const ModeSpec& mode);      ///< dispatch on species

/// Unexpanded velocity v₀·√(1 − ⟨p⊥²⟩/p²); the closed forms above keep only
/// the first paraxial order of this.
double vz_unexpanded(const ModeSpec& mode);

struct VzRow {
    int n = 0;
    int l = 0;            ///< |l|; the sign is degenerate for v_z and M
    int zeta = 0;
    double vz = 0.0;      ///< m/s
    double mass = 0.0;    ///< effective centroid mass (kg)
    double mass_c2_over_E = 0.0;
};

/// One row per (n, l ≥ 0) with ζ ≤ zeta_max, sorted by (ζ, n). Velocities
/// and masses are computed from ζ alone, so ζ-degenerate rows are bitwise
/// equal.
std::vector<VzRow> vz_spectrum(double k, double w0, Species species, double mass,
                               int zeta_max);

/// CSV columns: n,l,zeta,vz_over_c,M_kg,M_c2_over_E (17 significant digits).
void write_vz_spectrum_csv(const std::vector<VzRow>& rows, const std::string& path);

} // namespace twistbeam
