#pragma once

/**
 * kinematics — the semiclassical centroid: a point particle carrying the
 * mode's ⟨p_z⟩, energy and an effective invariant mass that absorbs the
 * hidden transverse motion,
 *     photon   M = √(2ζ)·ħ/(c·w0),
 *     electron M = √(m² + 2ζħ²/(c²w0²)).
 *
 * A CentroidState is exactly on shell: E² − |p|²c² = M²c⁴ by construction
 * (E and M are the closed forms, p_z = √(E² − M²c⁴)/c). The expanded
 * momentum ħk(1 − ζ/(k²w0²)) agrees with p_z to second paraxial order and
 * is exposed separately as centroid_pz_linear().
 */

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>
#include <utility>

#include "twistbeam/beamcore.hpp"

namespace twistbeam {

/// Pure-boost velocity, |V| < c strictly.
struct BoostSpec {
    Eigen::Vector3d V = Eigen::Vector3d::Zero();  ///< m/s

    BoostSpec() = default;
    explicit BoostSpec(const Eigen::Vector3d& v);
};

/// Semiclassical particle record. Invariant: E > 0 and E² − |p|²c² = M²c⁴.
struct CentroidState {
    double E = 0.0;                               ///< J
    Eigen::Vector3d p = Eigen::Vector3d::Zero();  ///< kg·m/s
    double M = 0.0;                               ///< kg
    double L = 0.0;                               ///< intrinsic OAM ħl along z (J·s)
    Species species = Species::photon;

    /// Build from (E, p); M is derived from the mass shell.
    static CentroidState from_energy_momentum(double E, const Eigen::Vector3d& p, double L,
                                              Species species);

    [[nodiscard]] Eigen::Vector3d velocity() const {
        return p * (constants::c_light * constants::c_light / E);
    }
    [[nodiscard]] double vz() const { return velocity().z(); }
    /// E² − |p|²c² − M²c⁴, normalized by E² (shell-residual diagnostic).
    [[nodiscard]] double shell_residual() const;
};

/// Effective (kinematic) centroid mass for mode weight ζ; rest_mass = 0
/// gives the photon form.
double effective_mass(int zeta, double w0, double rest_mass);

CentroidState photon_centroid(const ModeSpec& mode);
CentroidState electron_centroid(const ModeSpec& mode);

/// First-order centroid momentum ħk(1 − ζ/(k²w0²)) (kg·m/s).
double centroid_pz_linear(const ModeSpec& mode);

/// Mass from the centroid velocity, both algebraic forms:
/// M₁ = (ħk/c)√(2(1 − v_z/c)) and M₂ = (ħk/c)√(1 − v_z²/c²). They agree to
/// relative ε/2 inside the paraxial domain.
std::pair<double, double> mass_from_velocity(double k, double vz);

/// Pure Lorentz boost of (E/c, p); the boosted frame sees the state moving
/// with +V when applied to a rest state. M is recomputed from the shell and
/// must match the input mass.
CentroidState boost(const CentroidState& state, const BoostSpec& V);

/// Boost to the rest frame. Returns the rest state and the boost that maps
/// it back onto the input; rejects M = 0 (a plane wave has no rest frame).
std::pair<CentroidState, BoostSpec> rest_frame(const CentroidState& state);

/// Orbital magnetic moment μ_L = e·ħl·c²/(2E) (J/T). Depends on l and E
/// only; the radial quantum number never enters.
double orbital_magnetic_moment(int l, double E);

void to_json(nlohmann::json& j, const CentroidState& s);
void from_json(const nlohmann::json& j, CentroidState& s);

} // namespace twistbeam
