#pragma once

/**
 * localfields — local phase- and group-velocity maps of the full field
 * exp(ikz)·Ψ on a cartesian transverse grid.
 *
 *   v_p      = ω/|∇Φ|          (phase-front definition, ω = ck)
 *   v_p,chen = c·[1 + ∇⊥²A/(k²A)]^{−1/2}
 *   v_g      = |∂_ω ∇Φ|^{−1}   (ω varied at fixed w0, n, l; central
 *                               difference over k = ω/c)
 *
 * Gradients are evaluated analytically in cylindrical components
 * (∂_r, r⁻¹∂_φ, ∂_z). Nodes where the amplitude falls below 10⁻⁶ of the
 * grid maximum are masked, as is the vortex core; the Chen formula also
 * masks nodes where its bracket is non-positive.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "twistbeam/beamcore.hpp"
#include "twistbeam/grid.hpp"

namespace twistbeam {

struct VelocityMap {
    GridGeometry geometry;  ///< cartesian
    double z = 0.0;
    double k = 0.0;
    std::vector<double> v;        ///< m/s; meaningful where mask is set
    std::vector<std::uint8_t> mask;

    [[nodiscard]] double at(int ix, int iy) const {
        return v[static_cast<std::size_t>(iy) * geometry.nx + ix];
    }
    [[nodiscard]] bool valid(int ix, int iy) const {
        return mask[static_cast<std::size_t>(iy) * geometry.nx + ix] != 0;
    }
};

VelocityMap phase_velocity_gradient(const ModeSpec& mode, const GridGeometry& geometry,
                                    double z);
VelocityMap phase_velocity_chen(const ModeSpec& mode, const GridGeometry& geometry,
                                double z);
VelocityMap group_velocity_map(const ModeSpec& mode, const GridGeometry& geometry,
                               double z);

/// Local longitudinal-velocity contribution c·(1 + ∂Φ/∂z / k); its
/// intensity-weighted average is the global ⟨v_z⟩.
VelocityMap longitudinal_velocity_map(const ModeSpec& mode, const GridGeometry& geometry,
                                      double z);

/// The same kernels fed with Φ = kz, A = const; every entry must come out c.
VelocityMap plane_wave_phase_velocity(const GridGeometry& geometry, double k, double z);
VelocityMap plane_wave_chen(const GridGeometry& geometry, double k, double z);
VelocityMap plane_wave_group_velocity(const GridGeometry& geometry, double k, double z);

struct RegionReport {
    std::vector<std::uint8_t> subluminal;
    std::vector<std::uint8_t> superluminal;
    std::size_t subluminal_count = 0;
    std::size_t superluminal_count = 0;
    /// Radius of the first sign change of v − c along the +x axis from the
    /// grid center; NaN when no change occurs.
    double boundary_radius = 0.0;
};

RegionReport classify_regions(const VelocityMap& map);

/// ∫|Ψ|²·(−∂Φ/∂z / k)·c r dr dφ — the weighted local contributions must
/// reassemble the global deficit c·ζ/(k²w0²).
double weighted_longitudinal_deficit(const ModeSpec& mode, double z, int n_radial = 64);

/// CSV columns: x,y,vp_over_c,vg_over_c,mask. Masked nodes print nan and 0.
void export_velocity_csv(const VelocityMap& vp, const VelocityMap& vg,
                         const std::string& path);

} // namespace twistbeam
