#pragma once

/**
 * lgfield — Laguerre-Gauss mode evaluation on points and grids.
 *
 * The envelope field is
 *     Ψ(r, φ, z) = A(r, z) · exp(iΦ(r, φ, z)),
 *     A = (C_nl/w) (√2 r/w)^{|l|} L_n^{|l|}(2r²/w²) exp(−r²/w²),
 *     Φ = lφ + k r²/(2R) − (2n+|l|+1)·arctan(z/zR),
 * normalized so ∫|Ψ|² r dr dφ = 1 at every plane. The full field carries an
 * extra exp(ikz); FieldGrid records which convention its values use.
 *
 * Phase comparisons are made modulo 2π via complex ratios, never by
 * unwrapping. At the vortex core (r = 0, l ≠ 0) the phase is undefined and
 * reported as 0 by convention.
 */

#include <complex>

#include "twistbeam/beamcore.hpp"
#include "twistbeam/grid.hpp"

namespace twistbeam {

/// Amplitude/phase split of the envelope at one point; value = A·exp(iΦ).
struct AmplitudePhase {
    double amplitude = 0.0;   ///< A ≥ 0
    double phase = 0.0;       ///< Φ (rad)
    std::complex<double> value;
};

/// Point evaluator with the plane-z geometry precomputed. All accessors are
/// const and safe to call concurrently.
class ModeEvaluator {
public:
    ModeEvaluator(const ModeSpec& mode, double z);

    [[nodiscard]] const ModeSpec& mode() const { return mode_; }
    [[nodiscard]] const BeamGeometry& geometry() const { return geo_; }
    [[nodiscard]] double z() const { return z_; }

    /// Signed radial profile (the Laguerre polynomial keeps its sign); this
    /// is the smooth branch used for derivatives. eval() folds a negative
    /// sign into the phase so the reported amplitude stays >= 0.
    [[nodiscard]] double amplitude(double r) const;
    [[nodiscard]] double phase(double r, double phi) const;
    [[nodiscard]] AmplitudePhase eval(double r, double phi) const;

    [[nodiscard]] double damplitude_dr(double r) const;
    /// ∂Φ/∂r = k·r/R(z).
    [[nodiscard]] double dphase_dr(double r) const { return mode_.k * r * geo_.curvature; }
    /// ∂Φ/∂z closed form: (2/(k w²))·[(r²/w0²)(zR²−z²)/(zR²+z²) − ζ].
    [[nodiscard]] double dphase_dz(double r) const;
    /// ∇⊥²A/A = (∂Φ/∂r)² + (l/r)² + 2k·∂Φ/∂z (exactness of the mode under
    /// the paraxial equation). Returns +inf at the vortex core.
    [[nodiscard]] double amp_laplacian_over_amp(double r) const;

private:
    ModeSpec mode_;
    double z_;
    BeamGeometry geo_;
    double cnl_;
    int al_;
};

AmplitudePhase eval_mode(const ModeSpec& mode, double r, double phi, double z);

/// Sample the mode on a grid. Cartesian grids must span at least 4·w(z) in
/// each direction (aliasing guard; 1×1 probe grids are exempt).
FieldGrid sample_grid(const ModeSpec& mode, const GridGeometry& geometry, double z,
                      PhaseConvention convention = PhaseConvention::envelope);

/// ∫|Ψ|² r dr dφ (or dx dy) by the grid's quadrature rule.
double norm(const FieldGrid& field);

/// ⟨a, b⟩ = ∫ a* b over the shared grid; geometries must match.
std::complex<double> overlap(const FieldGrid& a, const FieldGrid& b);

/// ∂Φ/∂z closed form (see ModeEvaluator::dphase_dz).
double dphi_dz_analytic(const ModeSpec& mode, double r, double z);

/// Central difference [Φ(z+h) − Φ(z−h)]/(2h) with the curvature and Gouy
/// differences rearranged algebraically so no cancellation occurs; accurate
/// to a few ulp plus the O(h²) truncation.
double dphi_dz_central_diff(const ModeSpec& mode, double r, double z, double h);

/// Relative L2 residual of (∇⊥² + 2ik ∂z)Ψ: ∂z by central difference of the
/// two outer planes, ∇⊥² spectrally on the center plane. The three planes
/// must share one cartesian geometry. Returns 0 when both operator terms
/// vanish identically.
double paraxial_residual(const FieldGrid& minus, const FieldGrid& center,
                         const FieldGrid& plus);

/// Residual of analytically sampled planes at z ± h, h = step_fraction·zR.
/// Rejects under-resolved grids (fewer than 64 nodes per side or extent
/// below 6·w(z)).
double paraxial_residual(const ModeSpec& mode, const GridGeometry& geometry, double z,
                         double step_fraction = 1e-5);

} // namespace twistbeam
