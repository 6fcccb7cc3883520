#pragma once

/**
 * Complex scalar fields sampled on transverse grids.
 *
 * Two grid kinds:
 *   cartesian        — nx × ny uniform nodes, x(i) = (i − nx/2)·dx, FFT-ready;
 *                      integration weight dx·dy per node.
 *   polar_quadrature — Gauss-Laguerre radii under the substitution
 *                      u = 2r²/w², uniform azimuthal trapezoid nodes;
 *                      the rule is exact for e^{−u}·poly(u) radial integrands,
 *                      so Laguerre-Gauss moments integrate exactly.
 *
 * Storage is row-major: cartesian values[iy·nx + ix] (x fastest),
 * polar values[ir·n_azimuthal + iphi] (azimuth fastest).
 *
 * On-disk format: raw little-endian float64 (re, im) pairs in storage order,
 * plus a JSON sidecar with the geometry, plane, wavenumber, phase convention
 * and (optionally) the generating mode.
 */

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "twistbeam/beamcore.hpp"

namespace twistbeam {

enum class GridKind { cartesian, polar_quadrature };

/// Whether values hold the envelope Ψ or the full field exp(ikz)·Ψ. The two
/// are easy to confuse and produce wrong local-velocity maps, so the choice
/// travels with the data.
enum class PhaseConvention { envelope, full };

const char* to_string(GridKind k);
const char* to_string(PhaseConvention c);

struct GridGeometry {
    GridKind kind = GridKind::cartesian;
    int nx = 0;                 ///< cartesian nodes per row / polar: radial count
    int ny = 0;                 ///< cartesian rows / polar: azimuthal count
    double dx = 0.0, dy = 0.0;  ///< cartesian spacing (m)

    std::vector<double> r_nodes;    ///< polar radii (m)
    std::vector<double> r_weights;  ///< polar: ∫f(r)·r dr ≈ Σ Wᵢ f(rᵢ)
    double u_scale = 0.0;           ///< w(z) used in the u = 2r²/w² substitution

    static GridGeometry cartesian(int nx, int ny, double extent_x, double extent_y);

    /// Polar quadrature grid adapted to mode at plane z.
    static GridGeometry polar(const ModeSpec& mode, double z,
                              int n_radial = 64, int n_azimuthal = 64);

    [[nodiscard]] std::size_t node_count() const {
        return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
    }
    [[nodiscard]] double x(int ix) const { return (ix - nx / 2) * dx; }
    [[nodiscard]] double y(int iy) const { return (iy - ny / 2) * dy; }
    [[nodiscard]] double extent_x() const { return nx * dx; }
    [[nodiscard]] double extent_y() const { return ny * dy; }
    [[nodiscard]] double azimuth(int iphi) const {
        return 2.0 * constants::pi * iphi / ny;
    }
    /// Azimuthal trapezoid weight (polar grids).
    [[nodiscard]] double azimuth_weight() const { return 2.0 * constants::pi / ny; }
};

/// Complex scalar field on a grid at a fixed longitudinal plane.
struct FieldGrid {
    GridGeometry geometry;
    double z = 0.0;   ///< plane (m)
    double k = 0.0;   ///< wavenumber (rad/m)
    PhaseConvention convention = PhaseConvention::envelope;
    std::vector<std::complex<double>> values;
    bool has_mode = false;
    int mode_n = 0, mode_l = 0;
    Species mode_species = Species::photon;
    double mode_w0 = 0.0, mode_m = 0.0;

    void attach_mode(const ModeSpec& mode);
    [[nodiscard]] ModeSpec mode() const;

    /// Write stem.bin (raw values) and stem.json (sidecar).
    void save(const std::string& stem) const;
    static FieldGrid load(const std::string& stem);

    /// Plotting export: x,y,re,im,abs,phase rows (polar nodes are emitted at
    /// their cartesian positions).
    void export_csv(const std::string& path) const;
};

} // namespace twistbeam
