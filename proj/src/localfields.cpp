#include "twistbeam/localfields.hpp"

#include <Eigen/Core>
#include <cmath>
#include <cstdio>
#include <limits>

#include "twistbeam/errors.hpp"
#include "twistbeam/lgfield.hpp"
#include "twistbeam/numeric.hpp"
#include "twistbeam/parallel.hpp"

namespace twistbeam {

namespace {

using constants::c_light;

constexpr double kAmplitudeMaskFraction = 1e-6;

struct NodeGeometry {
    double r;
    double phi;
};

VelocityMap empty_map(const GridGeometry& geometry, double z, double k) {
    if (geometry.kind != GridKind::cartesian)
        throw ValidationError("velocity maps require a cartesian grid");
    VelocityMap map;
    map.geometry = geometry;
    map.z = z;
    map.k = k;
    map.v.assign(geometry.node_count(), std::numeric_limits<double>::quiet_NaN());
    map.mask.assign(geometry.node_count(), 0);
    return map;
}

NodeGeometry node_polar(const GridGeometry& g, std::size_t i) {
    const int ix = static_cast<int>(i % g.nx);
    const int iy = static_cast<int>(i / g.nx);
    const double x = g.x(ix);
    const double y = g.y(iy);
    return {std::hypot(x, y), std::atan2(y, x)};
}

/// Amplitude mask: below threshold·max(A), or the vortex core.
std::vector<std::uint8_t> amplitude_mask(const ModeEvaluator& ev, const GridGeometry& g,
                                         std::vector<double>* amplitudes_out) {
    std::vector<double> amp(g.node_count());
    parallel_for(g.node_count(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) amp[i] = ev.amplitude(node_polar(g, i).r);
    });
    double amax = 0.0;
    for (double a : amp) amax = std::fmax(amax, std::fabs(a));
    const double threshold = kAmplitudeMaskFraction * amax;

    std::vector<std::uint8_t> mask(g.node_count(), 1);
    for (std::size_t i = 0; i < mask.size(); ++i) {
        const auto node = node_polar(g, i);
        if (std::fabs(amp[i]) < threshold || (node.r == 0.0 && ev.mode().l != 0)) mask[i] = 0;
    }
    if (amplitudes_out) *amplitudes_out = std::move(amp);
    return mask;
}

/// (∂_r, r⁻¹∂_φ, ∂_z) of the full phase kz + Φ. The azimuthal component
/// diverges at the core for l ≠ 0; callers mask that node.
Eigen::Vector3d full_phase_gradient(const ModeEvaluator& ev, double r) {
    const int l = ev.mode().l;
    double azimuthal = 0.0;
    if (l != 0)
        azimuthal = r == 0.0 ? std::numeric_limits<double>::infinity()
                             : static_cast<double>(l) / r;
    return {ev.dphase_dr(r), azimuthal, ev.mode().k + ev.dphase_dz(r)};
}

} // namespace

VelocityMap phase_velocity_gradient(const ModeSpec& mode, const GridGeometry& geometry,
                                    double z) {
    VelocityMap map = empty_map(geometry, z, mode.k);
    const ModeEvaluator ev(mode, z);
    map.mask = amplitude_mask(ev, geometry, nullptr);

    const double omega = c_light * mode.k;
    parallel_for(geometry.node_count(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            if (!map.mask[i]) continue;
            const auto node = node_polar(geometry, i);
            map.v[i] = omega / full_phase_gradient(ev, node.r).norm();
        }
    });
    return map;
}

VelocityMap phase_velocity_chen(const ModeSpec& mode, const GridGeometry& geometry,
                                double z) {
    VelocityMap map = empty_map(geometry, z, mode.k);
    const ModeEvaluator ev(mode, z);
    map.mask = amplitude_mask(ev, geometry, nullptr);

    const double k2 = mode.k * mode.k;
    parallel_for(geometry.node_count(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            if (!map.mask[i]) continue;
            const auto node = node_polar(geometry, i);
            const double bracket = 1.0 + ev.amp_laplacian_over_amp(node.r) / k2;
            if (!(bracket > 0.0)) {
                map.mask[i] = 0;  // evanescent-like region, LPV undefined
                continue;
            }
            map.v[i] = c_light / std::sqrt(bracket);
        }
    });
    return map;
}

VelocityMap group_velocity_map(const ModeSpec& mode, const GridGeometry& geometry,
                               double z) {
    VelocityMap map = empty_map(geometry, z, mode.k);
    const ModeEvaluator ev(mode, z);
    map.mask = amplitude_mask(ev, geometry, nullptr);

    // ω varied at fixed waist and mode numbers; 2^-20 keeps k± representable
    // without amplifying the difference noise.
    const double rel = std::ldexp(1.0, -20);
    const ModeSpec mode_plus(mode.n, mode.l, mode.k * (1.0 + rel), mode.w0, mode.species,
                             mode.m);
    const ModeSpec mode_minus(mode.n, mode.l, mode.k * (1.0 - rel), mode.w0, mode.species,
                              mode.m);
    const ModeEvaluator ev_plus(mode_plus, z);
    const ModeEvaluator ev_minus(mode_minus, z);
    const double dk = mode_plus.k - mode_minus.k;

    parallel_for(geometry.node_count(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            if (!map.mask[i]) continue;
            const auto node = node_polar(geometry, i);
            const Eigen::Vector3d diff =
                full_phase_gradient(ev_plus, node.r) - full_phase_gradient(ev_minus, node.r);
            map.v[i] = c_light * dk / diff.norm();
        }
    });
    return map;
}

VelocityMap longitudinal_velocity_map(const ModeSpec& mode, const GridGeometry& geometry,
                                      double z) {
    VelocityMap map = empty_map(geometry, z, mode.k);
    const ModeEvaluator ev(mode, z);
    std::fill(map.mask.begin(), map.mask.end(), std::uint8_t{1});
    parallel_for(geometry.node_count(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const auto node = node_polar(geometry, i);
            map.v[i] = c_light * (1.0 + ev.dphase_dz(node.r) / mode.k);
        }
    });
    return map;
}

VelocityMap plane_wave_phase_velocity(const GridGeometry& geometry, double k, double z) {
    VelocityMap map = empty_map(geometry, z, k);
    const double omega = c_light * k;
    for (std::size_t i = 0; i < map.v.size(); ++i) {
        map.mask[i] = 1;
        map.v[i] = omega / Eigen::Vector3d(0.0, 0.0, k).norm();
    }
    return map;
}

VelocityMap plane_wave_chen(const GridGeometry& geometry, double k, double z) {
    VelocityMap map = empty_map(geometry, z, k);
    for (std::size_t i = 0; i < map.v.size(); ++i) {
        map.mask[i] = 1;
        map.v[i] = c_light / std::sqrt(1.0 + 0.0 / (k * k));
    }
    return map;
}

VelocityMap plane_wave_group_velocity(const GridGeometry& geometry, double k, double z) {
    VelocityMap map = empty_map(geometry, z, k);
    const double rel = std::ldexp(1.0, -20);
    const double k_plus = k * (1.0 + rel);
    const double k_minus = k * (1.0 - rel);
    const Eigen::Vector3d diff =
        Eigen::Vector3d(0.0, 0.0, k_plus) - Eigen::Vector3d(0.0, 0.0, k_minus);
    const double v = c_light * (k_plus - k_minus) / diff.norm();
    for (std::size_t i = 0; i < map.v.size(); ++i) {
        map.mask[i] = 1;
        map.v[i] = v;
    }
    return map;
}

RegionReport classify_regions(const VelocityMap& map) {
    RegionReport report;
    report.subluminal.assign(map.v.size(), 0);
    report.superluminal.assign(map.v.size(), 0);
    for (std::size_t i = 0; i < map.v.size(); ++i) {
        if (!map.mask[i]) continue;
        if (map.v[i] < c_light) {
            report.subluminal[i] = 1;
            ++report.subluminal_count;
        } else if (map.v[i] > c_light) {
            report.superluminal[i] = 1;
            ++report.superluminal_count;
        }
    }

    // Boundary estimate: first sign change of v − c walking outward along +x.
    report.boundary_radius = std::numeric_limits<double>::quiet_NaN();
    const auto& g = map.geometry;
    const int iy = g.ny / 2;
    for (int ix = g.nx / 2; ix + 1 < g.nx; ++ix) {
        if (!map.valid(ix, iy) || !map.valid(ix + 1, iy)) continue;
        const double a = map.at(ix, iy) - c_light;
        const double b = map.at(ix + 1, iy) - c_light;
        if (a == 0.0 || a * b < 0.0) {
            report.boundary_radius = 0.5 * (g.x(ix) + g.x(ix + 1));
            break;
        }
    }
    return report;
}

double weighted_longitudinal_deficit(const ModeSpec& mode, double z, int n_radial) {
    const GridGeometry g = GridGeometry::polar(mode, z, n_radial, 4);
    const ModeEvaluator ev(mode, z);
    KahanSum sum;
    for (int i = 0; i < n_radial; ++i) {
        const double r = g.r_nodes[i];
        const double a = ev.amplitude(r);
        sum.add(g.r_weights[i] * a * a * (-ev.dphase_dz(r) / mode.k));
    }
    return 2.0 * constants::pi * c_light * sum.value();
}

void export_velocity_csv(const VelocityMap& vp, const VelocityMap& vg,
                         const std::string& path) {
    if (vp.geometry.nx != vg.geometry.nx || vp.geometry.ny != vg.geometry.ny)
        throw ValidationError("export_velocity_csv: map geometries differ");
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw ValidationError("export_velocity_csv: cannot open " + path);
    std::fprintf(fp, "x,y,vp_over_c,vg_over_c,mask\n");
    const auto& g = vp.geometry;
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            const std::size_t i = static_cast<std::size_t>(iy) * g.nx + ix;
            const int ok = vp.mask[i] && vg.mask[i] ? 1 : 0;
            std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g,%d\n", g.x(ix), g.y(iy),
                         vp.v[i] / c_light, vg.v[i] / c_light, ok);
        }
    std::fclose(fp);
}

} // namespace twistbeam
