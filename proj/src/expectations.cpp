#include "twistbeam/expectations.hpp"

#include <cmath>
#include <cstdio>

#include "twistbeam/errors.hpp"
#include "twistbeam/grid.hpp"
#include "twistbeam/kinematics.hpp"
#include "twistbeam/lgfield.hpp"
#include "twistbeam/numeric.hpp"

namespace twistbeam {

namespace {

using constants::c_light;
using constants::hbar;

struct NumericMoments {
    double r2 = 0.0;
    double dphi_dz = 0.0;
    double pperp2 = 0.0;
};

// Radial quadrature on the Gauss-Laguerre grid. The densities of a single
// mode are axisymmetric, so the uniform azimuthal trapezoid reduces exactly
// to a factor 2π.
NumericMoments numeric_moments(const ModeSpec& mode, double z, int n_radial, double h) {
    const GridGeometry g = GridGeometry::polar(mode, z, n_radial, 4);
    const ModeEvaluator ev(mode, z);
    const double l2 = static_cast<double>(mode.l) * mode.l;

    KahanSum r2, dphi, pperp;
    for (int i = 0; i < n_radial; ++i) {
        const double r = g.r_nodes[i];
        const double wgt = g.r_weights[i];
        const double a = ev.amplitude(r);
        const double a2 = a * a;
        const double da = ev.damplitude_dr(r);
        const double dphr = ev.dphase_dr(r);

        r2.add(wgt * a2 * r * r);
        dphi.add(wgt * a2 * dphi_dz_central_diff(mode, r, z, h));
        pperp.add(wgt * (da * da + a2 * dphr * dphr + l2 * a2 / (r * r)));
    }
    const double two_pi = 2.0 * constants::pi;
    return {two_pi * r2.value(), two_pi * dphi.value(), two_pi * pperp.value()};
}

MomentValue make_value(double analytic, double numeric) {
    return {analytic, numeric, std::fabs(analytic - numeric)};
}

} // namespace

MomentReport moments(const ModeSpec& mode, double z, const MomentOptions& opts) {
    if (opts.n_radial < 4) throw ValidationError("moments: need at least 4 radial nodes");
    const double h = opts.fd_step_fraction * mode.rayleigh_length();
    const NumericMoments num = numeric_moments(mode, z, opts.n_radial, h);

    if (opts.convergence_check) {
        const NumericMoments ref = numeric_moments(mode, z, 2 * opts.n_radial, h);
        const double worst = std::fmax(relative_diff(num.r2, ref.r2),
                                       std::fmax(relative_diff(num.dphi_dz, ref.dphi_dz),
                                                 relative_diff(num.pperp2, ref.pperp2)));
        if (worst > 1e-8)
            throw ConvergenceError("moments: quadrature did not converge (doubling nodes moved "
                                   "a moment by more than 1e-8 relative)");
    }

    const double zeta = mode.zeta();
    const double w = beam_geometry(z, mode).w;
    const double w02 = mode.w0 * mode.w0;

    MomentReport report;
    report.r2 = make_value(0.5 * zeta * w * w, num.r2);
    report.dphi_dz = make_value(-zeta / (mode.k * w02), num.dphi_dz);
    report.pperp2 = make_value(2.0 * zeta / w02, num.pperp2);
    return report;
}

double amplitude_flux(const ModeSpec& mode, double z, const MomentOptions& opts) {
    const double h = opts.fd_step_fraction * mode.rayleigh_length();
    const GridGeometry g = GridGeometry::polar(mode, z, opts.n_radial, 4);
    const ModeEvaluator at(mode, z);
    const ModeEvaluator plus(mode, z + h);
    const ModeEvaluator minus(mode, z - h);

    KahanSum sum;
    for (int i = 0; i < opts.n_radial; ++i) {
        const double r = g.r_nodes[i];
        const double da_dz = (plus.amplitude(r) - minus.amplitude(r)) / (2.0 * h);
        sum.add(g.r_weights[i] * at.amplitude(r) * da_dz);
    }
    return 2.0 * constants::pi * sum.value();
}

double photon_vz(const ModeSpec& mode) {
    if (mode.species != Species::photon)
        throw ValidationError("photon_vz: mode species must be photon");
    return c_light * (1.0 - mode.paraxiality());
}

double electron_vz(const ModeSpec& mode) {
    if (mode.species != Species::electron)
        throw ValidationError("electron_vz: mode species must be electron");
    const double K = mode.compton_wavenumber();
    const double prefactor = c_light * mode.k / std::sqrt(mode.k * mode.k + K * K);
    return prefactor * (1.0 - mode.paraxiality());
}

double mode_vz(const ModeSpec& mode) {
    return mode.species == Species::photon ? photon_vz(mode) : electron_vz(mode);
}

double vz_unexpanded(const ModeSpec& mode) {
    const double K = mode.compton_wavenumber();
    const double v0 = c_light * mode.k / std::sqrt(mode.k * mode.k + K * K);
    return v0 * std::sqrt(1.0 - 2.0 * mode.paraxiality());
}

std::vector<VzRow> vz_spectrum(double k, double w0, Species species, double mass,
                               int zeta_max) {
    if (!(k > 0.0) || !(w0 > 0.0)) throw ValidationError("vz_spectrum: k and w0 must be > 0");
    if (zeta_max < 1) throw ValidationError("vz_spectrum: zeta_max must be >= 1");
    if (species == Species::photon) mass = 0.0;
    const double K = mass * c_light / hbar;
    const double v0 = species == Species::photon
                          ? c_light
                          : c_light * k / std::sqrt(k * k + K * K);
    const double E = species == Species::photon
                         ? hbar * c_light * k
                         : std::hypot(hbar * k * c_light, mass * c_light * c_light);

    std::vector<VzRow> rows;
    for (int zeta = 1; zeta <= zeta_max; ++zeta) {
        // All velocities/masses depend on (n, l) through ζ only.
        const double vz = v0 * (1.0 - zeta / (k * k * w0 * w0));
        const double m_eff = effective_mass(zeta, w0, mass);
        for (int n = 0; 2 * n <= zeta - 1; ++n) {
            VzRow row;
            row.n = n;
            row.l = zeta - 1 - 2 * n;
            row.zeta = zeta;
            row.vz = vz;
            row.mass = m_eff;
            row.mass_c2_over_E = m_eff * c_light * c_light / E;
            rows.push_back(row);
        }
    }
    return rows;
}

void write_vz_spectrum_csv(const std::vector<VzRow>& rows, const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw ValidationError("write_vz_spectrum_csv: cannot open " + path);
    std::fprintf(fp, "n,l,zeta,vz_over_c,M_kg,M_c2_over_E\n");
    for (const auto& r : rows)
        std::fprintf(fp, "%d,%d,%d,%.17g,%.17g,%.17g\n", r.n, r.l, r.zeta,
                     r.vz / c_light, r.mass, r.mass_c2_over_E);
    std::fclose(fp);
}

} // namespace twistbeam
