#include "twistbeam/lgfield.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "twistbeam/errors.hpp"
#include "twistbeam/fft.hpp"
#include "twistbeam/numeric.hpp"
#include "twistbeam/parallel.hpp"

namespace twistbeam {

ModeEvaluator::ModeEvaluator(const ModeSpec& mode, double z)
    : mode_(mode), z_(z), geo_(beam_geometry(z, mode)),
      cnl_(norm_const(mode.n, mode.l)), al_(std::abs(mode.l)) {}

double ModeEvaluator::amplitude(double r) const {
    const double w = geo_.w;
    const double u = 2.0 * r * r / (w * w);
    double a = cnl_ / w * std::exp(-0.5 * u) * laguerre(mode_.n, al_, u);
    if (al_ > 0) a *= std::pow(std::numbers::sqrt2 * r / w, al_);
    return a;
}

double ModeEvaluator::phase(double r, double phi) const {
    return mode_.l * phi + 0.5 * mode_.k * r * r * geo_.curvature -
           mode_.zeta() * geo_.gouy;
}

AmplitudePhase ModeEvaluator::eval(double r, double phi) const {
    AmplitudePhase out;
    if (r == 0.0 && mode_.l != 0) return out;  // vortex core: A = 0, Φ = 0
    double a = amplitude(r);
    double ph = phase(r, phi);
    if (a < 0.0) {  // Laguerre sign belongs to the phase, A stays >= 0
        a = -a;
        ph += constants::pi;
    }
    out.amplitude = a;
    out.phase = ph;
    out.value = std::polar(a, ph);
    return out;
}

double ModeEvaluator::damplitude_dr(double r) const {
    const double w = geo_.w;
    const double s = std::numbers::sqrt2 * r / w;
    const double u = s * s;
    const double lag = laguerre(mode_.n, al_, u);
    const double dlag = laguerre_derivative(mode_.n, al_, u);
    const double envelope = cnl_ / w * std::exp(-0.5 * u);
    // d/dr of s^m L(u) e^{-u/2}; the m s^{m-1} term only exists for m > 0.
    double d = (4.0 * r / (w * w)) * (dlag - 0.5 * lag);
    if (al_ > 0) {
        const double sm1 = std::pow(s, al_ - 1);
        return envelope * (std::numbers::sqrt2 / w * al_ * sm1 * lag + sm1 * s * d);
    }
    return envelope * d;
}

double ModeEvaluator::dphase_dz(double r) const {
    const double w2 = geo_.w * geo_.w;
    const double zr2 = geo_.zR * geo_.zR;
    const double z2 = z_ * z_;
    const double radial = (r * r) / (mode_.w0 * mode_.w0) * (zr2 - z2) / (zr2 + z2);
    return 2.0 / (mode_.k * w2) * (radial - mode_.zeta());
}

double ModeEvaluator::amp_laplacian_over_amp(double r) const {
    const double curvature_term = dphase_dr(r);
    double azimuthal = 0.0;
    if (al_ > 0) {
        if (r == 0.0) return std::numeric_limits<double>::infinity();
        azimuthal = static_cast<double>(mode_.l) / r;
    }
    return curvature_term * curvature_term + azimuthal * azimuthal +
           2.0 * mode_.k * dphase_dz(r);
}

AmplitudePhase eval_mode(const ModeSpec& mode, double r, double phi, double z) {
    if (r < 0.0) throw ValidationError("eval_mode: radius must be >= 0");
    return ModeEvaluator(mode, z).eval(r, phi);
}

FieldGrid sample_grid(const ModeSpec& mode, const GridGeometry& geometry, double z,
                      PhaseConvention convention) {
    const ModeEvaluator ev(mode, z);
    FieldGrid field;
    field.geometry = geometry;
    field.z = z;
    field.convention = convention;
    field.attach_mode(mode);
    field.values.resize(geometry.node_count());

    const std::complex<double> carrier =
        convention == PhaseConvention::full ? std::polar(1.0, mode.k * z)
                                            : std::complex<double>(1.0, 0.0);

    if (geometry.kind == GridKind::cartesian) {
        if (geometry.nx > 1 || geometry.ny > 1) {
            const double needed = 4.0 * ev.geometry().w;
            if (geometry.extent_x() < needed || geometry.extent_y() < needed)
                throw ValidationError("sample_grid: grid extent below 4·w(z), field would alias");
        }
        parallel_for(static_cast<std::size_t>(geometry.ny), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t iy = lo; iy < hi; ++iy) {
                const double y = geometry.y(static_cast<int>(iy));
                for (int ix = 0; ix < geometry.nx; ++ix) {
                    const double x = geometry.x(ix);
                    const auto ap = ev.eval(std::hypot(x, y), std::atan2(y, x));
                    field.values[iy * geometry.nx + ix] = ap.value * carrier;
                }
            }
        });
    } else {
        parallel_for(static_cast<std::size_t>(geometry.nx), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t ir = lo; ir < hi; ++ir) {
                const double r = geometry.r_nodes[ir];
                for (int ip = 0; ip < geometry.ny; ++ip) {
                    const auto ap = ev.eval(r, geometry.azimuth(ip));
                    field.values[ir * geometry.ny + ip] = ap.value * carrier;
                }
            }
        });
    }
    return field;
}

namespace {

void require_matching(const GridGeometry& a, const GridGeometry& b) {
    const bool same = a.kind == b.kind && a.nx == b.nx && a.ny == b.ny && a.dx == b.dx &&
                      a.dy == b.dy && a.r_nodes == b.r_nodes;
    if (!same) throw ValidationError("field grids have different geometries");
}

} // namespace

double norm(const FieldGrid& field) {
    if (field.values.size() != field.geometry.node_count())
        throw ValidationError("norm: value count does not match geometry");
    KahanSum sum;
    const auto& g = field.geometry;
    if (g.kind == GridKind::cartesian) {
        for (const auto& v : field.values) sum.add(std::norm(v));
        return sum.value() * g.dx * g.dy;
    }
    for (int ir = 0; ir < g.nx; ++ir) {
        const double wr = g.r_weights[ir] * g.azimuth_weight();
        for (int ip = 0; ip < g.ny; ++ip)
            sum.add(wr * std::norm(field.values[static_cast<std::size_t>(ir) * g.ny + ip]));
    }
    return sum.value();
}

std::complex<double> overlap(const FieldGrid& a, const FieldGrid& b) {
    require_matching(a.geometry, b.geometry);
    KahanSumComplex sum;
    const auto& g = a.geometry;
    if (g.kind == GridKind::cartesian) {
        for (std::size_t i = 0; i < a.values.size(); ++i)
            sum.add(std::conj(a.values[i]) * b.values[i]);
        return sum.value() * (g.dx * g.dy);
    }
    for (int ir = 0; ir < g.nx; ++ir) {
        const double wr = g.r_weights[ir] * g.azimuth_weight();
        for (int ip = 0; ip < g.ny; ++ip) {
            const std::size_t i = static_cast<std::size_t>(ir) * g.ny + ip;
            sum.add(wr * std::conj(a.values[i]) * b.values[i]);
        }
    }
    return sum.value();
}

double dphi_dz_analytic(const ModeSpec& mode, double r, double z) {
    return ModeEvaluator(mode, z).dphase_dz(r);
}

double dphi_dz_central_diff(const ModeSpec& mode, double r, double z, double h) {
    if (!(h > 0.0)) throw ValidationError("dphi_dz_central_diff: step must be > 0");
    const double zR = mode.rayleigh_length();
    const double zr2 = zR * zR;
    const double dplus = (z + h) * (z + h) + zr2;
    const double dminus = (z - h) * (z - h) + zr2;
    // 1/R(z+h) − 1/R(z−h) = 2h(zR² − z² + h²)/(D₊D₋), exact rearrangement.
    const double dcurv = 2.0 * h * (zr2 - z * z + h * h) / (dplus * dminus);
    // arctan subtraction identity keeps the Gouy difference small and exact.
    const double dgouy = std::atan(2.0 * h * zR / (zr2 + z * z - h * h));
    return (0.5 * mode.k * r * r * dcurv - mode.zeta() * dgouy) / (2.0 * h);
}

double paraxial_residual(const FieldGrid& minus, const FieldGrid& center,
                         const FieldGrid& plus) {
    require_matching(minus.geometry, center.geometry);
    require_matching(center.geometry, plus.geometry);
    if (center.geometry.kind != GridKind::cartesian)
        throw ValidationError("paraxial_residual: cartesian geometry required");
    const double two_h = plus.z - minus.z;
    if (!(two_h > 0.0)) throw ValidationError("paraxial_residual: planes must be ordered in z");

    const auto& g = center.geometry;
    const double k = center.k;

    std::vector<std::complex<double>> lap(center.values);
    Fft2D fft(g.ny, g.nx);
    fft.forward(lap.data());
    for (int iy = 0; iy < g.ny; ++iy) {
        const double qy = fft_frequency(iy, g.ny, g.dy);
        for (int ix = 0; ix < g.nx; ++ix) {
            const double qx = fft_frequency(ix, g.nx, g.dx);
            lap[static_cast<std::size_t>(iy) * g.nx + ix] *= -(qx * qx + qy * qy);
        }
    }
    fft.inverse(lap.data());

    KahanSum num2, lap2, dz2;
    const std::complex<double> two_ik(0.0, 2.0 * k);
    for (std::size_t i = 0; i < lap.size(); ++i) {
        const std::complex<double> dpsi_dz = (plus.values[i] - minus.values[i]) / two_h;
        num2.add(std::norm(lap[i] + two_ik * dpsi_dz));
        lap2.add(std::norm(lap[i]));
        dz2.add(std::norm(two_ik * dpsi_dz));
    }
    const double denom = std::sqrt(std::fmax(lap2.value(), dz2.value()));
    return denom == 0.0 ? 0.0 : std::sqrt(num2.value()) / denom;
}

double paraxial_residual(const ModeSpec& mode, const GridGeometry& geometry, double z,
                         double step_fraction) {
    if (geometry.kind != GridKind::cartesian)
        throw ValidationError("paraxial_residual: cartesian geometry required");
    if (geometry.nx < 64 || geometry.ny < 64)
        throw ValidationError("paraxial_residual: grid under-resolved (need >= 64 nodes per side)");
    const double w = beam_geometry(z, mode).w;
    if (geometry.extent_x() < 6.0 * w || geometry.extent_y() < 6.0 * w)
        throw ValidationError("paraxial_residual: grid under-resolved (extent below 6·w(z))");

    const double h = step_fraction * mode.rayleigh_length();
    const FieldGrid fm = sample_grid(mode, geometry, z - h);
    const FieldGrid fc = sample_grid(mode, geometry, z);
    const FieldGrid fp = sample_grid(mode, geometry, z + h);
    return paraxial_residual(fm, fc, fp);
}

} // namespace twistbeam
