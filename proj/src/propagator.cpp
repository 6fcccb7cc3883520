#include "twistbeam/propagator.hpp"

#include <cfloat>
#include <cmath>

#include "twistbeam/errors.hpp"
#include "twistbeam/fft.hpp"
#include "twistbeam/lgfield.hpp"
#include "twistbeam/numeric.hpp"

namespace twistbeam {

namespace {
using constants::c_light;
} // namespace

PropagationPlan::PropagationPlan(const GridGeometry& geometry, double k, double dz,
                                 const AbsorberSpec& absorber)
    : geometry_(geometry), k_(k), dz_(dz) {
    if (geometry.kind != GridKind::cartesian)
        throw ValidationError("PropagationPlan: cartesian geometry required");
    if (!(k > 0.0)) throw ValidationError("PropagationPlan: k must be > 0");
    if (!(dz > 0.0)) throw ValidationError("PropagationPlan: dz must be > 0");

    qx_.resize(geometry.nx);
    qy_.resize(geometry.ny);
    for (int i = 0; i < geometry.nx; ++i) qx_[i] = fft_frequency(i, geometry.nx, geometry.dx);
    for (int i = 0; i < geometry.ny; ++i) qy_[i] = fft_frequency(i, geometry.ny, geometry.dy);

    if (absorber.width_fraction > 0.0) {
        if (absorber.width_fraction >= 0.5)
            throw ValidationError("PropagationPlan: absorber width fraction must be < 0.5");
        absorber_.resize(geometry.node_count());
        auto ramp = [&](double coord, double half_extent) {
            const double edge = half_extent * (1.0 - 2.0 * absorber.width_fraction);
            const double d = std::fabs(coord) - edge;
            if (d <= 0.0) return 1.0;
            const double x = d / (half_extent - edge);
            const double cosine = std::cos(0.5 * constants::pi * std::fmin(x, 1.0));
            return std::pow(cosine * cosine, absorber.strength);
        };
        for (int iy = 0; iy < geometry.ny; ++iy)
            for (int ix = 0; ix < geometry.nx; ++ix)
                absorber_[static_cast<std::size_t>(iy) * geometry.nx + ix] =
                    ramp(geometry.x(ix), 0.5 * geometry.extent_x()) *
                    ramp(geometry.y(iy), 0.5 * geometry.extent_y());
    }
}

double PropagationPlan::nyquist() const {
    return constants::pi / std::fmax(geometry_.dx, geometry_.dy);
}

void PropagationPlan::validate_for(const ModeSpec& mode, double z_max) const {
    const double w = beam_geometry(z_max, mode).w;
    if (geometry_.extent_x() < 8.0 * w || geometry_.extent_y() < 8.0 * w)
        throw ValidationError("PropagationPlan: extent below 8·w(z_max)");
    if (dz_ > mode.rayleigh_length() / 100.0)
        throw ValidationError("PropagationPlan: dz above zR/100");
}

namespace {

void require_plan_grid(const FieldGrid& field, const PropagationPlan& plan) {
    const auto& a = field.geometry;
    const auto& b = plan.geometry();
    if (a.kind != GridKind::cartesian || a.nx != b.nx || a.ny != b.ny || a.dx != b.dx ||
        a.dy != b.dy)
        throw ValidationError("propagate: field grid does not match the plan");
}

double spectral_tail_fraction(const std::vector<std::complex<double>>& spectrum,
                              const PropagationPlan& plan) {
    const auto& g = plan.geometry();
    const double cutoff = 0.8 * plan.nyquist();
    const double cutoff2 = cutoff * cutoff;
    KahanSum total, tail;
    for (int iy = 0; iy < g.ny; ++iy) {
        const double qy2 = plan.qy()[iy] * plan.qy()[iy];
        for (int ix = 0; ix < g.nx; ++ix) {
            const double q2 = plan.qx()[ix] * plan.qx()[ix] + qy2;
            const double power = std::norm(spectrum[static_cast<std::size_t>(iy) * g.nx + ix]);
            total.add(power);
            if (q2 > cutoff2) tail.add(power);
        }
    }
    return total.value() == 0.0 ? 0.0 : tail.value() / total.value();
}

/// One exact spectral advance of an already-transformed spectrum.
void spectral_step(std::vector<std::complex<double>>& spectrum,
                   const PropagationPlan& plan, double dz) {
    const auto& g = plan.geometry();
    const double scale = -0.5 * dz / plan.k();
    for (int iy = 0; iy < g.ny; ++iy) {
        const double qy2 = plan.qy()[iy] * plan.qy()[iy];
        for (int ix = 0; ix < g.nx; ++ix) {
            const double q2 = plan.qx()[ix] * plan.qx()[ix] + qy2;
            spectrum[static_cast<std::size_t>(iy) * g.nx + ix] *= std::polar(1.0, scale * q2);
        }
    }
}

} // namespace

FieldGrid propagate(const FieldGrid& field, const PropagationPlan& plan, double z_target) {
    require_plan_grid(field, plan);
    if (field.convention != PhaseConvention::envelope)
        throw ValidationError("propagate: envelope convention required");
    if (field.values.size() != field.geometry.node_count())
        throw ValidationError("propagate: value count does not match geometry");

    FieldGrid out = field;
    const auto& g = plan.geometry();
    Fft2D fft(g.ny, g.nx);

    fft.forward(out.values.data());
    const double tail = spectral_tail_fraction(out.values, plan);
    if (tail > 1e-8)
        throw ConvergenceError("propagate: spectral power above 0.8·Nyquist exceeds 1e-8 "
                               "of the total; grid is aliased");

    const double total_dz = z_target - field.z;
    if (!plan.has_absorber()) {
        spectral_step(out.values, plan, total_dz);
        fft.inverse(out.values.data());
    } else {
        // Absorption acts in real space, so the advance proceeds in plan.dz
        // chunks with the mask applied after each.
        double remaining = std::fabs(total_dz);
        const double sign = total_dz < 0.0 ? -1.0 : 1.0;
        fft.inverse(out.values.data());
        while (remaining > 0.0) {
            const double step = std::fmin(remaining, plan.dz());
            fft.forward(out.values.data());
            spectral_step(out.values, plan, sign * step);
            fft.inverse(out.values.data());
            for (std::size_t i = 0; i < out.values.size(); ++i)
                out.values[i] *= plan.absorber()[i];
            remaining -= step;
        }
    }
    out.z = z_target;
    return out;
}

double fidelity(const FieldGrid& field, const ModeSpec& mode) {
    const FieldGrid reference = sample_grid(mode, field.geometry, field.z, field.convention);
    const std::complex<double> ov = overlap(field, reference);
    const double na = norm(field);
    const double nb = norm(reference);
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::norm(ov) / (na * nb);
}

double high_frequency_power_fraction(const FieldGrid& field, const PropagationPlan& plan) {
    require_plan_grid(field, plan);
    std::vector<std::complex<double>> spectrum(field.values);
    Fft2D fft(plan.geometry().ny, plan.geometry().nx);
    fft.forward(spectrum.data());
    return spectral_tail_fraction(spectrum, plan);
}

double measure_vz(const ModeSpec& mode, const PropagationPlan& plan, double dz_fraction) {
    if (!(dz_fraction > 0.0)) throw ValidationError("measure_vz: dz_fraction must be > 0");
    const double delta = dz_fraction * mode.rayleigh_length();
    plan.validate_for(mode, delta);

    const FieldGrid f0 = sample_grid(mode, plan.geometry(), 0.0, PhaseConvention::envelope);
    const FieldGrid fp = propagate(f0, plan, delta);
    const FieldGrid fm = propagate(f0, plan, -delta);

    KahanSum weighted_dphi, weight;
    for (std::size_t i = 0; i < f0.values.size(); ++i) {
        const double wgt = std::norm(f0.values[i]);
        if (wgt == 0.0) continue;
        weighted_dphi.add(wgt * std::arg(fp.values[i] * std::conj(fm.values[i])));
        weight.add(wgt);
    }
    if (weight.value() == 0.0) throw ConvergenceError("measure_vz: empty field");
    const double mean_dphi = weighted_dphi.value() / weight.value();
    if (std::fabs(mean_dphi) < 10.0 * DBL_EPSILON)
        throw ConvergenceError("measure_vz: phase difference below 10x double epsilon");

    const double dphi_dz = mean_dphi / (fp.z - fm.z);
    const double K = mode.compton_wavenumber();
    const double v0 = c_light * mode.k / std::sqrt(mode.k * mode.k + K * K);
    return v0 * (1.0 + dphi_dz / mode.k);
}

} // namespace twistbeam
