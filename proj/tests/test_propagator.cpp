#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "twistbeam/errors.hpp"
#include "twistbeam/expectations.hpp"
#include "twistbeam/fft.hpp"
#include "twistbeam/lgfield.hpp"
#include "twistbeam/numeric.hpp"
#include "twistbeam/propagator.hpp"

using namespace twistbeam;
using constants::c_light;

namespace {

const double kW0 = 1e-3;
const double kK = 100.0 / kW0;
const double kZR = 0.5 * kK * kW0 * kW0;

GridGeometry grid256() { return GridGeometry::cartesian(256, 256, 12.0 * kW0, 12.0 * kW0); }

PropagationPlan plan256() { return {grid256(), kK, kZR / 128.0}; }

} // namespace

TEST_CASE("plan validation") {
    const ModeSpec mode = ModeSpec::photon(0, 0, kK, kW0);
    const PropagationPlan plan = plan256();
    CHECK_NOTHROW(plan.validate_for(mode, kZR));
    // 12·w0 extent cannot hold 8·w(z) once w(z) > 1.5·w0
    CHECK_THROWS_AS(plan.validate_for(mode, 3.0 * kZR), ValidationError);
    const PropagationPlan coarse(grid256(), kK, kZR / 10.0);
    CHECK_THROWS_AS(coarse.validate_for(mode, kZR), ValidationError);
    CHECK_THROWS_AS(PropagationPlan(GridGeometry::polar(mode, 0.0, 16, 8), kK, 1.0),
                    ValidationError);
}

TEST_CASE("propagation to the same plane is the identity") {
    const ModeSpec mode = ModeSpec::photon(1, 2, kK, kW0);
    const FieldGrid f0 = sample_grid(mode, grid256(), 0.0);
    const FieldGrid same = propagate(f0, plan256(), 0.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < f0.values.size(); ++i)
        worst = std::fmax(worst, std::abs(same.values[i] - f0.values[i]));
    CHECK(worst <= 1e-13 / kW0);  // FFT round-trip noise only (values scale as 1/w0)
}

TEST_CASE("propagated fundamental mode matches the analytic field at zR") {
    const ModeSpec mode = ModeSpec::photon(0, 0, kK, kW0);
    const FieldGrid f0 = sample_grid(mode, grid256(), 0.0);
    const FieldGrid f1 = propagate(f0, plan256(), kZR);
    CHECK(fidelity(f1, mode) >= 1.0 - 1e-6);
    CHECK(std::fabs(norm(f1) - norm(f0)) < 1e-10);
}

TEST_CASE("higher mode over two Rayleigh lengths") {
    const double extent = 12.0 * std::sqrt(5.0) * kW0;
    const GridGeometry g = GridGeometry::cartesian(512, 512, extent, extent);
    const PropagationPlan plan(g, kK, kZR / 128.0);
    const ModeSpec mode = ModeSpec::photon(2, 3, kK, kW0);
    const FieldGrid f0 = sample_grid(mode, g, 0.0);
    const FieldGrid f2 = propagate(f0, plan, 2.0 * kZR);
    CHECK(fidelity(f2, mode) >= 1.0 - 1e-6);
    CHECK(std::fabs(norm(f2) - norm(f0)) < 1e-10);
}

TEST_CASE("propagation is linear") {
    const GridGeometry g = grid256();
    const PropagationPlan plan = plan256();
    const FieldGrid fa = sample_grid(ModeSpec::photon(0, 0, kK, kW0), g, 0.0);
    const FieldGrid fb = sample_grid(ModeSpec::photon(1, 2, kK, kW0), g, 0.0);
    const std::complex<double> alpha(0.6, -0.2), beta(0.3, 0.9);

    FieldGrid mix = fa;
    for (std::size_t i = 0; i < mix.values.size(); ++i)
        mix.values[i] = alpha * fa.values[i] + beta * fb.values[i];

    const FieldGrid left = propagate(mix, plan, kZR);
    const FieldGrid pa = propagate(fa, plan, kZR);
    const FieldGrid pb = propagate(fb, plan, kZR);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < left.values.size(); ++i) {
        worst = std::fmax(worst, std::abs(left.values[i] - (alpha * pa.values[i] +
                                                            beta * pb.values[i])));
        scale = std::fmax(scale, std::abs(left.values[i]));
    }
    CHECK(worst <= 1e-12 * scale);
}

TEST_CASE("spectral step is unitary per transverse frequency") {
    const GridGeometry g = grid256();
    const ModeSpec mode = ModeSpec::photon(1, -1, kK, kW0);
    const FieldGrid f0 = sample_grid(mode, g, 0.0);
    const FieldGrid f1 = propagate(f0, plan256(), 0.7 * kZR);

    std::vector<std::complex<double>> s0(f0.values), s1(f1.values);
    Fft2D fft(g.ny, g.nx);
    fft.forward(s0.data());
    fft.forward(s1.data());
    double scale = 0.0;
    for (const auto& v : s0) scale = std::fmax(scale, std::norm(v));
    for (std::size_t i = 0; i < s0.size(); ++i)
        CHECK(std::fabs(std::norm(s1[i]) - std::norm(s0[i])) <= 1e-12 * scale);
}

TEST_CASE("fidelity oracle") {
    const GridGeometry g = grid256();
    const ModeSpec mode = ModeSpec::photon(2, 1, kK, kW0);
    const FieldGrid exact = sample_grid(mode, g, 0.3 * kZR);
    CHECK(fidelity(exact, mode) >= 1.0 - 1e-12);
    // orthogonal mode
    CHECK(fidelity(exact, ModeSpec::photon(0, 3, kK, kW0)) < 1e-8);
}

TEST_CASE("envelope convention is required") {
    const ModeSpec mode = ModeSpec::photon(0, 0, kK, kW0);
    const FieldGrid full = sample_grid(mode, grid256(), 0.0, PhaseConvention::full);
    CHECK_THROWS_AS(propagate(full, plan256(), kZR), ValidationError);
}

TEST_CASE("aliasing guard rejects under-resolved spectra") {
    // 32 nodes over 12·w0 cannot hold an l = 5 ring at kw0 = 50
    const double w0 = 1e-3;
    const double k = 50.0 / w0;
    const GridGeometry g = GridGeometry::cartesian(32, 32, 12.0 * w0, 12.0 * w0);
    const PropagationPlan plan(g, k, 0.5 * k * w0 * w0 / 128.0);
    const FieldGrid f = sample_grid(ModeSpec::photon(0, 5, k, w0), g, 0.0);
    CHECK(high_frequency_power_fraction(f, plan) > 1e-8);
    CHECK_THROWS_AS(propagate(f, plan, 0.1), ConvergenceError);
}

TEST_CASE("absorbing boundary bleeds power out of an expanding beam") {
    const GridGeometry g = GridGeometry::cartesian(256, 256, 6.0 * kW0, 6.0 * kW0);
    const ModeSpec mode = ModeSpec::photon(0, 0, kK, kW0);
    const FieldGrid f0 = sample_grid(mode, g, 0.0);

    const PropagationPlan open(g, kK, kZR / 128.0);
    const PropagationPlan absorbing(g, kK, kZR / 128.0, {.width_fraction = 0.2});
    const double n_open = norm(propagate(f0, open, 2.0 * kZR));
    const double n_absorbed = norm(propagate(f0, absorbing, 2.0 * kZR));
    CHECK(n_absorbed < n_open - 1e-6);
}

TEST_CASE("propagation-based velocity measurement") {
    const PropagationPlan plan = plan256();

    // fundamental mode at kw0 = 100
    const double measured = measure_vz(ModeSpec::photon(0, 0, kK, kW0), plan);
    CHECK(std::fabs(measured / c_light - 0.9999) < 1e-7);

    // ζ-degenerate pair
    const double va = measure_vz(ModeSpec::photon(1, 1, kK, kW0), plan);
    const double vb = measure_vz(ModeSpec::photon(0, 3, kK, kW0), plan);
    CHECK(std::fabs(va - vb) < 1e-8 * c_light);

    // measured spectrum is linear in ζ with slope −c/(k²w0²)
    std::vector<double> zetas, speeds;
    for (int zeta = 1; zeta <= 6; ++zeta) {
        zetas.push_back(zeta);
        speeds.push_back(measure_vz(ModeSpec::photon(0, zeta - 1, kK, kW0), plan));
    }
    const LinearFit fit = linear_fit(zetas, speeds);
    CHECK(fit.rms_residual < 1e-8 * c_light);
    CHECK(fit.slope == doctest::Approx(-c_light / (kK * kK * kW0 * kW0)).epsilon(1e-6));

    // electron dispersion enters through the group-velocity prefactor
    const double K = constants::electron_mass * c_light / constants::hbar;
    const ModeSpec el = ModeSpec::electron(0, 0, kK, kW0);
    const double vel = measure_vz(el, plan);
    CHECK(std::fabs(vel - electron_vz(el)) < 1e-7 * c_light * kK / std::hypot(kK, K));
}

TEST_CASE("non-LG structured input propagates with the norm conserved") {
    // a Gaussian carrying a sinusoidal stripe pattern, not an eigenmode
    const GridGeometry g = grid256();
    FieldGrid f;
    f.geometry = g;
    f.z = 0.0;
    f.k = kK;
    f.values.resize(g.node_count());
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            const double x = g.x(ix), y = g.y(iy);
            const double gauss = std::exp(-(x * x + y * y) / (kW0 * kW0));
            f.values[static_cast<std::size_t>(iy) * g.nx + ix] =
                gauss * std::complex<double>(std::cos(3.0 * x / kW0),
                                             0.4 * std::sin(2.0 * y / kW0));
        }
    const double n0 = norm(f);
    const FieldGrid out = propagate(f, plan256(), 0.5 * kZR);
    CHECK(std::fabs(norm(out) - n0) < 1e-10 * n0);
    CHECK(out.z == 0.5 * kZR);
}

TEST_CASE("raw-grid round trip feeds back into propagation") {
    const GridGeometry g = grid256();
    const ModeSpec mode = ModeSpec::photon(1, 1, kK, kW0);
    const FieldGrid f0 = sample_grid(mode, g, 0.0);
    f0.save("/tmp/twistbeam_prop_io");
    const FieldGrid loaded = FieldGrid::load("/tmp/twistbeam_prop_io");
    const FieldGrid out = propagate(loaded, plan256(), kZR);
    CHECK(fidelity(out, mode) >= 1.0 - 1e-6);
}
