#include <doctest.h>

#include <utility>

#include <cmath>

#include "twistbeam/errors.hpp"
#include "twistbeam/expectations.hpp"

using namespace twistbeam;
using constants::c_light;
using constants::hbar;

namespace {
const double kW0 = 1e-3;
const double kK = 1e6;
}

TEST_CASE("moments: fundamental mode at the waist") {
    const ModeSpec mode = ModeSpec::photon(0, 0, kK, kW0);
    const MomentReport rep = moments(mode, 0.0);
    CHECK(rep.r2.analytic == doctest::Approx(0.5e-6).epsilon(1e-14));        // 0.5 mm²
    CHECK(rep.pperp2.analytic == doctest::Approx(2e6).epsilon(1e-14));       // 2 mm⁻²
    CHECK(rep.r2.abs_diff <= 1e-10 * rep.r2.analytic);
    CHECK(rep.pperp2.abs_diff <= 1e-10 * rep.pperp2.analytic);
    CHECK(rep.dphi_dz.abs_diff <= 1e-10 * std::fabs(rep.dphi_dz.analytic));
}

TEST_CASE("moments: closed forms across modes and planes") {
    const double zR = 0.5 * kK * kW0 * kW0;
    for (const auto& [n, l] : {std::pair{1, 3}, {0, -7}, {4, 0}, {10, 10}}) {
        const ModeSpec mode = ModeSpec::photon(n, l, kK, kW0);
        const double zeta = mode.zeta();
        for (double z : {0.0, 0.5 * zR, zR, 3.0 * zR}) {
            const MomentReport rep = moments(mode, z);
            const double w = beam_geometry(z, mode).w;
            CHECK(rep.r2.analytic == doctest::Approx(0.5 * zeta * w * w).epsilon(1e-14));
            CHECK(rep.dphi_dz.analytic ==
                  doctest::Approx(-zeta / (kK * kW0 * kW0)).epsilon(1e-14));
            CHECK(rep.pperp2.analytic ==
                  doctest::Approx(2.0 * zeta / (kW0 * kW0)).epsilon(1e-14));
            CHECK(rep.r2.abs_diff <= 1e-10 * rep.r2.analytic);
            CHECK(rep.dphi_dz.abs_diff <= 1e-10 * std::fabs(rep.dphi_dz.analytic));
            CHECK(rep.pperp2.abs_diff <= 1e-10 * rep.pperp2.analytic);
        }
    }
    // (1,3): ζ = 6 → ⟨p⊥²⟩ = 12/w0²
    CHECK(moments(ModeSpec::photon(1, 3, kK, kW0), 0.0).pperp2.analytic ==
          doctest::Approx(12.0 / (kW0 * kW0)).epsilon(1e-14));
}

TEST_CASE("numeric dphi/dz is z-independent") {
    const ModeSpec mode = ModeSpec::photon(2, 4, kK, kW0);
    const double zR = mode.rayleigh_length();
    const double at0 = moments(mode, 0.0).dphi_dz.numeric;
    const double at2 = moments(mode, 2.0 * zR).dphi_dz.numeric;
    CHECK(std::fabs(at0 - at2) <= 1e-9 * std::fabs(at0));
    // v_z reassembled from the numeric branch matches the closed form
    const double vz_numeric = c_light * (1.0 + at0 / kK);
    CHECK(std::fabs(vz_numeric - photon_vz(mode)) <= 1e-8 * c_light);
}

TEST_CASE("quadrature convergence guard") {
    // 6 radial nodes cannot integrate an n = 10 density exactly
    MomentOptions opts;
    opts.n_radial = 6;
    CHECK_THROWS_AS(moments(ModeSpec::photon(10, 4, kK, kW0), 0.0, opts), ConvergenceError);
}

TEST_CASE("amplitude flux vanishes") {
    const ModeSpec a = ModeSpec::photon(0, 0, kK, kW0);
    const ModeSpec b = ModeSpec::photon(2, 4, kK, kW0);
    const double zR = a.rayleigh_length();
    CHECK(amplitude_flux(a, 0.0) == 0.0);  // w is stationary at the waist, exactly
    CHECK(amplitude_flux(b, 0.0) == 0.0);
    CHECK(std::fabs(amplitude_flux(a, zR)) < 1e-8);
    CHECK(std::fabs(amplitude_flux(b, 2.0 * zR)) < 1e-8);
}

TEST_CASE("photon longitudinal velocity") {
    const double k = 100.0 / kW0;
    CHECK(photon_vz(ModeSpec::photon(0, 0, k, kW0)) / c_light ==
          doctest::Approx(0.9999).epsilon(1e-12));
    // plane-wave limit: kw0 = 1e9 drives the deficit to 1e-18
    CHECK(photon_vz(ModeSpec::photon(0, 0, k, 1e7 * kW0)) ==
          doctest::Approx(c_light).epsilon(1e-15));
    // ζ-degeneracy is bitwise
    CHECK(photon_vz(ModeSpec::photon(1, 0, k, kW0)) ==
          photon_vz(ModeSpec::photon(0, 2, k, kW0)));
    CHECK_THROWS_AS(photon_vz(ModeSpec::electron(0, 0, k, kW0)), ValidationError);
}

TEST_CASE("electron longitudinal velocity") {
    const double K = constants::electron_mass * c_light / hbar;

    // k = K, kw0 = 100
    const ModeSpec at_k = ModeSpec::electron(0, 0, K, 100.0 / K);
    CHECK(electron_vz(at_k) ==
          doctest::Approx(c_light / std::numbers::sqrt2 * (1.0 - 1e-4)).epsilon(1e-12));

    // plane-wave limit
    const ModeSpec wide = ModeSpec::electron(1, 1, K, 1e8 / K);
    CHECK(electron_vz(wide) ==
          doctest::Approx(c_light * K / std::sqrt(2.0) / K).epsilon(1e-12));

    // massless limit reproduces the photon
    const double k = 1e7;
    CHECK(electron_vz(ModeSpec::electron(1, 2, k, 100.0 / k, 0.0)) ==
          doctest::Approx(photon_vz(ModeSpec::photon(1, 2, k, 100.0 / k))).epsilon(1e-14));

    // monotone approach as m → 0
    const double w0 = 200.0 / 1e10;
    double previous = 0.0;
    for (int j = 0; j <= 5; ++j) {
        const double mass = hbar * 1e10 / c_light * std::pow(10.0, 1 - j);
        const double v = electron_vz(ModeSpec::electron(0, 1, 1e10, w0, mass));
        CHECK(v > previous);
        previous = v;
    }
    CHECK(previous < photon_vz(ModeSpec::photon(0, 1, 1e10, w0)));
}

TEST_CASE("unexpanded velocity brackets the linear form") {
    const ModeSpec mode = ModeSpec::photon(2, 1, 50.0 / kW0, kW0);
    const double eps = mode.paraxiality();
    const double lin = photon_vz(mode);
    const double unexp = vz_unexpanded(mode);
    CHECK(unexp < lin);
    CHECK(std::fabs(lin - unexp) <= c_light * eps * eps);
}

TEST_CASE("velocity spectrum table") {
    const double k = 1e6;

    const auto single = vz_spectrum(k, kW0, Species::photon, 0.0, 1);
    REQUIRE(single.size() == 1);
    CHECK(single[0].n == 0);
    CHECK(single[0].l == 0);
    CHECK(single[0].zeta == 1);

    const auto rows = vz_spectrum(k, kW0, Species::photon, 0.0, 9);
    // consecutive-ζ gap is c/(k²w0²); differencing the ~c-sized speeds
    // leaves eps·c ≈ 1e-10·gap of rounding, nothing more
    const double gap = c_light / (k * k * kW0 * kW0);
    double last_vz = 0.0;
    int last_zeta = 0;
    for (const auto& r : rows) {
        CHECK(r.zeta == 2 * r.n + r.l + 1);
        if (r.zeta == last_zeta) {
            CHECK(r.vz == last_vz);      // degenerate rows bitwise equal
        } else if (last_zeta > 0) {
            CHECK(last_vz - r.vz == doctest::Approx(gap).epsilon(1e-9));
        }
        last_vz = r.vz;
        last_zeta = r.zeta;
    }

    // electron gap scales with the plane-wave group velocity
    const double mass = constants::electron_mass;
    const double K = mass * c_light / hbar;
    const auto el = vz_spectrum(K, kW0, Species::electron, mass, 3);
    const double pref = c_light * K / std::sqrt(2.0) / K;
    CHECK(el[0].vz - el[1].vz == doctest::Approx(pref / (K * K * kW0 * kW0)).epsilon(1e-9));

    CHECK_THROWS_AS(vz_spectrum(k, kW0, Species::photon, 0.0, 0), ValidationError);
}
