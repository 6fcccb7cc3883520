#include <doctest.h>

#include <utility>

#include <cmath>

#include "twistbeam/errors.hpp"
#include "twistbeam/localfields.hpp"

using namespace twistbeam;
using constants::c_light;

namespace {
const double kW0 = 1e-3;
const double kK = 100.0 / kW0;  // kw0 = 100
const GridGeometry kGrid = GridGeometry::cartesian(256, 256, 10.0 * kW0, 10.0 * kW0);
}

TEST_CASE("phase-front velocity on axis is superluminal") {
    const ModeSpec mode = ModeSpec::photon(0, 0, kK, kW0);
    const VelocityMap vp = phase_velocity_gradient(mode, kGrid, 0.0);
    const int cx = kGrid.nx / 2, cy = kGrid.ny / 2;
    REQUIRE(vp.valid(cx, cy));
    // |∇Φ| on axis is k − 2/(k w0²)
    const double expected = c_light / (1.0 - 2.0 / (kK * kK * kW0 * kW0));
    CHECK(vp.at(cx, cy) > c_light);
    CHECK(vp.at(cx, cy) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("azimuthal gradient pulls the phase velocity to zero at the core") {
    const ModeSpec mode = ModeSpec::photon(0, 2, kK, kW0);
    const VelocityMap vp = phase_velocity_gradient(mode, kGrid, 0.0);
    const int cy = kGrid.ny / 2;
    // the core node itself is masked
    CHECK_FALSE(vp.valid(kGrid.nx / 2, cy));
    // walking inward, v_p decreases monotonically below c
    double previous = 0.0;
    for (int ix = kGrid.nx / 2 + 12; ix >= kGrid.nx / 2 + 2; --ix) {
        if (!vp.valid(ix, cy)) continue;
        if (previous > 0.0) CHECK(vp.at(ix, cy) < previous);
        previous = vp.at(ix, cy);
    }
    CHECK(previous < c_light);

    // the l/r term wins only below r ≈ l/k; a dedicated fine grid reaches it
    const double r_core = mode.l / (10.0 * kK);
    const GridGeometry fine = GridGeometry::cartesian(64, 64, 8.0 * r_core, 8.0 * r_core);
    const VelocityMap vfine = phase_velocity_gradient(mode, fine, 0.0);
    const int fx = fine.nx / 2 + 2, fy = fine.ny / 2;  // r ≈ 2·dx ≈ r_core/4
    REQUIRE(vfine.valid(fx, fy));
    CHECK(vfine.at(fx, fy) < 0.1 * c_light);
}

TEST_CASE("Chen formula on axis matches the Gaussian curvature value") {
    const ModeSpec mode = ModeSpec::photon(0, 0, kK, kW0);
    const VelocityMap vch = phase_velocity_chen(mode, kGrid, 0.0);
    const int cx = kGrid.nx / 2, cy = kGrid.ny / 2;
    REQUIRE(vch.valid(cx, cy));
    // ∇⊥²A/A = −4/w0² on axis at the waist
    const double expected = c_light / std::sqrt(1.0 - 4.0 / (kK * kK * kW0 * kW0));
    CHECK(vch.at(cx, cy) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("the two LPV formulas agree on the leading on-axis excess") {
    for (const auto& [n, l] : {std::pair{0, 0}, {1, 0}, {2, 0}}) {
        const ModeSpec mode = ModeSpec::photon(n, l, kK, kW0);
        const VelocityMap vp = phase_velocity_gradient(mode, kGrid, 0.0);
        const VelocityMap vch = phase_velocity_chen(mode, kGrid, 0.0);
        const int cx = kGrid.nx / 2, cy = kGrid.ny / 2;
        const double target = 2.0 * mode.zeta() / (kK * kK * kW0 * kW0);
        CHECK(std::fabs((vp.at(cx, cy) / c_light - 1.0) / target - 1.0) < 0.01);
        CHECK(std::fabs((vch.at(cx, cy) / c_light - 1.0) / target - 1.0) < 0.01);
    }

    // the mutual ratio of the two excesses stays inside 1 ± 5/(kw0)²
    for (double kw0 : {50.0, 100.0}) {
        const double k = kw0 / kW0;
        const ModeSpec mode = ModeSpec::photon(0, 0, k, kW0);
        const GridGeometry g = GridGeometry::cartesian(64, 64, 10.0 * kW0, 10.0 * kW0);
        const double eg =
            phase_velocity_gradient(mode, g, 0.0).at(g.nx / 2, g.ny / 2) / c_light - 1.0;
        const double ec =
            phase_velocity_chen(mode, g, 0.0).at(g.nx / 2, g.ny / 2) / c_light - 1.0;
        CHECK(std::fabs(ec / eg - 1.0) <= 5.0 / (kw0 * kw0));
    }
}

TEST_CASE("Chen bracket masks evanescent-like regions of marginal modes") {
    // witness 0.3: on-axis bracket 1 − 4·0.3 < 0 → masked there
    const ModeSpec marginal = ModeSpec::photon(1, 0, std::sqrt(3.0 / 0.3) / kW0, kW0);
    const VelocityMap vch = phase_velocity_chen(marginal, kGrid, 0.0);
    const VelocityMap vp = phase_velocity_gradient(marginal, kGrid, 0.0);
    std::size_t masked_extra = 0;
    for (std::size_t i = 0; i < vch.mask.size(); ++i)
        if (vp.mask[i] && !vch.mask[i]) ++masked_extra;
    CHECK(masked_extra > 0);
    CHECK_FALSE(vch.valid(kGrid.nx / 2, kGrid.ny / 2));
}

TEST_CASE("group velocity on axis is subluminal and matches its k-derivative") {
    const ModeSpec mode = ModeSpec::photon(0, 0, kK, kW0);
    const VelocityMap vg = group_velocity_map(mode, kGrid, 0.0);
    const int cx = kGrid.nx / 2, cy = kGrid.ny / 2;
    REQUIRE(vg.valid(cx, cy));
    CHECK(vg.at(cx, cy) < c_light);
    // ∂_k of the on-axis gradient k − 2ζ/(k w0²) gives 1 + 2ζ/(k²w0²)
    const double expected = c_light / (1.0 + 2.0 * mode.zeta() / (kK * kK * kW0 * kW0));
    CHECK(vg.at(cx, cy) == doctest::Approx(expected).epsilon(1e-9));

    // far-field large-r region is superluminal somewhere on the grid
    const RegionReport rep = classify_regions(vg);
    CHECK(rep.superluminal_count > 0);
    CHECK(rep.subluminal_count > 0);
}

TEST_CASE("plane-wave kernels return c everywhere") {
    const GridGeometry g = GridGeometry::cartesian(32, 32, 1.0, 1.0);
    for (const VelocityMap& map :
         {plane_wave_phase_velocity(g, kK, 0.0), plane_wave_chen(g, kK, 0.0),
          plane_wave_group_velocity(g, kK, 0.0)}) {
        for (std::size_t i = 0; i < map.v.size(); ++i) {
            CHECK(map.mask[i] == 1);
            CHECK(std::fabs(map.v[i] - c_light) <= 1e-12 * c_light);
        }
    }
}

TEST_CASE("longitudinal classification boundary sits at sqrt(zeta)·w0") {
    for (const auto& [n, l] : {std::pair{0, 0}, {1, 3}, {0, 5}}) {
        const ModeSpec mode = ModeSpec::photon(n, l, kK, kW0);
        const VelocityMap map = longitudinal_velocity_map(mode, kGrid, 0.0);
        const RegionReport rep = classify_regions(map);
        const double target = std::sqrt(static_cast<double>(mode.zeta())) * kW0;
        CHECK(std::fabs(rep.boundary_radius - target) <= kGrid.dx);
        CHECK(rep.subluminal_count > 0);
        CHECK(rep.superluminal_count > 0);
    }
}

TEST_CASE("all-subluminal map has an empty superluminal mask") {
    VelocityMap map;
    map.geometry = GridGeometry::cartesian(8, 8, 1.0, 1.0);
    map.z = 0.0;
    map.k = kK;
    map.v.assign(64, 0.5 * c_light);
    map.mask.assign(64, 1);
    const RegionReport rep = classify_regions(map);
    CHECK(rep.superluminal_count == 0);
    CHECK(rep.subluminal_count == 64);
    CHECK(std::isnan(rep.boundary_radius));
}

TEST_CASE("weighted local deficit reassembles the global velocity deficit") {
    for (const auto& [n, l] : {std::pair{0, 0}, {2, 4}}) {
        const ModeSpec mode = ModeSpec::photon(n, l, kK, kW0);
        for (double z : {0.0, mode.rayleigh_length()}) {
            const double expected = c_light * mode.zeta() / (kK * kK * kW0 * kW0);
            CHECK(std::fabs(weighted_longitudinal_deficit(mode, z) - expected) <=
                  1e-8 * expected);
        }
    }
}

TEST_CASE("velocity maps require cartesian grids") {
    const ModeSpec mode = ModeSpec::photon(0, 0, kK, kW0);
    const GridGeometry polar = GridGeometry::polar(mode, 0.0, 16, 8);
    CHECK_THROWS_AS(phase_velocity_gradient(mode, polar, 0.0), ValidationError);
}
