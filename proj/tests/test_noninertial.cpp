#include <doctest.h>

#include <Eigen/Geometry>
#include <cmath>
#include <random>

#include "twistbeam/errors.hpp"
#include "twistbeam/kinematics.hpp"
#include "twistbeam/noninertial.hpp"

using namespace twistbeam;
using constants::c_light;
using constants::hbar;

namespace {
constexpr double c2 = c_light * c_light;
const ModeSpec kMode = ModeSpec::photon(1, 0, 1e6, 1e-3);  // ζ = 3
}

TEST_CASE("free Hamiltonian and the −ω·L shift") {
    const CentroidState s = photon_centroid(kMode);
    const CentroidModel model = CentroidModel::from_state(s);

    const double free_h =
        hamiltonian(Eigen::Vector3d::Zero(), s.p, model, NoninertialFrame::none(), 0.0);
    CHECK(free_h == doctest::Approx(s.E).epsilon(1e-14));

    // r = 0 with ω ∥ L: only the −ω·L shift remains
    const Eigen::Vector3d w(0.0, 0.0, 2.5);
    const NoninertialFrame rotating =
        NoninertialFrame::constant(Eigen::Vector3d::Zero(), w);
    const double shifted = hamiltonian(Eigen::Vector3d::Zero(), s.p, model, rotating, 0.0);
    CHECK(shifted == doctest::Approx(free_h - w.z() * model.L.z()).epsilon(1e-14));

    // the point-particle overload agrees with the model route
    CHECK(hamiltonian(Eigen::Vector3d::Zero(), s.p, model.L, rotating, 0.0, s.M) ==
          doctest::Approx(shifted).epsilon(1e-15));
}

TEST_CASE("twisted substitution and the point mass are the same Hamiltonian") {
    const CentroidState s = photon_centroid(kMode);
    const Eigen::Vector3d L(0.0, 0.0, s.L);
    const double pperp_sq = 2.0 * kMode.zeta() * hbar * hbar / (kMode.w0 * kMode.w0);
    const CentroidModel twisted = CentroidModel::twisted(0.0, pperp_sq, L);
    const CentroidModel point = CentroidModel::point_mass(s.M, L);

    const NoninertialFrame frame = NoninertialFrame::constant({1.0, 2.0, 0.0}, {0.1, 0.0, 0.7});
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const Eigen::Vector3d r = 1e6 * Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
        const Eigen::Vector3d p = s.p.z() * Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
        const double ha = hamiltonian(r, p, twisted, frame, 0.0);
        const double hb = hamiltonian(r, p, point, frame, 0.0);
        CHECK(std::fabs(ha - hb) <= 1e-12 * std::fabs(ha));
    }
}

TEST_CASE("equations of motion match finite differences of H") {
    // scales chosen so the frame terms are a visible fraction of H
    const double M = 1e-36;  // kg
    const double pscale = M * c_light;
    std::mt19937_64 rng(17);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> mag(0.3, 3.0);

    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const CentroidModel model =
            CentroidModel::point_mass(M, {0.0, 0.0, mag(rng) * M * c2});
        const Eigen::Vector3d r =
            3e8 * Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
        const Eigen::Vector3d p =
            pscale * mag(rng) * Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
        const Eigen::Vector3d a =
            1.5e7 * Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
        const Eigen::Vector3d w = Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
        const NoninertialFrame frame = NoninertialFrame::constant(a, w);

        const EomRhs rhs = eom_rhs(r, p, model, frame, 0.0);
        Eigen::Vector3d grad_r, grad_p;
        for (int i = 0; i < 3; ++i) {
            Eigen::Vector3d dr = Eigen::Vector3d::Zero();
            dr[i] = 1e-4 * (std::fabs(r[i]) + 3e8);
            grad_r[i] = (hamiltonian(r + dr, p, model, frame, 0.0) -
                         hamiltonian(r - dr, p, model, frame, 0.0)) /
                        (2.0 * dr[i]);
            Eigen::Vector3d dp = Eigen::Vector3d::Zero();
            dp[i] = 1e-5 * (std::fabs(p[i]) + pscale);
            grad_p[i] = (hamiltonian(r, p + dp, model, frame, 0.0) -
                         hamiltonian(r, p - dp, model, frame, 0.0)) /
                        (2.0 * dp[i]);
        }
        CHECK((rhs.drdt - grad_p).norm() <= 1e-8 * grad_p.norm());
        CHECK((rhs.dpdt + grad_r).norm() <= 1e-8 * grad_r.norm());
        ++checked;
    }
    CHECK(checked == 1000);
}

TEST_CASE("Coriolis structure: dp/dt ⊥ ω when a = 0") {
    const CentroidModel model = CentroidModel::point_mass(1e-30, Eigen::Vector3d::Zero());
    const Eigen::Vector3d w(0.0, 0.0, 3.0);
    const NoninertialFrame frame = NoninertialFrame::constant(Eigen::Vector3d::Zero(), w);
    const Eigen::Vector3d p(1e-24, -2e-24, 5e-25);
    const EomRhs rhs = eom_rhs({1.0, 2.0, 3.0}, p, model, frame, 0.0);
    CHECK(std::fabs(rhs.dpdt.dot(w)) <= 1e-18 * rhs.dpdt.norm() * w.norm());
    CHECK((rhs.dpdt + w.cross(p)).norm() <= 1e-15 * rhs.dpdt.norm());
}

TEST_CASE("free motion is an exact straight line") {
    const CentroidState s = photon_centroid(kMode);
    const CentroidModel model = CentroidModel::from_state(s);
    const Trajectory traj = integrate({1.0, -2.0, 0.0}, s.p, model,
                                      NoninertialFrame::none(), 0.0, 10.0, 0.01);
    const Eigen::Vector3d v = s.velocity();
    for (const auto& sample : traj.samples) {
        const Eigen::Vector3d expected = Eigen::Vector3d(1.0, -2.0, 0.0) + sample.t * v;
        CHECK((sample.r - expected).norm() <= 1e-12 * expected.norm());
        CHECK(sample.p == s.p);
    }
    // frame-off reduction reproduces the kinematics velocity exactly
    const double measured_vz =
        (traj.samples.back().r.z() - traj.samples.front().r.z()) / 10.0;
    CHECK(measured_vz == doctest::Approx(s.vz()).epsilon(1e-14));
}

TEST_CASE("constant acceleration against the sinh closed form") {
    // dp/dt = −(a/c²)√(E₀² + p²c²) integrates to
    // p(t) = Mc·sinh(asinh(p0/Mc) − a·t/c) when the motion is 1D.
    const double M = 1e-27;
    const double p0 = 2.0 * M * c_light;
    const double a = 5.8e7;
    const CentroidModel model = CentroidModel::point_mass(M, Eigen::Vector3d::Zero());
    const NoninertialFrame frame =
        NoninertialFrame::constant({0.0, 0.0, a}, Eigen::Vector3d::Zero());

    const double t_span = 10.0;
    const Trajectory traj = integrate({0, 0, 0}, {0.0, 0.0, p0}, model, frame, 0.0, t_span,
                                      5e-4, {.record_every = 2000});
    const double s0 = std::asinh(p0 / (M * c_light));
    for (const auto& sample : traj.samples) {
        const double expected = M * c_light * std::sinh(s0 - a * sample.t / c_light);
        CHECK(sample.p.z() == doctest::Approx(expected).epsilon(1e-8));
        CHECK(sample.p.x() == 0.0);
    }
}

TEST_CASE("energy conservation and fourth-order convergence") {
    const CentroidState s = photon_centroid(kMode);
    const CentroidModel model = CentroidModel::from_state(s);
    const NoninertialFrame frame = NoninertialFrame::constant({1.0, -0.5, 0.2}, {0.2, 0.1, 0.5});

    // static frame: H is conserved along the exact flow
    const double dt = 1e-3 * 2.0 * constants::pi / 0.5;
    const Trajectory traj = integrate({0, 0, 0}, s.p, model, frame, 0.0, 2e4 * dt, dt,
                                      {.record_every = 50});
    const double h0 = traj.samples.front().H;
    for (const auto& sample : traj.samples)
        CHECK(std::fabs(sample.H - h0) <= 1e-8 * std::fabs(h0));

    // H-drift scales like O(dt⁴): halving the step cuts it by ≈ 16
    const double span = 3.0 * 2.0 * constants::pi;
    auto max_drift = [&](double step) {
        const Trajectory t = integrate({0, 0, 0}, s.p, model, frame, 0.0, span, step,
                                       {.record_every = 8});
        double worst = 0.0;
        for (const auto& sample : t.samples)
            worst = std::fmax(worst, std::fabs(sample.H - t.samples.front().H));
        return worst;
    };
    const double coarse_drift = max_drift(span / 150.0);
    const double fine_drift = max_drift(span / 300.0);
    CHECK(coarse_drift / fine_drift > 8.0);   // at least cubic-order shrink
    CHECK(coarse_drift / fine_drift < 80.0);  // and not wildly beyond fourth

    // dt-halving of the final state: observed order ≈ 4
    auto run = [&](double step) {
        return integrate({0, 0, 0}, s.p, model, frame, 0.0, span, step,
                         {.record_every = 1u << 30})
            .samples.back();
    };
    const TrajectorySample ref = run(span / 4000.0);
    double err[3];
    for (int j = 0; j < 3; ++j) {
        const TrajectorySample got = run(span / (250.0 * (1 << j)));
        err[j] = (got.r - ref.r).norm() / ref.r.norm() +
                 (got.p - ref.p).norm() / ref.p.norm();
    }
    const double order1 = std::log2(err[0] / err[1]);
    const double order2 = std::log2(err[1] / err[2]);
    CHECK(order1 > 3.7);
    CHECK(order1 < 4.3);
    CHECK(order2 > 3.7);
    CHECK(order2 < 4.3);
}

TEST_CASE("inertial mass equals kinematic mass") {
    const NoninertialFrame pure_a =
        NoninertialFrame::constant({2.0, 0.0, 1.0}, Eigen::Vector3d::Zero());
    const NoninertialFrame pure_w =
        NoninertialFrame::constant(Eigen::Vector3d::Zero(), {0.3, 0.0, 0.4});
    const NoninertialFrame combined = NoninertialFrame::constant({1.0, -0.5, 0.2}, {0.2, 0.1, 0.5});

    // frame off → identical Hamiltonians integrate to exactly zero deviation
    CHECK(inertial_mass_equivalence(kMode, NoninertialFrame::none(), 10.0, 0.01) == 0.0);

    CHECK(inertial_mass_equivalence(kMode, pure_a, 1e3, 0.5) < 1e-10);
    CHECK(inertial_mass_equivalence(kMode, pure_w, 20.0, 1e-2) < 1e-10);
    CHECK(inertial_mass_equivalence(kMode, combined, 20.0, 1e-2) < 1e-10);

    // electron centroid: same equivalence with the massive closed form
    const double K = constants::electron_mass * c_light / hbar;
    const ModeSpec electron = ModeSpec::electron(1, 1, K, 200.0 / K);
    CHECK(inertial_mass_equivalence(electron, combined, 20.0, 1e-2) < 1e-10);
}

TEST_CASE("integration guards") {
    const CentroidState s = photon_centroid(kMode);
    const CentroidModel model = CentroidModel::from_state(s);
    const NoninertialFrame none = NoninertialFrame::none();

    CHECK_THROWS_AS(integrate({0, 0, 0}, s.p, model, none, 0.0, 1.0, -0.1), ValidationError);
    CHECK_THROWS_AS(integrate({0, 0, 0}, s.p, model, none, 0.0, 1e9, 1e-6), ValidationError);

    // an absurd acceleration overflows the energy and is caught
    const NoninertialFrame violent =
        NoninertialFrame::constant({1e300, 0.0, 0.0}, Eigen::Vector3d::Zero());
    CHECK_THROWS_AS(integrate({0, 0, 0}, s.p, model, violent, 0.0, 1.0, 0.1),
                    ConvergenceError);

    // weak-field bookkeeping: a photon crossing 3e10 m under a = 1e9 m/s²
    const NoninertialFrame strong =
        NoninertialFrame::constant({0.0, 0.0, 1e9}, Eigen::Vector3d::Zero());
    const Trajectory traj = integrate({0, 0, 0}, s.p, model, strong, 0.0, 100.0, 0.1);
    CHECK(traj.weak_field_count > 0);
}

TEST_CASE("time-dependent frames enter through a(t), ω(t)") {
    const CentroidState s = photon_centroid(kMode);
    const CentroidModel model = CentroidModel::from_state(s);
    NoninertialFrame frame;
    frame.accel = [](double t) { return Eigen::Vector3d(std::sin(t), 0.0, 0.0); };
    frame.omega = [](double t) { return Eigen::Vector3d(0.0, 0.0, 0.1 * t); };
    const Trajectory traj = integrate({0, 0, 0}, s.p, model, frame, 0.0, 5.0, 1e-3);
    CHECK(traj.samples.back().t == doctest::Approx(5.0).epsilon(1e-12));
    // H is not conserved in a time-dependent frame; it must still be finite
    for (const auto& sample : traj.samples) CHECK(std::isfinite(sample.H));
}
