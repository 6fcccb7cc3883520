#include "twistbeam/noninertial.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <cstdio>

#include "twistbeam/errors.hpp"

namespace twistbeam {

namespace {
using constants::c_light;
using constants::hbar;
constexpr double c2 = c_light * c_light;
} // namespace

NoninertialFrame NoninertialFrame::none() {
    return constant(Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero());
}

NoninertialFrame NoninertialFrame::constant(const Eigen::Vector3d& a,
                                            const Eigen::Vector3d& w) {
    NoninertialFrame f;
    f.accel = [a](double) { return a; };
    f.omega = [w](double) { return w; };
    return f;
}

CentroidModel CentroidModel::point_mass(double M, const Eigen::Vector3d& L) {
    if (M < 0.0) throw ValidationError("CentroidModel: mass must be >= 0");
    const double e0 = M * c2;
    return {e0 * e0, L};
}

CentroidModel CentroidModel::twisted(double rest_mass, double pperp_sq,
                                     const Eigen::Vector3d& L) {
    if (rest_mass < 0.0 || pperp_sq < 0.0)
        throw ValidationError("CentroidModel: mass and <p_perp^2> must be >= 0");
    const double mc2 = rest_mass * c2;
    return {mc2 * mc2 + pperp_sq * c2, L};
}

CentroidModel CentroidModel::from_state(const CentroidState& state) {
    return point_mass(state.M, Eigen::Vector3d(0.0, 0.0, state.L));
}

namespace {

inline double free_energy(const CentroidModel& model, const Eigen::Vector3d& p) {
    return std::sqrt(model.rest_energy_sq + p.squaredNorm() * c2);
}

} // namespace

double hamiltonian(const Eigen::Vector3d& r, const Eigen::Vector3d& p,
                   const CentroidModel& model, const NoninertialFrame& frame, double t) {
    if (!frame.accel || !frame.omega)
        throw ValidationError("hamiltonian: frame functions not set");
    const Eigen::Vector3d a = frame.accel(t);
    const Eigen::Vector3d w = frame.omega(t);
    const double prefactor = 1.0 + a.dot(r) / c2;
    return prefactor * free_energy(model, p) - w.dot(r.cross(p) + model.L);
}

double hamiltonian(const Eigen::Vector3d& r, const Eigen::Vector3d& p,
                   const Eigen::Vector3d& L, const NoninertialFrame& frame, double t,
                   double mass) {
    return hamiltonian(r, p, CentroidModel::point_mass(mass, L), frame, t);
}

EomRhs eom_rhs(const Eigen::Vector3d& r, const Eigen::Vector3d& p,
               const CentroidModel& model, const NoninertialFrame& frame, double t) {
    const Eigen::Vector3d a = frame.accel(t);
    const Eigen::Vector3d w = frame.omega(t);
    const double e_free = free_energy(model, p);
    const double prefactor = 1.0 + a.dot(r) / c2;
    EomRhs rhs;
    rhs.drdt = prefactor * (c2 / e_free) * p - w.cross(r);
    rhs.dpdt = -(e_free / c2) * a - w.cross(p);
    return rhs;
}

void Trajectory::export_csv(const std::string& path) const {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw ValidationError("Trajectory::export_csv: cannot open " + path);
    std::fprintf(fp, "t,x,y,z,px,py,pz,H\n");
    for (const auto& s : samples)
        std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t, s.r.x(),
                     s.r.y(), s.r.z(), s.p.x(), s.p.y(), s.p.z(), s.H);
    std::fclose(fp);
}

Trajectory integrate(const Eigen::Vector3d& r0, const Eigen::Vector3d& p0,
                     const CentroidModel& model, const NoninertialFrame& frame,
                     double t0, double t_span, double dt, const IntegrateOptions& opts) {
    if (!(dt > 0.0)) throw ValidationError("integrate: dt must be > 0");
    if (!(t_span >= 0.0) || !std::isfinite(t_span))
        throw ValidationError("integrate: t_span must be finite and >= 0");
    const auto n_steps = static_cast<std::size_t>(std::llround(t_span / dt));
    if (n_steps > opts.max_steps)
        throw ValidationError("integrate: step-count cap exceeded");

    Trajectory traj;
    traj.samples.reserve(n_steps / opts.record_every + 2);

    Eigen::Vector3d r = r0;
    Eigen::Vector3d p = p0;
    auto record = [&](double t) {
        traj.samples.push_back({t, r, p, hamiltonian(r, p, model, frame, t)});
    };
    record(t0);

    for (std::size_t step = 0; step < n_steps; ++step) {
        const double t = t0 + static_cast<double>(step) * dt;
        const EomRhs k1 = eom_rhs(r, p, model, frame, t);
        const EomRhs k2 = eom_rhs(r + 0.5 * dt * k1.drdt, p + 0.5 * dt * k1.dpdt, model,
                                  frame, t + 0.5 * dt);
        const EomRhs k3 = eom_rhs(r + 0.5 * dt * k2.drdt, p + 0.5 * dt * k2.dpdt, model,
                                  frame, t + 0.5 * dt);
        const EomRhs k4 = eom_rhs(r + dt * k3.drdt, p + dt * k3.dpdt, model, frame, t + dt);
        r += dt / 6.0 * (k1.drdt + 2.0 * (k2.drdt + k3.drdt) + k4.drdt);
        p += dt / 6.0 * (k1.dpdt + 2.0 * (k2.dpdt + k3.dpdt) + k4.dpdt);

        if (!r.allFinite() || !p.allFinite())
            throw ConvergenceError("integrate: state became non-finite");
        if (std::fabs(frame.accel(t + dt).dot(r)) > 0.1 * c2) ++traj.weak_field_count;

        if ((step + 1) % opts.record_every == 0 || step + 1 == n_steps)
            record(t0 + static_cast<double>(step + 1) * dt);
    }
    if (traj.weak_field_count > 0)
        warn("integrate: (1 + a·r/c²) left the weak-field window on " +
             std::to_string(traj.weak_field_count) + " steps");
    return traj;
}

double inertial_mass_equivalence(const ModeSpec& mode, const NoninertialFrame& frame,
                                 double t_span, double dt) {
    const CentroidState state = mode.species == Species::photon ? photon_centroid(mode)
                                                                : electron_centroid(mode);
    const Eigen::Vector3d L(0.0, 0.0, state.L);
    const double pperp_sq = 2.0 * mode.zeta() * hbar * hbar / (mode.w0 * mode.w0);
    const CentroidModel twisted = CentroidModel::twisted(mode.m, pperp_sq, L);
    const CentroidModel point = CentroidModel::point_mass(state.M, L);

    const Eigen::Vector3d r0 = Eigen::Vector3d::Zero();
    const IntegrateOptions opts{.record_every = 16};
    const Trajectory a = integrate(r0, state.p, twisted, frame, 0.0, t_span, dt, opts);
    const Trajectory b = integrate(r0, state.p, point, frame, 0.0, t_span, dt, opts);

    double scale = 0.0;
    for (const auto& s : a.samples) scale = std::fmax(scale, s.r.norm());
    if (scale == 0.0) scale = 1.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i)
        worst = std::fmax(worst, (a.samples[i].r - b.samples[i].r).norm());
    return worst / scale;
}

} // namespace twistbeam
