#pragma once

/**
 * noninertial — centroid dynamics in an accelerated, rotating frame.
 *
 * Hamiltonian (SI):
 *     H = (1 + a·r/c²)·√(E₀² + |p|²c²) − ω·(r×p + L),
 * with E₀² the squared rest energy of the model: (Mc²)² for a point mass,
 * m²c⁴ + ⟨p⊥²⟩c² for a twisted centroid whose hidden transverse momentum
 * rides along unchanged. The two are the same Hamiltonian whenever
 * M² = m² + ⟨p⊥²⟩/c², which is the inertial/kinematic mass equivalence this
 * module verifies. L is constant during integration; a time-dependent
 * −ω(t)·L term shifts H but never the motion.
 *
 * Hamilton's equations:
 *     dr/dt = (1 + a·r/c²)·p c²/√(E₀² + |p|²c²) − ω×r
 *     dp/dt = −(a/c²)·√(E₀² + |p|²c²) − ω×p
 *
 * Integration is fixed-step classical RK4 with the energy recorded per
 * sample; conservation drift is the accuracy monitor.
 */

#include <Eigen/Core>
#include <functional>
#include <string>
#include <vector>

#include "twistbeam/beamcore.hpp"
#include "twistbeam/kinematics.hpp"

namespace twistbeam {

/// Spatially uniform frame acceleration and angular velocity; both may
/// depend on time arbitrarily.
struct NoninertialFrame {
    std::function<Eigen::Vector3d(double)> accel;  ///< a(t) (m/s²)
    std::function<Eigen::Vector3d(double)> omega;  ///< ω(t) (rad/s)

    static NoninertialFrame none();
    static NoninertialFrame constant(const Eigen::Vector3d& a, const Eigen::Vector3d& w);
};

/// Energy model entering √(E₀² + |p|²c²), plus the intrinsic OAM vector.
struct CentroidModel {
    double rest_energy_sq = 0.0;                  ///< E₀² (J²)
    Eigen::Vector3d L = Eigen::Vector3d::Zero();  ///< J·s

    static CentroidModel point_mass(double M, const Eigen::Vector3d& L);
    /// Twisted centroid: rest mass plus a fixed hidden ⟨p⊥²⟩ (SI (kg·m/s)²).
    static CentroidModel twisted(double rest_mass, double pperp_sq,
                                 const Eigen::Vector3d& L);
    static CentroidModel from_state(const CentroidState& state);
};

double hamiltonian(const Eigen::Vector3d& r, const Eigen::Vector3d& p,
                   const CentroidModel& model, const NoninertialFrame& frame, double t);

/// Point-particle convenience overload (mass in kg, OAM vector in J·s).
double hamiltonian(const Eigen::Vector3d& r, const Eigen::Vector3d& p,
                   const Eigen::Vector3d& L, const NoninertialFrame& frame, double t,
                   double mass);

struct EomRhs {
    Eigen::Vector3d drdt;
    Eigen::Vector3d dpdt;
};

EomRhs eom_rhs(const Eigen::Vector3d& r, const Eigen::Vector3d& p,
               const CentroidModel& model, const NoninertialFrame& frame, double t);

struct TrajectorySample {
    double t = 0.0;
    Eigen::Vector3d r = Eigen::Vector3d::Zero();
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    double H = 0.0;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;  ///< strictly increasing t
    long weak_field_count = 0;  ///< steps with |a·r| beyond 0.1·c²

    /// CSV columns: t,x,y,z,px,py,pz,H.
    void export_csv(const std::string& path) const;
};

struct IntegrateOptions {
    std::size_t record_every = 1;
    std::size_t max_steps = 20'000'000;
};

/// Classical fixed-step RK4 from t0 over t_span, rounded to whole steps of
/// dt. Aborts on non-finite state; rejects runs beyond the step cap.
Trajectory integrate(const Eigen::Vector3d& r0, const Eigen::Vector3d& p0,
                     const CentroidModel& model, const NoninertialFrame& frame,
                     double t0, double t_span, double dt,
                     const IntegrateOptions& opts = {});

/// Integrate the twisted centroid (rest mass + hidden ⟨p⊥²⟩) and the
/// equivalent point particle of mass M from identical initial conditions in
/// the same frame; returns the maximum relative position deviation.
double inertial_mass_equivalence(const ModeSpec& mode, const NoninertialFrame& frame,
                                 double t_span, double dt);

} // namespace twistbeam
