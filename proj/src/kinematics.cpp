#include "twistbeam/kinematics.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "twistbeam/errors.hpp"

namespace twistbeam {

namespace {
using constants::c_light;
using constants::elementary_charge;
using constants::hbar;
constexpr double c2 = c_light * c_light;
} // namespace

BoostSpec::BoostSpec(const Eigen::Vector3d& v) : V(v) {
    if (!(V.norm() < c_light))
        throw ValidationError("BoostSpec: |V| must be strictly below c");
}

CentroidState CentroidState::from_energy_momentum(double E, const Eigen::Vector3d& p,
                                                  double L, Species species) {
    if (!(E > 0.0) || !std::isfinite(E))
        throw ValidationError("CentroidState: energy must be > 0");
    const double m2c4 = E * E - p.squaredNorm() * c2;
    if (m2c4 < -1e-9 * E * E)
        throw ValidationError("CentroidState: spacelike four-momentum");
    CentroidState s;
    s.E = E;
    s.p = p;
    s.M = std::sqrt(std::fmax(m2c4, 0.0)) / c2;
    s.L = L;
    s.species = species;
    return s;
}

double CentroidState::shell_residual() const {
    return (E * E - p.squaredNorm() * c2 - M * M * c2 * c2) / (E * E);
}

double effective_mass(int zeta, double w0, double rest_mass) {
    if (zeta < 1 || !(w0 > 0.0)) throw ValidationError("effective_mass: bad arguments");
    const double hidden = std::sqrt(2.0 * zeta) * hbar / (c_light * w0);
    return std::hypot(rest_mass, hidden);
}

namespace {

CentroidState centroid_from_mode(const ModeSpec& mode) {
    const double E = mode.energy();
    const double M = effective_mass(mode.zeta(), mode.w0, mode.m);
    const double mc2 = M * c2;
    const double pz2 = (E - mc2) * (E + mc2) / c2;
    if (!(pz2 > 0.0))
        throw ValidationError("centroid: no forward momentum left (mode too far from paraxial)");
    CentroidState s;
    s.E = E;
    s.p = Eigen::Vector3d(0.0, 0.0, std::sqrt(pz2));
    s.M = M;
    s.L = hbar * mode.l;
    s.species = mode.species;
    return s;
}

} // namespace

CentroidState photon_centroid(const ModeSpec& mode) {
    if (mode.species != Species::photon)
        throw ValidationError("photon_centroid: mode species must be photon");
    return centroid_from_mode(mode);
}

CentroidState electron_centroid(const ModeSpec& mode) {
    if (mode.species != Species::electron)
        throw ValidationError("electron_centroid: mode species must be electron");
    const double mc2 = mode.m * c2;
    if (!(mode.energy() > mc2))
        throw ValidationError("electron_centroid: total energy must exceed mc^2");
    return centroid_from_mode(mode);
}

double centroid_pz_linear(const ModeSpec& mode) {
    return hbar * mode.k * (1.0 - mode.paraxiality());
}

std::pair<double, double> mass_from_velocity(double k, double vz) {
    if (!(k > 0.0)) throw ValidationError("mass_from_velocity: k must be > 0");
    if (!(vz > 0.0) || vz > c_light)
        throw ValidationError("mass_from_velocity: need 0 < vz <= c");
    const double beta = vz / c_light;
    const double scale = hbar * k / c_light;
    const double m1 = scale * std::sqrt(2.0 * (1.0 - beta));
    const double m2 = scale * std::sqrt((1.0 - beta) * (1.0 + beta));
    return {m1, m2};
}

CentroidState boost(const CentroidState& state, const BoostSpec& spec) {
    const double v = spec.V.norm();
    if (!(v < c_light)) throw ValidationError("boost: |V| must be strictly below c");
    if (v == 0.0) return state;

    const Eigen::Vector3d n = spec.V / v;
    const double beta = v / c_light;
    const double gamma = 1.0 / std::sqrt((1.0 - beta) * (1.0 + beta));

    const double p_par = n.dot(state.p);
    const double E_prime = gamma * (state.E + spec.V.dot(state.p));
    const Eigen::Vector3d p_prime =
        state.p + ((gamma - 1.0) * p_par + gamma * state.E * v / c2) * n;

    CentroidState out = CentroidState::from_energy_momentum(E_prime, p_prime, state.L,
                                                            state.species);
    if (state.M > 0.0 && std::fabs(out.M - state.M) > 1e-6 * state.M)
        throw ConvergenceError("boost: invariant mass not preserved");
    return out;
}

std::pair<CentroidState, BoostSpec> rest_frame(const CentroidState& state) {
    if (!(state.M > 0.0))
        throw ValidationError("rest_frame: massless state has no rest frame");
    const Eigen::Vector3d v = state.velocity();
    CentroidState rest = boost(state, BoostSpec(-v));
    rest.p.setZero();  // exact by construction; drop the rounding residue
    rest.E = rest.M * c2;
    return {rest, BoostSpec(v)};
}

double orbital_magnetic_moment(int l, double E) {
    if (!(E > 0.0)) throw ValidationError("orbital_magnetic_moment: energy must be > 0");
    return elementary_charge * hbar * static_cast<double>(l) * c2 / (2.0 * E);
}

void to_json(nlohmann::json& j, const CentroidState& s) {
    j = nlohmann::json{{"species", to_string(s.species)},
                       {"E_J", s.E},
                       {"p_kg_m_s", {s.p.x(), s.p.y(), s.p.z()}},
                       {"M_kg", s.M},
                       {"L_J_s", s.L}};
}

void from_json(const nlohmann::json& j, CentroidState& s) {
    const auto p = j.at("p_kg_m_s").get<std::vector<double>>();
    if (p.size() != 3) throw ValidationError("CentroidState: p must have 3 components");
    s = CentroidState::from_energy_momentum(j.at("E_J"), Eigen::Vector3d(p[0], p[1], p[2]),
                                            j.at("L_J_s"),
                                            species_from_string(j.at("species")));
    // Keep the stored mass if it is shell-consistent; it may carry the exact
    // closed form while the derived value has rounding.
    if (j.contains("M_kg")) {
        const double m = j.at("M_kg");
        if (std::fabs(m - s.M) > 1e-6 * std::fmax(s.M, s.E / c2))
            throw ValidationError("CentroidState: stored mass violates the mass shell");
        s.M = m;
    }
}

} // namespace twistbeam
