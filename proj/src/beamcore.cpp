#include "twistbeam/beamcore.hpp"

#include <sstream>

#include "twistbeam/errors.hpp"

namespace twistbeam {

const char* to_string(Species s) {
    return s == Species::photon ? "photon" : "electron";
}

Species species_from_string(const std::string& s) {
    if (s == "photon") return Species::photon;
    if (s == "electron") return Species::electron;
    throw ValidationError("unknown species '" + s + "' (expected photon|electron)");
}

ModeSpec::ModeSpec(int n_, int l_, double k_, double w0_, Species species_, double mass)
    : n(n_), l(l_), k(k_), w0(w0_), species(species_), m(mass) {
    if (n < 0) throw ValidationError("ModeSpec: radial number n must be >= 0");
    if (!(k > 0.0) || !std::isfinite(k)) throw ValidationError("ModeSpec: wavenumber k must be > 0");
    if (!(w0 > 0.0) || !std::isfinite(w0)) throw ValidationError("ModeSpec: waist w0 must be > 0");
    if (m < 0.0 || !std::isfinite(m)) throw ValidationError("ModeSpec: rest mass must be >= 0");
    if (species == Species::photon && m != 0.0)
        throw ValidationError("ModeSpec: photon must have zero rest mass");

    const double witness = paraxiality();
    if (witness >= 0.5) {
        std::ostringstream os;
        os << "ModeSpec: paraxiality witness zeta/(k w0)^2 = " << witness << " >= 0.5";
        throw ValidationError(os.str());
    }
    if (witness >= 0.1) {
        std::ostringstream os;
        os << "ModeSpec(n=" << n << ", l=" << l << "): paraxiality witness "
           << witness << " exceeds 0.1; results are outside the validated regime";
        warn(os.str());
    }
}

ModeSpec ModeSpec::photon(int n, int l, double k, double w0) {
    return {n, l, k, w0, Species::photon, 0.0};
}

ModeSpec ModeSpec::electron(int n, int l, double k, double w0, double mass) {
    return {n, l, k, w0, Species::electron, mass};
}

double ModeSpec::energy() const {
    using constants::c_light;
    using constants::hbar;
    const double pc = hbar * k * c_light;
    if (species == Species::photon) return pc;
    return std::hypot(pc, m * c_light * c_light);
}

BeamGeometry beam_geometry(double z, const ModeSpec& mode) {
    BeamGeometry g;
    g.zR = mode.rayleigh_length();
    const double zr2 = g.zR * g.zR;
    g.w = mode.w0 * std::sqrt(1.0 + (z * z) / zr2);
    g.curvature = z / (z * z + zr2);  // 1/R = z/(z² + zR²), exactly 0 at z = 0
    g.gouy = std::atan(z / g.zR);
    return g;
}

namespace {
constexpr int kLaguerreMaxN = 50;
}

double laguerre(int n, int alpha, double x) {
    if (n < 0) throw ValidationError("laguerre: order n must be >= 0");
    if (alpha < 0) throw ValidationError("laguerre: alpha must be >= 0");
    if (n > kLaguerreMaxN) throw ValidationError("laguerre: order capped at n = 50");
    if (!std::isfinite(x)) throw ValidationError("laguerre: x must be finite");

    if (n == 0) return 1.0;
    double lm1 = 1.0;                  // L_0
    double lm0 = 1.0 + alpha - x;      // L_1
    for (int j = 1; j < n; ++j) {
        const double next = ((2.0 * j + 1.0 + alpha - x) * lm0 - (j + alpha) * lm1) / (j + 1.0);
        lm1 = lm0;
        lm0 = next;
    }
    return lm0;
}

double laguerre_derivative(int n, int alpha, double x) {
    if (n == 0) return 0.0;
    return -laguerre(n - 1, alpha + 1, x);
}

double norm_const(int n, int l) {
    if (n < 0) throw ValidationError("norm_const: n must be >= 0");
    const int al = std::abs(l);
    // n!/(n+|l|)! = 1/((n+1)(n+2)···(n+|l|)); every factor is < 1.
    double ratio = 1.0;
    for (int j = n + 1; j <= n + al; ++j) ratio /= static_cast<double>(j);
    return std::sqrt(2.0 * ratio / constants::pi);
}

} // namespace twistbeam
