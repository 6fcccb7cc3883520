#include "twistbeam/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>

#include "twistbeam/errors.hpp"
#include "twistbeam/quadrature.hpp"

namespace twistbeam {

using json = nlohmann::json;

const char* to_string(GridKind k) {
    return k == GridKind::cartesian ? "cartesian" : "polar-quadrature";
}

const char* to_string(PhaseConvention c) {
    return c == PhaseConvention::envelope ? "envelope" : "full";
}

GridGeometry GridGeometry::cartesian(int nx, int ny, double extent_x, double extent_y) {
    if (nx < 1 || ny < 1) throw ValidationError("GridGeometry: node counts must be >= 1");
    if (!(extent_x > 0.0) || !(extent_y > 0.0))
        throw ValidationError("GridGeometry: extents must be > 0");
    GridGeometry g;
    g.kind = GridKind::cartesian;
    g.nx = nx;
    g.ny = ny;
    g.dx = extent_x / nx;
    g.dy = extent_y / ny;
    return g;
}

GridGeometry GridGeometry::polar(const ModeSpec& mode, double z,
                                 int n_radial, int n_azimuthal) {
    if (n_radial < 1 || n_radial > 140)
        throw ValidationError("GridGeometry::polar: radial count must be in [1, 140]");
    if (n_azimuthal < 1)
        throw ValidationError("GridGeometry::polar: azimuthal count must be >= 1");

    GridGeometry g;
    g.kind = GridKind::polar_quadrature;
    g.nx = n_radial;
    g.ny = n_azimuthal;
    const double w = beam_geometry(z, mode).w;
    g.u_scale = w;

    // ∫f(r) r dr = (w²/4)·∫F(u) du with u = 2r²/w²; fold the e^{+u} of the
    // Gauss-Laguerre weight into the node weight so callers integrate plain f.
    const QuadratureRule rule = gauss_laguerre(n_radial);
    g.r_nodes.resize(n_radial);
    g.r_weights.resize(n_radial);
    for (int i = 0; i < n_radial; ++i) {
        const double u = rule.nodes[i];
        g.r_nodes[i] = w * std::sqrt(0.5 * u);
        g.r_weights[i] = 0.25 * w * w * rule.weights[i] * std::exp(u);
    }
    return g;
}

void FieldGrid::attach_mode(const ModeSpec& mode) {
    has_mode = true;
    mode_n = mode.n;
    mode_l = mode.l;
    mode_species = mode.species;
    mode_w0 = mode.w0;
    mode_m = mode.m;
    k = mode.k;
}

ModeSpec FieldGrid::mode() const {
    if (!has_mode) throw ValidationError("FieldGrid: no generating mode attached");
    return {mode_n, mode_l, k, mode_w0, mode_species, mode_m};
}

namespace {

json geometry_to_json(const GridGeometry& g) {
    json j{{"kind", to_string(g.kind)}, {"nx", g.nx}, {"ny", g.ny}};
    if (g.kind == GridKind::cartesian) {
        j["dx"] = g.dx;
        j["dy"] = g.dy;
    } else {
        j["r_nodes"] = g.r_nodes;
        j["r_weights"] = g.r_weights;
        j["u_scale"] = g.u_scale;
    }
    return j;
}

GridGeometry geometry_from_json(const json& j) {
    GridGeometry g;
    const std::string kind = j.at("kind");
    g.nx = j.at("nx");
    g.ny = j.at("ny");
    if (kind == "cartesian") {
        g.kind = GridKind::cartesian;
        g.dx = j.at("dx");
        g.dy = j.at("dy");
    } else if (kind == "polar-quadrature") {
        g.kind = GridKind::polar_quadrature;
        g.r_nodes = j.at("r_nodes").get<std::vector<double>>();
        g.r_weights = j.at("r_weights").get<std::vector<double>>();
        g.u_scale = j.at("u_scale");
        if (g.r_nodes.size() != static_cast<std::size_t>(g.nx) ||
            g.r_weights.size() != static_cast<std::size_t>(g.nx))
            throw ValidationError("FieldGrid sidecar: radial node/weight count mismatch");
    } else {
        throw ValidationError("FieldGrid sidecar: unknown grid kind '" + kind + "'");
    }
    return g;
}

} // namespace

void FieldGrid::save(const std::string& stem) const {
    if (values.size() != geometry.node_count())
        throw ValidationError("FieldGrid::save: value count does not match geometry");

    std::ofstream bin(stem + ".bin", std::ios::binary);
    if (!bin) throw ValidationError("FieldGrid::save: cannot open " + stem + ".bin");
    // Little-endian float64 pairs; this library targets little-endian hosts.
    bin.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(std::complex<double>)));
    if (!bin) throw ValidationError("FieldGrid::save: short write to " + stem + ".bin");

    json j{{"z", z},
           {"k", k},
           {"phase_convention", to_string(convention)}};
    j.update(geometry_to_json(geometry));
    if (has_mode) {
        j["mode"] = {{"species", to_string(mode_species)}, {"n", mode_n}, {"l", mode_l},
                     {"k", k},  {"w0", mode_w0},           {"m", mode_m}};
    }
    std::ofstream side(stem + ".json");
    side << j.dump(2) << "\n";
}

FieldGrid FieldGrid::load(const std::string& stem) {
    std::ifstream side(stem + ".json");
    if (!side) throw ValidationError("FieldGrid::load: cannot open " + stem + ".json");
    json j;
    side >> j;

    FieldGrid f;
    f.geometry = geometry_from_json(j);
    f.z = j.at("z");
    f.k = j.at("k");
    const std::string conv = j.at("phase_convention");
    if (conv == "envelope")
        f.convention = PhaseConvention::envelope;
    else if (conv == "full")
        f.convention = PhaseConvention::full;
    else
        throw ValidationError("FieldGrid sidecar: unknown phase convention '" + conv + "'");

    if (j.contains("mode")) {
        const auto& m = j["mode"];
        f.has_mode = true;
        f.mode_species = species_from_string(m.at("species"));
        f.mode_n = m.at("n");
        f.mode_l = m.at("l");
        f.mode_w0 = m.at("w0");
        f.mode_m = m.at("m");
    }

    std::ifstream bin(stem + ".bin", std::ios::binary);
    if (!bin) throw ValidationError("FieldGrid::load: cannot open " + stem + ".bin");
    f.values.resize(f.geometry.node_count());
    bin.read(reinterpret_cast<char*>(f.values.data()),
             static_cast<std::streamsize>(f.values.size() * sizeof(std::complex<double>)));
    if (bin.gcount() !=
        static_cast<std::streamsize>(f.values.size() * sizeof(std::complex<double>)))
        throw ValidationError("FieldGrid::load: raw file shorter than geometry requires");

    for (const auto& v : f.values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw ValidationError("FieldGrid::load: non-finite value in raw data");
    return f;
}

void FieldGrid::export_csv(const std::string& path) const {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw ValidationError("FieldGrid::export_csv: cannot open " + path);
    std::fprintf(fp, "x,y,re,im,abs,phase\n");
    auto row = [&](double x, double y, std::complex<double> v) {
        std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", x, y, v.real(), v.imag(),
                     std::abs(v), std::arg(v));
    };
    if (geometry.kind == GridKind::cartesian) {
        for (int iy = 0; iy < geometry.ny; ++iy)
            for (int ix = 0; ix < geometry.nx; ++ix)
                row(geometry.x(ix), geometry.y(iy), values[static_cast<std::size_t>(iy) * geometry.nx + ix]);
    } else {
        for (int ir = 0; ir < geometry.nx; ++ir)
            for (int ip = 0; ip < geometry.ny; ++ip) {
                const double r = geometry.r_nodes[ir];
                const double phi = geometry.azimuth(ip);
                row(r * std::cos(phi), r * std::sin(phi),
                    values[static_cast<std::size_t>(ir) * geometry.ny + ip]);
            }
    }
    std::fclose(fp);
}

} // namespace twistbeam
