/**
 * twistbeam — command-line front end.
 *
 * Subcommands: mode-eval, moments, vz-spectrum, velocity-map, centroid,
 * boost, noninertial, propagate, verify. Every run writes its resolved
 * parameters to <out>/run_config.json; `--config file.json` replays a run,
 * with explicit flags taking precedence. Exit codes: 0 success, 1 failed
 * verification, 2 invalid input, 3 numerical-convergence failure.
 */

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <nlohmann/json.hpp>

#include "twistbeam/errors.hpp"
#include "twistbeam/expectations.hpp"
#include "twistbeam/kinematics.hpp"
#include "twistbeam/lgfield.hpp"
#include "twistbeam/localfields.hpp"
#include "twistbeam/noninertial.hpp"
#include "twistbeam/propagator.hpp"
#include "twistbeam/units.hpp"
#include "twistbeam/verify.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace twistbeam;

namespace {

using constants::c_light;

/// Binds option variables to both CLI11 flags and JSON config keys. Config
/// values apply only where the user did not pass the flag explicitly.
class ParamSet {
public:
    explicit ParamSet(CLI::App* app) : app_(app) {}

    template <typename T>
    CLI::Option* bind(const std::string& key, T& var, const std::string& desc,
                      const std::string& extra_flags = "") {
        CLI::Option* opt = app_->add_option(flag_name(key) + extra_flags, var, desc);
        entries_.push_back({key, opt, [&var](const json& j) { var = j.get<T>(); },
                            [&var]() { return json(var); }});
        return opt;
    }

    CLI::Option* bind_flag(const std::string& key, bool& var, const std::string& desc) {
        CLI::Option* opt = app_->add_flag(flag_name(key), var, desc);
        entries_.push_back({key, opt, [&var](const json& j) { var = j.get<bool>(); },
                            [&var]() { return json(var); }});
        return opt;
    }

    void apply_config(const json& cfg) const {
        for (const auto& [key, value] : cfg.items()) {
            const auto it =
                std::find_if(entries_.begin(), entries_.end(),
                             [&key](const Entry& e) { return e.key == key; });
            if (it == entries_.end())
                throw ValidationError("config: unknown key '" + key + "'");
            if (it->opt->count() == 0) it->load(value);
        }
    }

    [[nodiscard]] json dump() const {
        json j;
        for (const auto& e : entries_) j[e.key] = e.dump();
        return j;
    }

private:
    static std::string flag_name(const std::string& key) {
        std::string flag = "--" + key;
        for (auto& c : flag)
            if (c == '_') c = '-';
        return flag;
    }

    struct Entry {
        std::string key;
        CLI::Option* opt;
        std::function<void(const json&)> load;
        std::function<json()> dump;
    };
    CLI::App* app_;
    std::vector<Entry> entries_;
};

struct CommandContext {
    std::string out = ".";
    std::string config;
    ParamSet* params = nullptr;

    [[nodiscard]] fs::path path(const std::string& name) const {
        return fs::path(out) / name;
    }
};

/// Mode-defining flags shared by most subcommands.
struct ModeArgs {
    std::string species = "photon";
    int n = 0;
    int l = 0;
    double lambda_nm = 795.0;   ///< photon wavelength input
    double energy_ev = 0.0;     ///< photon energy input (overrides lambda)
    double kinetic_ev = 0.0;    ///< electron kinetic energy input
    double k_rad_m = 0.0;       ///< direct wavenumber input (overrides all)
    double w0_um = 1000.0;
    double mass_kg = constants::electron_mass;

    void bind(ParamSet& ps) {
        ps.bind("species", species, "photon | electron");
        ps.bind("n", n, "radial quantum number");
        ps.bind("l", l, "azimuthal index (signed)");
        ps.bind("lambda_nm", lambda_nm, "photon wavelength (nm)");
        ps.bind("energy_ev", energy_ev, "photon energy (eV), overrides --lambda-nm");
        ps.bind("kinetic_ev", kinetic_ev, "electron kinetic energy (eV)");
        ps.bind("k_rad_m", k_rad_m, "wavenumber (rad/m), overrides energy inputs");
        ps.bind("w0_um", w0_um, "beam waist (um)");
        ps.bind("mass_kg", mass_kg, "electron rest mass override (kg)");
    }

    [[nodiscard]] ModeSpec mode() const {
        const Species sp = species_from_string(species);
        const double w0 = w0_um * 1e-6;
        double k = k_rad_m;
        if (k <= 0.0) {
            units::UnitState u{};
            if (sp == Species::electron)
                u = units::convert_units(units::QuantityKind::electron_kinetic_energy,
                                         constants::ev_to_joule(kinetic_ev), sp, mass_kg);
            else if (energy_ev > 0.0)
                u = units::convert_units(units::QuantityKind::photon_energy,
                                         constants::ev_to_joule(energy_ev), sp);
            else
                u = units::convert_units(units::QuantityKind::wavelength, lambda_nm * 1e-9, sp);
            k = u.k;
        }
        return sp == Species::photon ? ModeSpec::photon(n, l, k, w0)
                                     : ModeSpec::electron(n, l, k, w0, mass_kg);
    }
};

void finish_config(const CommandContext& ctx, const std::string& subcommand) {
    if (!ctx.config.empty()) {
        std::ifstream in(ctx.config);
        if (!in) throw ValidationError("cannot open config " + ctx.config);
        json cfg;
        in >> cfg;
        if (cfg.contains("subcommand") && cfg["subcommand"] != subcommand)
            throw ValidationError("config is for subcommand '" +
                                  cfg["subcommand"].get<std::string>() + "'");
        ctx.params->apply_config(cfg.value("params", json::object()));
    }
    fs::create_directories(ctx.out);
    json resolved{{"subcommand", subcommand}, {"params", ctx.params->dump()}};
    std::ofstream out(ctx.path("run_config.json"));
    out << resolved.dump(2) << "\n";
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open " + path.string());
    out << j.dump(2) << "\n";
}

// --- subcommand bodies -----------------------------------------------------

int run_mode_eval(const CommandContext& ctx, const ModeArgs& margs, double z_m, int grid,
                  double extent_w, const std::string& convention) {
    const ModeSpec mode = margs.mode();
    const double w = beam_geometry(z_m, mode).w;
    const GridGeometry g = GridGeometry::cartesian(grid, grid, extent_w * w, extent_w * w);
    const PhaseConvention conv = convention == "full" ? PhaseConvention::full
                                                      : PhaseConvention::envelope;
    const FieldGrid field = sample_grid(mode, g, z_m, conv);
    field.save(ctx.path("field").string());
    field.export_csv(ctx.path("field.csv").string());
    std::printf("sampled %dx%d grid at z = %.9g m, norm = %.12g\n", grid, grid, z_m,
                norm(field));
    return 0;
}

int run_moments(const CommandContext& ctx, const ModeArgs& margs, double z_m) {
    const ModeSpec mode = margs.mode();
    const MomentReport rep = moments(mode, z_m);
    const double flux = amplitude_flux(mode, z_m);
    const double vz = mode_vz(mode);

    std::FILE* fp = std::fopen(ctx.path("moments.csv").string().c_str(), "w");
    if (!fp) throw ValidationError("cannot open moments.csv");
    std::fprintf(fp, "quantity,analytic,numeric,abs_diff\n");
    auto row = [&](const char* name, const MomentValue& v) {
        std::fprintf(fp, "%s,%.17g,%.17g,%.17g\n", name, v.analytic, v.numeric, v.abs_diff);
    };
    row("r2_m2", rep.r2);
    row("dphi_dz_rad_m", rep.dphi_dz);
    row("pperp2_rad2_m2", rep.pperp2);
    std::fprintf(fp, "amplitude_flux,0,%.17g,%.17g\n", flux, std::fabs(flux));
    std::fprintf(fp, "vz_m_s,%.17g,,\n", vz);
    std::fclose(fp);

    std::printf("<r^2>        analytic %.12e  numeric %.12e  diff %.3e\n", rep.r2.analytic,
                rep.r2.numeric, rep.r2.abs_diff);
    std::printf("<dPhi/dz>    analytic %.12e  numeric %.12e  diff %.3e\n",
                rep.dphi_dz.analytic, rep.dphi_dz.numeric, rep.dphi_dz.abs_diff);
    std::printf("<p_perp^2>   analytic %.12e  numeric %.12e  diff %.3e\n",
                rep.pperp2.analytic, rep.pperp2.numeric, rep.pperp2.abs_diff);
    std::printf("<v_z>/c      %.15f\n", vz / c_light);
    return 0;
}

int run_vz_spectrum(const CommandContext& ctx, const ModeArgs& margs, int zeta_max) {
    const ModeSpec probe = margs.mode();  // validates the unit inputs
    const auto rows = vz_spectrum(probe.k, probe.w0, probe.species, probe.m, zeta_max);
    write_vz_spectrum_csv(rows, ctx.path("vz_spectrum.csv").string());
    std::printf("wrote %zu rows (zeta <= %d) to vz_spectrum.csv\n", rows.size(), zeta_max);
    return 0;
}

int run_velocity_map(const CommandContext& ctx, const ModeArgs& margs, double z_m, int grid,
                     double extent_w) {
    const ModeSpec mode = margs.mode();
    const double w = beam_geometry(z_m, mode).w;
    const GridGeometry g = GridGeometry::cartesian(grid, grid, extent_w * w, extent_w * w);

    const VelocityMap vp = phase_velocity_gradient(mode, g, z_m);
    const VelocityMap vg = group_velocity_map(mode, g, z_m);
    export_velocity_csv(vp, vg, ctx.path("velocity_map.csv").string());

    const RegionReport regions = classify_regions(longitudinal_velocity_map(mode, g, z_m));
    write_json(ctx.path("velocity_regions.json"),
               json{{"subluminal_nodes", regions.subluminal_count},
                    {"superluminal_nodes", regions.superluminal_count},
                    {"boundary_radius_m", regions.boundary_radius},
                    {"sqrt_zeta_w0_m", std::sqrt(double(mode.zeta())) * mode.w0}});
    std::printf("velocity maps on %dx%d grid written; dPhi/dz boundary at %.6g m\n", grid,
                grid, regions.boundary_radius);
    return 0;
}

int run_centroid(const CommandContext& ctx, const ModeArgs& margs) {
    const ModeSpec mode = margs.mode();
    const CentroidState state = mode.species == Species::photon ? photon_centroid(mode)
                                                                : electron_centroid(mode);
    json j = state;
    j["vz_over_c"] = state.vz() / c_light;
    j["pz_linear_kg_m_s"] = centroid_pz_linear(mode);
    j["mass_c2_over_E"] = state.M * c_light * c_light / state.E;
    write_json(ctx.path("centroid.json"), j);
    std::printf("E = %.9e J, pz = %.9e kg m/s, M = %.9e kg, Mc^2/E = %.6g\n", state.E,
                state.p.z(), state.M, state.M * c_light * c_light / state.E);
    return 0;
}

int run_boost(const CommandContext& ctx, const std::string& state_file,
              const std::vector<double>& velocity) {
    if (velocity.size() != 3)
        throw ValidationError("boost: --velocity needs exactly 3 components (m/s)");
    const CentroidState state = load_json(state_file).get<CentroidState>();
    const BoostSpec spec(Eigen::Vector3d(velocity[0], velocity[1], velocity[2]));
    const CentroidState out = boost(state, spec);
    write_json(ctx.path("boosted.json"), json(out));
    std::printf("E' = %.9e J, |p'| = %.9e kg m/s, M = %.9e kg\n", out.E, out.p.norm(), out.M);
    return 0;
}

int run_noninertial(const CommandContext& ctx, const ModeArgs& margs,
                    const std::vector<double>& accel, const std::vector<double>& omega,
                    double t_span, double dt, bool compare_point_mass) {
    if (accel.size() != 3 || omega.size() != 3)
        throw ValidationError("noninertial: --accel and --omega need 3 components");
    const ModeSpec mode = margs.mode();
    const NoninertialFrame frame = NoninertialFrame::constant(
        {accel[0], accel[1], accel[2]}, {omega[0], omega[1], omega[2]});

    const CentroidState state = mode.species == Species::photon ? photon_centroid(mode)
                                                                : electron_centroid(mode);
    const CentroidModel model = CentroidModel::from_state(state);
    const Trajectory traj = integrate({0, 0, 0}, state.p, model, frame, 0.0, t_span, dt);
    traj.export_csv(ctx.path("trajectory.csv").string());
    std::printf("integrated %zu samples over %.6g s\n", traj.samples.size(), t_span);

    if (compare_point_mass) {
        const double dev = inertial_mass_equivalence(mode, frame, t_span, dt);
        write_json(ctx.path("equivalence.json"), json{{"max_relative_deviation", dev}});
        std::printf("twisted-centroid vs point-mass deviation: %.3e\n", dev);
    }
    return 0;
}

int run_propagate(const CommandContext& ctx, const ModeArgs& margs,
                  const std::string& input_stem, double z_target_zr, double z_target_m,
                  int grid, double extent_w, double dz_zr) {
    FieldGrid field;
    ModeSpec mode = margs.mode();
    bool have_mode = true;
    if (!input_stem.empty()) {
        field = FieldGrid::load(input_stem);
        have_mode = field.has_mode;
        if (have_mode) mode = field.mode();
    }

    double zr;
    if (have_mode) {
        zr = mode.rayleigh_length();
    } else if (field.k > 0.0) {
        // external structured input: base the step on the grid Fresnel scale
        zr = 0.5 * field.k * std::pow(0.25 * field.geometry.extent_x(), 2);
    } else {
        throw ValidationError("propagate: input field carries no wavenumber");
    }
    const double z_target = z_target_m != 0.0 ? z_target_m : z_target_zr * zr;

    if (input_stem.empty()) {
        const double w_max = beam_geometry(z_target, mode).w;
        const GridGeometry g =
            GridGeometry::cartesian(grid, grid, extent_w * w_max, extent_w * w_max);
        field = sample_grid(mode, g, 0.0, PhaseConvention::envelope);
    }

    const PropagationPlan plan(field.geometry, field.k, dz_zr * zr);
    const FieldGrid out = propagate(field, plan, z_target);
    out.save(ctx.path("field_out").string());
    std::printf("propagated from z = %.9g m to z = %.9g m; norm %.12g -> %.12g\n", field.z,
                out.z, norm(field), norm(out));
    if (have_mode) {
        const double fid = fidelity(out, mode);
        write_json(ctx.path("fidelity.json"), json{{"fidelity", fid}});
        std::printf("fidelity against the analytic mode: %.12g\n", fid);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"twisted-beam kinematics and field toolbox"};
    app.require_subcommand(1);

    struct Sub {
        CLI::App* cmd;
        CommandContext ctx;
        ParamSet params;
        std::function<int()> run;
        Sub(CLI::App* c) : cmd(c), params(c) {}
    };
    std::vector<std::unique_ptr<Sub>> subs;

    auto add = [&](const std::string& name, const std::string& desc) -> Sub& {
        auto sub = std::make_unique<Sub>(app.add_subcommand(name, desc));
        sub->ctx.params = &sub->params;
        sub->cmd->add_option("--out", sub->ctx.out, "output directory");
        sub->cmd->add_option("--config", sub->ctx.config, "JSON config replaying a run");
        subs.push_back(std::move(sub));
        return *subs.back();
    };

    {
        auto& s = add("mode-eval", "sample a Laguerre-Gauss mode on a grid");
        auto margs = std::make_shared<ModeArgs>();
        auto z = std::make_shared<double>(0.0);
        auto grid = std::make_shared<int>(256);
        auto extent = std::make_shared<double>(8.0);
        auto conv = std::make_shared<std::string>("envelope");
        margs->bind(s.params);
        s.params.bind("z_m", *z, "plane (m)", ",--z");
        s.params.bind("grid", *grid, "nodes per side");
        s.params.bind("extent_w", *extent, "extent in units of w(z)");
        s.params.bind("phase_convention", *conv, "envelope | full");
        s.run = [&s, margs, z, grid, extent, conv] {
            return run_mode_eval(s.ctx, *margs, *z, *grid, *extent, *conv);
        };
    }
    {
        auto& s = add("moments", "moments: closed forms vs quadrature");
        auto margs = std::make_shared<ModeArgs>();
        auto z = std::make_shared<double>(0.0);
        margs->bind(s.params);
        s.params.bind("z_m", *z, "plane (m)", ",--z");
        s.run = [&s, margs, z] { return run_moments(s.ctx, *margs, *z); };
    }
    {
        auto& s = add("vz-spectrum", "quantized velocity/mass table");
        auto margs = std::make_shared<ModeArgs>();
        auto zeta_max = std::make_shared<int>(10);
        margs->bind(s.params);
        s.params.bind("zeta_max", *zeta_max, "largest mode weight");
        s.run = [&s, margs, zeta_max] { return run_vz_spectrum(s.ctx, *margs, *zeta_max); };
    }
    {
        auto& s = add("velocity-map", "local phase/group velocity maps");
        auto margs = std::make_shared<ModeArgs>();
        auto z = std::make_shared<double>(0.0);
        auto grid = std::make_shared<int>(256);
        auto extent = std::make_shared<double>(10.0);
        margs->bind(s.params);
        s.params.bind("z_m", *z, "plane (m)", ",--z");
        s.params.bind("grid", *grid, "nodes per side");
        s.params.bind("extent_w", *extent, "extent in units of w(z)");
        s.run = [&s, margs, z, grid, extent] {
            return run_velocity_map(s.ctx, *margs, *z, *grid, *extent);
        };
    }
    {
        auto& s = add("centroid", "semiclassical centroid state");
        auto margs = std::make_shared<ModeArgs>();
        margs->bind(s.params);
        s.run = [&s, margs] { return run_centroid(s.ctx, *margs); };
    }
    {
        auto& s = add("boost", "Lorentz-boost a centroid state");
        auto state_file = std::make_shared<std::string>();
        auto velocity = std::make_shared<std::vector<double>>();
        s.params.bind("state", *state_file, "centroid JSON file");
        s.params.bind("velocity", *velocity, "boost velocity Vx Vy Vz (m/s)")->expected(3);
        s.run = [&s, state_file, velocity] {
            return run_boost(s.ctx, *state_file, *velocity);
        };
    }
    {
        auto& s = add("noninertial", "integrate centroid motion in a noninertial frame");
        auto margs = std::make_shared<ModeArgs>();
        auto accel = std::make_shared<std::vector<double>>(std::vector<double>{0, 0, 0});
        auto omega = std::make_shared<std::vector<double>>(std::vector<double>{0, 0, 0});
        auto t_span = std::make_shared<double>(1.0);
        auto dt = std::make_shared<double>(1e-3);
        auto compare = std::make_shared<bool>(false);
        margs->bind(s.params);
        s.params.bind("accel", *accel, "frame acceleration ax ay az (m/s^2)")->expected(3);
        s.params.bind("omega", *omega, "frame angular velocity wx wy wz (rad/s)")
            ->expected(3);
        s.params.bind("t_span", *t_span, "integration span (s)");
        s.params.bind("dt", *dt, "RK4 step (s)");
        s.params.bind_flag("compare_point_mass", *compare,
                           "also integrate the equivalent point mass");
        s.run = [&s, margs, accel, omega, t_span, dt, compare] {
            return run_noninertial(s.ctx, *margs, *accel, *omega, *t_span, *dt, *compare);
        };
    }
    {
        auto& s = add("propagate", "spectral propagation of a field");
        auto margs = std::make_shared<ModeArgs>();
        auto input = std::make_shared<std::string>();
        auto z_zr = std::make_shared<double>(1.0);
        auto z_m = std::make_shared<double>(0.0);
        auto grid = std::make_shared<int>(512);
        auto extent = std::make_shared<double>(12.0);
        auto dz = std::make_shared<double>(5e-3);
        margs->bind(s.params);
        s.params.bind("input", *input, "raw-grid stem to load instead of sampling a mode");
        s.params.bind("z_target_zr", *z_zr, "target plane (units of zR)");
        s.params.bind("z_target_m", *z_m, "target plane (m), overrides --z-target-zr");
        s.params.bind("grid", *grid, "nodes per side");
        s.params.bind("extent_w", *extent, "extent in units of w(z_target)");
        s.params.bind("dz_zr", *dz, "plan step (units of zR)");
        s.run = [&s, margs, input, z_zr, z_m, grid, extent, dz] {
            return run_propagate(s.ctx, *margs, *input, *z_zr, *z_m, *grid, *extent, *dz);
        };
    }
    {
        auto& s = add("verify", "run the full cross-oracle verification suite");
        s.run = [] { return verify::print_acceptance_table(std::cout); };
    }

    try {
        app.parse(argc, argv);
        for (auto& sub : subs)
            if (sub->cmd->parsed()) {
                if (sub->cmd->get_name() != "verify")
                    finish_config(sub->ctx, sub->cmd->get_name());
                else
                    fs::create_directories(sub->ctx.out);
                const int rc = sub->run();
                return rc == 0 ? 0 : 1;
            }
        return 2;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "twistbeam: error: " << e.what() << "\n";
        return 2;
    } catch (const ConvergenceError& e) {
        std::cerr << "twistbeam: numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "twistbeam: error: " << e.what() << "\n";
        return 2;
    }
}
