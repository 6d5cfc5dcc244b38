#include <CLI11.hpp>
#include <json.hpp>

#include "casimir/atom_plate.hpp"
#include "casimir/config.hpp"
#include "casimir/constants.hpp"
#include "casimir/plate_plate.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace casimir;
using nlohmann::json;

namespace {

// stdout by default, or a file given --out; numbers at full precision so a
// rerun with identical inputs is byte-identical
struct Sink {
    std::ofstream file;
    std::ostream* os = &std::cout;

    void open(const std::string& path) {
        if (path.empty())
            return;
        file.open(path);
        if (!file)
            throw ConfigError("cannot write output file '" + path + "'");
        os = &file;
    }
    std::ostream& stream() {
        os->precision(17);
        return *os;
    }
};

std::string hash_hex(unsigned long long h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", h);
    return buf;
}

// every csv starts with the run's provenance; wall time goes to stderr so
// the payload stays reproducible
void write_manifest(std::ostream& os, const std::string& cmdline,
                    const ConfigFile* cfg, double tol_rel) {
    os.precision(17);
    os << "# casimir-lab" << cmdline << "\n";
    if (cfg)
        os << "# config: " << cfg->origin()
           << " fnv1a=" << hash_hex(cfg->content_hash()) << "\n";
    os << "# constants: hbar=" << kHbar << " c=" << kLightSpeed
       << " k_B=" << kBoltzmann << "\n";
    os << "# tolerance: rel=" << tol_rel << "\n";
}

json manifest_json(const std::string& cmdline, const ConfigFile* cfg,
                   double tol_rel) {
    json j;
    j["command"] = "casimir-lab" + cmdline;
    if (cfg)
        j["config"] = {{"path", cfg->origin()},
                       {"fnv1a", hash_hex(cfg->content_hash())}};
    j["tolerance_rel"] = tol_rel;
    j["constants"] = {
        {"hbar", kHbar}, {"c", kLightSpeed}, {"k_B", kBoltzmann}};
    return j;
}

DcPolicy parse_policy(const std::string& s) {
    if (s == "neglect-dc")
        return DcPolicy::neglect_dc;
    if (s == "include-dc")
        return DcPolicy::include_dc;
    if (s == "screened")
        return DcPolicy::screened;
    throw ConfigError("unknown policy '" + s +
                      "' (expected neglect-dc, include-dc or screened)");
}

// "MIN:MAX:N" -> N geometrically spaced values
std::vector<double> parse_grid(const std::string& spec) {
    double lo = 0.0, hi = 0.0;
    int n = 0;
    char tail = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%d%c", &lo, &hi, &n, &tail) != 3)
        throw ConfigError("bad grid '" + spec + "' (want MIN:MAX:N)");
    if (!(lo > 0.0) || hi < lo || n < 1)
        throw ConfigError("bad grid '" + spec +
                          "' (need 0 < MIN <= MAX and N >= 1)");
    std::vector<double> g;
    if (n == 1) {
        g.push_back(lo);
        return g;
    }
    const double ratio = std::pow(hi / lo, 1.0 / (n - 1));
    for (int i = 0; i < n; ++i)
        g.push_back(lo * std::pow(ratio, i));
    return g;
}

struct MaterialAtom {
    DielectricModel plate;
    AtomModel atom;
    ConfigFile cfg;
};

MaterialAtom load_material_atom(const std::string& config_arg) {
    auto cfg = ConfigFile::parse_file(resolve_config_path(config_arg));
    MaterialAtom ma{
        load_material(cfg, first_section_with_prefix(cfg, "material ")),
        load_atom(cfg, first_section_with_prefix(cfg, "atom ")), cfg};
    return ma;
}

int run(int argc, char** argv) {
    CLI::App app{"thermal Casimir and Casimir-Polder laboratory"};
    app.require_subcommand(1);

    std::ostringstream cmdline;
    for (int i = 1; i < argc; ++i)
        cmdline << ' ' << argv[i];
    const std::string cmd = cmdline.str();

    std::string out, config_arg, policy_str = "neglect-dc";
    double tol_rel = 1e-10;

    auto add_common = [&](CLI::App* c, bool with_config) {
        c->add_option("--out", out, "write to this file instead of stdout");
        c->add_option("--tol", tol_rel, "relative tolerance")
            ->check(CLI::PositiveNumber);
        if (with_config)
            c->add_option("--config", config_arg,
                          "config file (also looked up under "
                          "$CASIMIR_LAB_CONFIG_DIR)")
                ->required();
    };
    auto add_policy = [&](CLI::App* c) {
        c->add_option("--policy", policy_str,
                      "zero-frequency prescription: neglect-dc, include-dc "
                      "or screened");
    };

    // cd-table
    std::vector<double> eps_list = {1.5, 2.0, 3.81, 7.0, 11.67, 16.0, 30.0,
                                    100.0};
    auto* cd = app.add_subcommand(
        "cd-table",
        "cubic low-temperature coefficient of the free energy vs eps0");
    cd->add_option("--eps", eps_list, "static permittivities")
        ->delimiter(',');
    add_common(cd, false);
    cd->callback([&] {
        Sink sink;
        sink.open(out);
        auto& os = sink.stream();
        write_manifest(os, cmd, nullptr, tol_rel);
        os << "eps0,cd\n";
        for (double e : eps_list) {
            const double cd = cd_coefficient(e); // may throw; keep rows whole
            os << e << ',' << cd << '\n';
        }
    });

    // sweep
    std::string grid_spec;
    double temperature = 300.0;
    auto* sw = app.add_subcommand(
        "sweep", "atom-plate free energy, thermal part and entropy vs "
                 "separation");
    add_common(sw, true);
    add_policy(sw);
    sw->add_option("--grid", grid_spec, "separations in nm, MIN:MAX:N")
        ->required();
    sw->add_option("--temperature", temperature, "K")
        ->check(CLI::PositiveNumber);
    sw->callback([&] {
        const auto ma = load_material_atom(config_arg);
        const auto policy = parse_policy(policy_str);
        const auto grid = parse_grid(grid_spec);
        const Tolerance tol{tol_rel};
        Sink sink;
        sink.open(out);
        auto& os = sink.stream();
        write_manifest(os, cmd, &ma.cfg, tol_rel);
        os << "separation_nm,free_energy_J,thermal_correction_J,"
              "entropy_J_per_K\n";
        for (double nm : grid) {
            const double a = nm * 1e-9;
            os << nm << ',' << free_energy(a, temperature, ma.atom, ma.plate,
                                           policy, tol)
               << ','
               << thermal_correction(a, temperature, ma.atom, ma.plate,
                                     policy, tol)
               << ','
               << entropy(a, temperature, ma.atom, ma.plate, policy, tol)
               << '\n';
        }
    });

    // nernst
    double separation_nm = 200.0, t_min = 1e-4, t_max = 1e-1;
    int t_points = 16;
    auto* ne = app.add_subcommand(
        "nernst", "low-temperature entropy verdict for one prescription");
    add_common(ne, true);
    add_policy(ne);
    ne->add_option("--separation-nm", separation_nm, "plate distance")
        ->check(CLI::PositiveNumber);
    ne->add_option("--tmin", t_min, "grid start, units of T_eff");
    ne->add_option("--tmax", t_max, "grid end, units of T_eff");
    ne->add_option("--tpoints", t_points, "grid size");
    ne->callback([&] {
        const auto ma = load_material_atom(config_arg);
        const auto policy = parse_policy(policy_str);
        const double a = separation_nm * 1e-9;
        const auto grid = default_nernst_grid(a, t_min, t_max, t_points);
        const auto v = nernst_test(a, ma.atom, ma.plate, policy, grid,
                                   Tolerance{tol_rel});
        json j = manifest_json(cmd, &ma.cfg, tol_rel);
        j["policy"] = policy_str;
        j["separation_nm"] = separation_nm;
        j["temperatures_K"] = v.temperatures_used;
        j["residual_entropy_J_per_K"] = v.residual_entropy;
        j["predicted_residual_J_per_K"] = v.predicted_residual;
        j["extrapolation_error_J_per_K"] = v.extrapolation_error;
        j["exponent"] = v.exponent; // NaN serializes as null
        j["classification"] = v.classification == NernstClass::consistent
                                  ? "consistent"
                                  : "violating";
        Sink sink;
        sink.open(out);
        sink.stream() << j.dump(2) << '\n';
    });

    // diff-force
    auto* df = app.add_subcommand(
        "diff-force",
        "sphere-plate force difference between bright and dark plate phases");
    add_common(df, true);
    add_policy(df);
    df->callback([&] {
        auto cfg = ConfigFile::parse_file(resolve_config_path(config_arg));
        const auto exp = load_experiment(cfg);
        const auto policy = parse_policy(policy_str);
        const auto rows = difference_force(exp, policy, Tolerance{tol_rel});
        Sink sink;
        sink.open(out);
        auto& os = sink.stream();
        write_manifest(os, cmd, &cfg, tol_rel);
        os << "separation_nm,force_dark_pN,force_bright_pN,delta_pN\n";
        for (const auto& r : rows)
            os << r.separation * 1e9 << ',' << r.force_dark * 1e12 << ','
               << r.force_bright * 1e12 << ',' << r.delta * 1e12 << '\n';
    });

    // au-check
    auto* au = app.add_subcommand(
        "au-check", "sensitivity of the sphere-plate force to screening the "
                    "metal side's zero-frequency term");
    add_common(au, true);
    au->callback([&] {
        auto cfg = ConfigFile::parse_file(resolve_config_path(config_arg));
        const auto exp = load_experiment(cfg);
        const double dev = au_zero_frequency_check(exp, Tolerance{tol_rel});
        json j = manifest_json(cmd, &cfg, tol_rel);
        j["max_relative_deviation"] = dev;
        std::vector<double> nm;
        for (double a : exp.separations)
            nm.push_back(a * 1e9);
        j["separations_nm"] = nm;
        Sink sink;
        sink.open(out);
        sink.stream() << j.dump(2) << '\n';
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // usage errors count as config errors
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    const auto start = std::chrono::steady_clock::now();
    int rc;
    try {
        rc = run(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return 3;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << '\n';
        return 4;
    }
    const std::chrono::duration<double> dt =
        std::chrono::steady_clock::now() - start;
    std::cerr << "# wall: " << dt.count() << " s\n";
    return rc;
}
