#include "casimir/config.hpp"

#include "casimir/constants.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace casimir {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

unsigned long long fnv1a(const std::string& text) {
    unsigned long long h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
}

ConfigFile ConfigFile::parse_string(const std::string& text,
                                    const std::string& origin) {
    ConfigFile cfg;
    cfg.origin_ = origin;
    cfg.hash_ = fnv1a(text);

    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find('#');
        if (comment != std::string::npos)
            line = line.substr(0, comment);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": empty section name");
            cfg.data_[section]; // section may legally stay empty
            cfg.order_[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected 'key = value'");
        if (section.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": key outside any [section]");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": empty key");
        if (cfg.data_[section].count(key))
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": duplicate key '" + key + "' in [" + section +
                              "]");
        cfg.data_[section][key] = {value, lineno};
        cfg.order_[section].push_back(key);
    }
    return cfg;
}

bool ConfigFile::has_section(const std::string& section) const {
    return data_.count(section) != 0;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    auto it = data_.find(section);
    return it != data_.end() && it->second.count(key) != 0;
}

const ConfigFile::Entry& ConfigFile::entry(const std::string& section,
                                           const std::string& key) const {
    auto it = data_.find(section);
    if (it == data_.end())
        throw ConfigError(origin_ + ": missing section [" + section + "]");
    auto kt = it->second.find(key);
    if (kt == it->second.end())
        throw ConfigError(origin_ + ": missing key '" + key + "' in [" +
                          section + "]");
    return kt->second;
}

const std::string& ConfigFile::get(const std::string& section,
                                   const std::string& key) const {
    return entry(section, key).value;
}

std::string ConfigFile::get_or(const std::string& section,
                               const std::string& key,
                               const std::string& fallback) const {
    return has(section, key) ? get(section, key) : fallback;
}

double ConfigFile::get_number(const std::string& section,
                              const std::string& key) const {
    const Entry& e = entry(section, key);
    try {
        size_t used = 0;
        const double v = std::stod(e.value, &used);
        if (used != e.value.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(origin_ + ":" + std::to_string(e.line) + ": key '" +
                          key + "' is not a number: '" + e.value + "'");
    }
}

double ConfigFile::get_number_or(const std::string& section,
                                 const std::string& key,
                                 double fallback) const {
    return has(section, key) ? get_number(section, key) : fallback;
}

std::vector<std::string> ConfigFile::sections() const {
    std::vector<std::string> out;
    for (const auto& [name, _] : data_)
        out.push_back(name);
    return out;
}

std::vector<std::string> ConfigFile::keys(const std::string& section) const {
    auto it = order_.find(section);
    if (it == order_.end())
        throw ConfigError(origin_ + ": missing section [" + section + "]");
    return it->second;
}

std::string ConfigFile::directory() const {
    return std::filesystem::path(origin_).parent_path().string();
}

namespace {

CarrierModel load_carriers(const ConfigFile& cfg, const std::string& section,
                           const std::string& dir) {
    CarrierModel c;
    const std::string law = cfg.get_or(section, "carrier.law", "constant");
    if (law == "constant")
        c.law = CarrierLaw::constant;
    else if (law == "arrhenius")
        c.law = CarrierLaw::arrhenius;
    else if (law == "tabulated")
        c.law = CarrierLaw::tabulated;
    else
        throw ConfigError(cfg.origin() + ": [" + section +
                          "] carrier.law must be constant, arrhenius or "
                          "tabulated, got '" + law + "'");

    c.n_ref = cfg.get_number_or(section, "carrier.n_ref", 0.0);
    c.activation =
        cfg.get_number_or(section, "carrier.activation_ev", 0.0) *
        kElementaryCharge;
    c.mobility_ref = cfg.get_number_or(section, "carrier.mobility", 0.0);
    c.mobility_exponent =
        cfg.get_number_or(section, "carrier.mobility_exponent", 0.0);
    if (c.n_ref < 0.0 || c.activation < 0.0)
        throw ConfigError(cfg.origin() + ": [" + section +
                          "] carrier density and activation must be >= 0");

    if (c.law == CarrierLaw::tabulated) {
        const std::string rel = cfg.get(section, "carrier.table");
        const auto path = std::filesystem::path(dir) / rel;
        std::ifstream in(path);
        if (!in)
            throw ConfigError(cfg.origin() + ": [" + section +
                              "] cannot open carrier table '" + path.string() +
                              "'");
        std::string line;
        while (std::getline(in, line)) {
            line = trim(line);
            if (line.empty() || line.front() == '#')
                continue;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream row(line);
            double T, n_cm3;
            if (!(row >> T >> n_cm3))
                throw ConfigError(path.string() +
                                  ": expected 'T_K, n_cm3' rows");
            c.table.emplace_back(T, n_cm3 * 1e6); // cm^-3 -> m^-3
        }
        if (c.table.size() < 2)
            throw ConfigError(path.string() + ": need at least two rows");
    }
    return c;
}

bool has_any_with_prefix(const ConfigFile& cfg, const std::string& section,
                         const std::string& prefix) {
    for (const auto& k : cfg.keys(section))
        if (k.rfind(prefix, 0) == 0)
            return true;
    return false;
}

} // namespace

DielectricModel load_material(const ConfigFile& cfg, const std::string& name) {
    const std::string section = "material " + name;
    if (!cfg.has_section(section))
        throw ConfigError(cfg.origin() + ": no [" + section + "] section");

    DielectricModel m;
    m.name = name;
    const std::string core = cfg.get(section, "core");
    if (core == "constant") {
        m.core = CoreKind::constant;
        m.eps0 = cfg.get_number(section, "eps0");
        if (m.eps0 < 1.0)
            throw ConfigError(cfg.origin() + ": [" + section +
                              "] eps0 must be >= 1");
    } else if (core == "oscillators") {
        m.core = CoreKind::oscillators;
        for (int i = 1;; ++i) {
            const std::string base = "osc." + std::to_string(i) + ".";
            if (!cfg.has(section, base + "strength"))
                break;
            Oscillator o;
            o.strength = cfg.get_number(section, base + "strength");
            o.frequency = cfg.get_number(section, base + "frequency");
            if (o.strength < 0.0 || o.frequency <= 0.0)
                throw ConfigError(cfg.origin() + ": [" + section + "] " + base +
                                  "* must have strength >= 0, frequency > 0");
            m.oscillators.push_back(o);
        }
        if (m.oscillators.empty())
            throw ConfigError(cfg.origin() + ": [" + section +
                              "] oscillator core without osc.1.* keys");
    } else if (core == "ideal_metal") {
        m.core = CoreKind::ideal_metal;
    } else {
        throw ConfigError(cfg.origin() + ": [" + section +
                          "] core must be constant, oscillators or "
                          "ideal_metal, got '" + core + "'");
    }

    for (int i = 1;; ++i) {
        const std::string key = "plasma." + std::to_string(i) + ".wp";
        if (!cfg.has(section, key))
            break;
        const double wp = cfg.get_number(section, key);
        if (wp <= 0.0)
            throw ConfigError(cfg.origin() + ": [" + section + "] " + key +
                              " must be > 0");
        m.plasma_terms.push_back(wp);
    }
    for (int i = 1;; ++i) {
        const std::string base = "drude." + std::to_string(i) + ".";
        if (!cfg.has(section, base + "wp"))
            break;
        DrudeTerm d;
        d.omega_p = cfg.get_number(section, base + "wp");
        d.gamma = cfg.get_number(section, base + "gamma");
        if (d.omega_p <= 0.0 || d.gamma <= 0.0)
            throw ConfigError(cfg.origin() + ": [" + section + "] " + base +
                              "* must have wp > 0, gamma > 0");
        m.drude_terms.push_back(d);
    }

    if (has_any_with_prefix(cfg, section, "carrier."))
        m.dc_term = load_carriers(cfg, section, cfg.directory());
    return m;
}

AtomModel load_atom(const ConfigFile& cfg, const std::string& name) {
    const std::string section = "atom " + name;
    if (!cfg.has_section(section))
        throw ConfigError(cfg.origin() + ": no [" + section + "] section");
    AtomModel atom;
    atom.alpha0 = cfg.get_number(section, "alpha0");
    atom.beta_A = cfg.get_number(section, "beta");
    if (!(atom.alpha0 > 0.0))
        throw ConfigError(cfg.origin() + ": [" + section +
                          "] alpha0 must be > 0");
    if (atom.beta_A < 0.0)
        throw ConfigError(cfg.origin() + ": [" + section +
                          "] beta must be >= 0");
    return atom;
}

ExperimentConfig load_experiment(const ConfigFile& cfg) {
    const std::string s = "experiment";
    if (!cfg.has_section(s))
        throw ConfigError(cfg.origin() + ": no [experiment] section");
    ExperimentConfig e;
    e.sphere_radius = cfg.get_number(s, "sphere_radius_um") * 1e-6;
    e.temperature = cfg.get_number(s, "temperature");

    std::istringstream seps(cfg.get(s, "separations_nm"));
    std::string tok;
    while (std::getline(seps, tok, ',')) {
        tok = trim(tok);
        if (tok.empty())
            continue;
        try {
            e.separations.push_back(std::stod(tok) * 1e-9);
        } catch (const std::exception&) {
            throw ConfigError(cfg.origin() +
                              ": separations_nm entry is not a number: '" +
                              tok + "'");
        }
    }

    e.sphere_material = load_material(cfg, cfg.get(s, "sphere"));
    e.plate_dark = load_material(cfg, cfg.get(s, "plate_dark"));
    e.plate_bright = load_material(cfg, cfg.get(s, "plate_bright"));
    e.bright_carrier_density = cfg.get_number(s, "bright_carriers");
    e.validate();
    return e;
}

std::string first_section_with_prefix(const ConfigFile& cfg,
                                      const std::string& prefix) {
    for (const auto& s : cfg.sections())
        if (s.rfind(prefix, 0) == 0)
            return s.substr(prefix.size());
    throw ConfigError(cfg.origin() + ": no [" + prefix + "...] section");
}

std::string resolve_config_path(const std::string& arg) {
    namespace fs = std::filesystem;
    if (fs::exists(arg))
        return arg;
    if (!fs::path(arg).is_absolute()) {
        if (const char* dir = std::getenv("CASIMIR_LAB_CONFIG_DIR")) {
            const auto candidate = fs::path(dir) / arg;
            if (fs::exists(candidate))
                return candidate.string();
        }
    }
    throw ConfigError("config file not found: '" + arg +
                      "' (also searched $CASIMIR_LAB_CONFIG_DIR)");
}

} // namespace casimir
