#pragma once

#include "casimir/atom_plate.hpp"
#include "casimir/dielectric.hpp"
#include "casimir/plate_plate.hpp"

#include <map>
#include <string>
#include <vector>

namespace casimir {

// Plain-text configuration: [section] headers over key = value lines,
// '#' comments, blank lines ignored. Keys keep declaration order so that
// numbered lists (osc.1, osc.2, ...) round-trip predictably. Parse and
// lookup failures throw ConfigError naming the file, line and key.
class ConfigFile {
  public:
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_string(const std::string& text,
                                   const std::string& origin);

    bool has_section(const std::string& section) const;
    bool has(const std::string& section, const std::string& key) const;
    const std::string& get(const std::string& section,
                           const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;
    double get_number(const std::string& section, const std::string& key) const;
    double get_number_or(const std::string& section, const std::string& key,
                         double fallback) const;

    std::vector<std::string> sections() const;
    std::vector<std::string> keys(const std::string& section) const;
    const std::string& origin() const { return origin_; }
    // directory of the config file, for resolving relative data paths
    std::string directory() const;

    // 64-bit FNV-1a of the raw file text; identifies the resolved config in
    // output manifests.
    unsigned long long content_hash() const { return hash_; }

  private:
    struct Entry {
        std::string value;
        int line;
    };
    std::string origin_;
    unsigned long long hash_ = 0;
    std::map<std::string, std::map<std::string, Entry>> data_;
    std::map<std::string, std::vector<std::string>> order_;
    const Entry& entry(const std::string& section, const std::string& key) const;
};

// Builds a permittivity model from [material <name>] keys:
//   core = constant | oscillators | ideal_metal
//   eps0 = <value>                       (constant core)
//   osc.N.strength / osc.N.frequency     (oscillator core; rad/s)
//   plasma.N.wp                          (rad/s)
//   drude.N.wp / drude.N.gamma           (rad/s)
//   carrier.law = constant | arrhenius | tabulated
//   carrier.n_ref                        (m^-3)
//   carrier.activation_ev                (eV, arrhenius)
//   carrier.mobility                     (m^2/(V s))
//   carrier.mobility_exponent
//   carrier.table = <csv path>           (T in K, n in cm^-3)
DielectricModel load_material(const ConfigFile& cfg, const std::string& name);

// [atom <name>]: alpha0 (m^3), beta.
AtomModel load_atom(const ConfigFile& cfg, const std::string& name);

// [experiment]: sphere_radius_um, temperature, separations_nm (comma list),
// sphere / plate_dark / plate_bright (material names in the same file),
// bright_carriers (m^-3).
ExperimentConfig load_experiment(const ConfigFile& cfg);

// First [atom]/[material] section of the file, for commands that need one
// of each.
std::string first_section_with_prefix(const ConfigFile& cfg,
                                      const std::string& prefix);

// Resolves a --config argument: used as-is when it exists or is absolute,
// otherwise looked up under $CASIMIR_LAB_CONFIG_DIR.
std::string resolve_config_path(const std::string& arg);

} // namespace casimir
