#pragma once

#include <stdexcept>
#include <string>

namespace casimir {

// CODATA 2018 values, SI. Fixed at build time; echoed into output headers
// so that result files are self-describing.
struct PhysicalConstants {
    double hbar = 1.054571817e-34;        // J s
    double c = 299792458.0;               // m/s
    double k_B = 1.380649e-23;            // J/K
    double e_charge = 1.602176634e-19;    // C
    double eps_vacuum = 8.8541878128e-12; // F/m
};

inline constexpr double kHbar = 1.054571817e-34;
inline constexpr double kLightSpeed = 299792458.0;
inline constexpr double kBoltzmann = 1.380649e-23;
inline constexpr double kElementaryCharge = 1.602176634e-19;
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;
inline constexpr double kElectronMass = 9.1093837015e-31; // kg

inline const PhysicalConstants& constants() {
    static const PhysicalConstants c;
    return c;
}

// Error taxonomy shared by all modules. The CLI maps these to distinct
// exit codes (config=2, domain=3, convergence=4).
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class DomainError : public std::runtime_error {
  public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

class ConvergenceError : public std::runtime_error {
  public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace casimir
