#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace casimir {

enum class CarrierLaw { constant, arrhenius, tabulated };

// Free charge carriers of a material. n(T) feeds both the dc conductivity
// sigma0 = n|e|mu and the Debye screening parameter; only n enters the
// screening coefficient (the mobility asymmetry is intentional).
struct CarrierModel {
    CarrierLaw law = CarrierLaw::constant;
    double n_ref = 0.0;      // carriers/m^3
    double activation = 0.0; // J; n(T) = n_ref * exp(-activation/(2 k_B T))
    double mobility_ref = 0.0;      // m^2/(V s), at 300 K
    double mobility_exponent = 0.0; // mu(T) = mobility_ref * (T/300)^exponent
    std::vector<std::pair<double, double>> table; // (T in K, n in m^-3)
};

// n(T) and dn/dT. Analytic for constant/arrhenius; monotone cubic for
// tabulated data, which throws outside the tabulated T range.
std::pair<double, double> carrier_density(const CarrierModel& carriers,
                                          double T);

// sigma0(T) = n(T) |e| mu(T), SI (S/m).
double dc_conductivity(const CarrierModel& carriers, double T);

// Debye screening parameter, SI: kappa = sqrt(e^2 n(T) / (eps0 eps_vac k_B T)).
// kappa = 0 when n(T) = 0.
double debye_kappa(const CarrierModel& carriers, double eps0, double T);

enum class CoreKind { constant, oscillators, ideal_metal };

struct Oscillator {
    double strength;  // dimensionless C_j
    double frequency; // rad/s
};

struct DrudeTerm {
    double omega_p; // rad/s
    double gamma;   // rad/s
};

// Permittivity along the imaginary frequency axis: a core (constant value,
// oscillator sum, or the ideal-metal bypass) plus optional additive terms.
// The dc term enters permittivity_iw queries but never the l >= 1 Matsubara
// reflection coefficients; the competing zero-frequency prescriptions own
// that physics.
struct DielectricModel {
    CoreKind core = CoreKind::constant;
    double eps0 = 1.0;                   // core = constant
    std::vector<Oscillator> oscillators; // core = oscillators
    std::optional<CarrierModel> dc_term;
    std::vector<double> plasma_terms; // omega_p list, rad/s
    std::vector<DrudeTerm> drude_terms;
    std::string name;
};

// eps(i xi) at xi > 0: core + sigma0(T)/(eps_vac xi) + sum omega_p^2/xi^2
// + sum omega_p^2/(xi (xi + gamma)). Always >= 1, non-increasing in xi.
double permittivity_iw(const DielectricModel& model, double xi, double T);

// Static value of the core alone (additive terms diverge at xi -> 0).
double eps0_static(const DielectricModel& model);

namespace detail {

// Permittivity entering Matsubara terms at l >= 1: core + plasma + Drude,
// dc term excluded by construction.
double matsubara_permittivity(const DielectricModel& model, double xi);

} // namespace detail
} // namespace casimir
