#pragma once

#include "casimir/atom_plate.hpp"
#include "casimir/dielectric.hpp"
#include "casimir/numerics.hpp"
#include "casimir/reflection.hpp"

#include <vector>

namespace casimir {

// One semispace of a two-plate geometry. The policy governs only the l = 0
// TM coefficient of dielectric sides; metallic sides (plasma/Drude terms or
// ideal metal) resolve their own l = 0 limits. screening_density, when set
// (>= 0), supplies the carrier density for the screened prescription in
// place of the model's own dc carriers.
struct SideConfig {
    DielectricModel model;
    DcPolicy policy = DcPolicy::neglect_dc;
    double screening_density = -1.0; // carriers/m^3
};

// Free energy per unit area of two parallel semispaces separated by a:
// (k_B T / 8 pi a^2) sum'_l int_{zeta_l}^inf y dy [ln(1 - r1 r2 e^{-y})]_TM+TE.
// Negative for any reflecting pair (attraction).
double pp_free_energy_area(double a, double T, const SideConfig& side1,
                           const SideConfig& side2, Tolerance tol = {});

// Proximity-force sphere-plate force F(a) = 2 pi R F_pp(a); warns when
// a/R > 0.01. Attractive forces are negative.
double pfa_sphere_plate_force(double R, double a, double T,
                              const SideConfig& sphere,
                              const SideConfig& plate, Tolerance tol = {});

// Sphere-plate modulation experiment: an Au-coated sphere above a plate
// whose carrier density is switched between a dark value (the model's own
// dc carriers) and a much larger bright value.
struct ExperimentConfig {
    double sphere_radius = 0.0;       // m
    std::vector<double> separations;  // m
    double temperature = 0.0;         // K
    DielectricModel sphere_material;
    DielectricModel plate_dark;       // carries the dark-phase dc carriers
    DielectricModel plate_bright;     // carries the light-induced plasma/Drude terms
    double bright_carrier_density = 0.0; // carriers/m^3, for the screened route

    void validate() const; // throws ConfigError on violated invariants
};

struct DifferenceRow {
    double separation;  // m
    double force_dark;  // N, signed
    double force_bright; // N, signed
    double delta;       // N, |F_bright| - |F_dark| >= 0 for carrier addition
};

// Per-separation difference of sphere-plate forces between the bright and
// dark phases. dark_policy is neglect_dc or screened; under screened the
// bright side's l = 0 TM also takes the screened form with
// bright_carrier_density, otherwise the bright side's free carriers act
// through its plasma/Drude terms.
std::vector<DifferenceRow> difference_force(const ExperimentConfig& cfg,
                                            DcPolicy dark_policy,
                                            Tolerance tol = {});

// Max over separations of the relative change in the sphere-plate force
// when the metal side's l = 0 TM coefficient 1 is replaced by the screened
// form with the metal's own carrier density.
double au_zero_frequency_check(const ExperimentConfig& cfg, Tolerance tol = {});

namespace detail {

// Reflection pair of one side at Matsubara order l (x = zeta_l); l = 0
// resolves the side's zero-frequency prescription.
ReflectionPair side_reflection(const SideConfig& side, double x, double y,
                               double a, double T);

} // namespace detail
} // namespace casimir
