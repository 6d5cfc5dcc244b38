#pragma once

#include "casimir/dielectric.hpp"

#include <optional>

namespace casimir {

// Competing treatments of the l = 0 TM reflection for materials with free
// carriers. These are discrete prescriptions, deliberately not emergent
// from a permittivity model, so that the l = 0 term is never ambiguous.
enum class DcPolicy { neglect_dc, include_dc, screened };

struct ReflectionPair {
    double r_tm;
    double r_te;
};

// TM/TE reflection at imaginary frequency, arguments already reduced to the
// dimensionless pair (x, y) with y >= x >= 0. Rationalized forms: both
// coefficients are computed as ratios free of the eps*y - sqrt(...)
// cancellation, which matters when x^2(eps-1) << y^2.
ReflectionPair fresnel(double x, double y, double eps);

// Zero-frequency TM coefficient with static screening by free carriers:
// (eps0 sqrt(4a^2 kappa^2 + y^2) - y) / (eps0 sqrt(4a^2 kappa^2 + y^2) + y).
// Non-decreasing in kappa, in [r0, 1).
double r_tm_screened(double y, double a, double kappa, double eps0);

// Zero-frequency TM coefficient of a uniaxial crystal with static
// permittivities eps0x (ordinary) and eps0z (along the optical axis).
double r_tm_uniaxial(double eps0x, double eps0z);

// The l = 0 TM value for a dielectric plate under the chosen prescription.
// TE at zero frequency is exactly 0 for dielectrics under all three.
double zero_frequency_tm(DcPolicy policy, double eps0, double a,
                         const std::optional<CarrierModel>& carriers, double T,
                         double y);

} // namespace casimir
