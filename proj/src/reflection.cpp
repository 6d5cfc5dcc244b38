#include "casimir/reflection.hpp"

#include "casimir/constants.hpp"

#include <cmath>

namespace casimir {

ReflectionPair fresnel(double x, double y, double eps) {
    if (x < 0.0 || y < x)
        throw DomainError("fresnel: need y >= x >= 0");
    if (eps < 1.0)
        throw DomainError("fresnel: need eps >= 1");
    if (eps == 1.0)
        return {0.0, 0.0};
    const double em1 = eps - 1.0;
    if (y == 0.0) // x = 0 too; limit along the x = 0 axis
        return {em1 / (eps + 1.0), 0.0};
    const double s = std::sqrt(y * y + x * x * em1);
    // (eps*y - s)/(eps*y + s) multiplied through by the conjugate: the
    // numerator becomes exact up to rounding of the inputs.
    const double r_tm = em1 * ((eps + 1.0) * y * y - x * x) /
                        ((eps * y + s) * (eps * y + s));
    const double r_te = -x * x * em1 / ((y + s) * (y + s));
    return {r_tm, r_te};
}

double r_tm_screened(double y, double a, double kappa, double eps0) {
    if (y <= 0.0)
        throw DomainError("r_tm_screened: need y > 0");
    if (a <= 0.0)
        throw DomainError("r_tm_screened: need a > 0");
    if (kappa < 0.0)
        throw DomainError("r_tm_screened: need kappa >= 0");
    if (eps0 <= 1.0)
        throw DomainError("r_tm_screened: need eps0 > 1");
    const double w = std::hypot(2.0 * a * kappa, y);
    return (eps0 * w - y) / (eps0 * w + y);
}

double r_tm_uniaxial(double eps0x, double eps0z) {
    if (eps0x < 1.0 || eps0z < 1.0)
        throw DomainError("r_tm_uniaxial: need both permittivities >= 1");
    const double g = std::sqrt(eps0x * eps0z);
    return (g - 1.0) / (g + 1.0);
}

double zero_frequency_tm(DcPolicy policy, double eps0, double a,
                         const std::optional<CarrierModel>& carriers, double T,
                         double y) {
    switch (policy) {
    case DcPolicy::neglect_dc:
        return (eps0 - 1.0) / (eps0 + 1.0);
    case DcPolicy::include_dc:
        return 1.0;
    case DcPolicy::screened: {
        if (!carriers)
            throw ConfigError("zero_frequency_tm: screened prescription needs "
                              "a carrier model");
        return r_tm_screened(y, a, debye_kappa(*carriers, eps0, T), eps0);
    }
    }
    throw ConfigError("zero_frequency_tm: unknown policy");
}

} // namespace casimir
