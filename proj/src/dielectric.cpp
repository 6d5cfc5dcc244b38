#include "casimir/dielectric.hpp"

#include "casimir/constants.hpp"

#include <algorithm>
#include <cmath>

namespace casimir {

namespace {

double mobility(const CarrierModel& c, double T) {
    if (c.mobility_exponent == 0.0)
        return c.mobility_ref;
    return c.mobility_ref * std::pow(T / 300.0, c.mobility_exponent);
}

// Fritsch-Carlson monotone cubic through the table; returns (n, dn/dT).
std::pair<double, double>
tabulated_density(const std::vector<std::pair<double, double>>& tab,
                  double T) {
    const size_t n = tab.size();
    if (n < 2)
        throw ConfigError("carrier table needs at least two rows");
    if (T < tab.front().first || T > tab.back().first)
        throw DomainError("carrier table queried at T=" + std::to_string(T) +
                          " K, outside the tabulated range [" +
                          std::to_string(tab.front().first) + ", " +
                          std::to_string(tab.back().first) + "]");

    std::vector<double> h(n - 1), d(n - 1), m(n, 0.0);
    for (size_t i = 0; i + 1 < n; ++i) {
        h[i] = tab[i + 1].first - tab[i].first;
        if (h[i] <= 0.0)
            throw ConfigError("carrier table temperatures must be strictly increasing");
        d[i] = (tab[i + 1].second - tab[i].second) / h[i];
    }
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for (size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] * d[i] <= 0.0)
            m[i] = 0.0;
        else // harmonic mean keeps the interpolant monotone on each interval
            m[i] = 2.0 / (1.0 / d[i - 1] + 1.0 / d[i]);
    }
    // clamp endpoint slopes (Fritsch-Carlson condition)
    for (size_t i : {size_t{0}, n - 1}) {
        const double dd = (i == 0) ? d[0] : d[n - 2];
        if (dd == 0.0)
            m[i] = 0.0;
        else if (m[i] / dd > 3.0)
            m[i] = 3.0 * dd;
        else if (m[i] / dd < 0.0)
            m[i] = 0.0;
    }

    size_t i = std::upper_bound(tab.begin(), tab.end(),
                                std::make_pair(T, 1e308)) -
               tab.begin();
    i = std::clamp<size_t>(i, 1, n - 1) - 1;
    const double t = (T - tab[i].first) / h[i];
    const double y0 = tab[i].second, y1 = tab[i + 1].second;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    const double h11 = t * t * (t - 1);
    const double value =
        h00 * y0 + h10 * h[i] * m[i] + h01 * y1 + h11 * h[i] * m[i + 1];
    const double dh00 = 6 * t * (t - 1);
    const double dh10 = (1 - t) * (1 - 3 * t);
    const double dh01 = -dh00;
    const double dh11 = t * (3 * t - 2);
    const double deriv =
        (dh00 * y0 + dh01 * y1) / h[i] + dh10 * m[i] + dh11 * m[i + 1];
    return {value, deriv};
}

} // namespace

std::pair<double, double> carrier_density(const CarrierModel& c, double T) {
    if (T < 0.0)
        throw DomainError("carrier_density: T must be >= 0");
    switch (c.law) {
    case CarrierLaw::constant:
        return {c.n_ref, 0.0};
    case CarrierLaw::arrhenius: {
        if (T == 0.0)
            return {0.0, 0.0};
        const double arg = c.activation / (2.0 * kBoltzmann * T);
        const double n = c.n_ref * std::exp(-arg);
        return {n, n * arg / T}; // d/dT of exp(-A/(2kT)) pulls down A/(2kT^2)
    }
    case CarrierLaw::tabulated:
        return tabulated_density(c.table, T);
    }
    throw ConfigError("carrier_density: unknown law");
}

double dc_conductivity(const CarrierModel& c, double T) {
    return carrier_density(c, T).first * kElementaryCharge * mobility(c, T);
}

double debye_kappa(const CarrierModel& c, double eps0, double T) {
    if (T <= 0.0)
        throw DomainError("debye_kappa: T must be > 0");
    if (eps0 <= 1.0)
        throw DomainError("debye_kappa: eps0 must be > 1");
    const double n = carrier_density(c, T).first;
    if (n == 0.0)
        return 0.0;
    return std::sqrt(kElementaryCharge * kElementaryCharge * n /
                     (eps0 * kVacuumPermittivity * kBoltzmann * T));
}

namespace {

double core_value(const DielectricModel& m, double xi) {
    switch (m.core) {
    case CoreKind::constant:
        return m.eps0;
    case CoreKind::oscillators: {
        double eps = 1.0;
        for (const auto& o : m.oscillators) {
            const double r = xi / o.frequency;
            eps += o.strength / (1.0 + r * r);
        }
        return eps;
    }
    case CoreKind::ideal_metal:
        throw DomainError("permittivity of an ideal metal is not defined; "
                          "its reflection coefficients are fixed directly");
    }
    throw ConfigError("unknown core kind");
}

} // namespace

double permittivity_iw(const DielectricModel& m, double xi, double T) {
    if (xi <= 0.0)
        throw DomainError("permittivity_iw: xi must be > 0 (the xi = 0 point "
                          "belongs to the zero-frequency prescriptions)");
    double eps = detail::matsubara_permittivity(m, xi);
    if (m.dc_term)
        eps += dc_conductivity(*m.dc_term, T) / (kVacuumPermittivity * xi);
    return eps;
}

double eps0_static(const DielectricModel& m) {
    switch (m.core) {
    case CoreKind::constant:
        return m.eps0;
    case CoreKind::oscillators: {
        double eps = 1.0;
        for (const auto& o : m.oscillators)
            eps += o.strength;
        return eps;
    }
    case CoreKind::ideal_metal:
        throw DomainError("eps0_static: ideal metal has no finite static permittivity");
    }
    throw ConfigError("unknown core kind");
}

namespace detail {

double matsubara_permittivity(const DielectricModel& m, double xi) {
    double eps = core_value(m, xi);
    for (double wp : m.plasma_terms)
        eps += wp * wp / (xi * xi);
    for (const auto& d : m.drude_terms)
        eps += d.omega_p * d.omega_p / (xi * (xi + d.gamma));
    return eps;
}

} // namespace detail
} // namespace casimir
