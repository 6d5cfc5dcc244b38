#include "casimir/plate_plate.hpp"

#include "casimir/constants.hpp"

#include <cmath>
#include <iostream>

namespace casimir {
namespace detail {

ReflectionPair side_reflection(const SideConfig& side, double x, double y,
                               double a, double T) {
    const DielectricModel& m = side.model;
    if (m.core == CoreKind::ideal_metal)
        return {1.0, -1.0};

    if (x > 0.0)
        return fresnel(x, y, matsubara_permittivity(m, kLightSpeed / (2.0 * a) * x));

    // zeta = 0. Screened prescription first: it models the free carriers as
    // a screened static field regardless of how they enter at l >= 1.
    if (side.policy == DcPolicy::screened) {
        const double e0 = eps0_static(m);
        double kappa;
        if (side.screening_density >= 0.0) {
            kappa = std::sqrt(kElementaryCharge * kElementaryCharge *
                              side.screening_density /
                              (e0 * kVacuumPermittivity * kBoltzmann * T));
        } else {
            if (!m.dc_term)
                throw ConfigError("screened side '" + m.name +
                                  "' has neither carriers nor an explicit "
                                  "screening density");
            kappa = debye_kappa(*m.dc_term, e0, T);
        }
        return {r_tm_screened(y, a, kappa, e0), 0.0};
    }

    if (!m.plasma_terms.empty()) {
        // epsilon ~ omega_p^2/xi^2 carries a finite transverse momentum into
        // the l = 0 TE coefficient; TM saturates at 1.
        double w2 = 0.0;
        for (double wp : m.plasma_terms) {
            const double w = 2.0 * a * wp / kLightSpeed;
            w2 += w * w;
        }
        const double s = std::sqrt(y * y + w2);
        return {1.0, (y - s) / (y + s)};
    }
    if (!m.drude_terms.empty())
        return {1.0, 0.0}; // xi eps(i xi) -> 0: TE drops out at l = 0

    const double e0 = eps0_static(m);
    const double r_tm = zero_frequency_tm(side.policy, e0, a, m.dc_term, T, y);
    return {r_tm, 0.0};
}

} // namespace detail

namespace {

// One Matsubara term: int_{x}^inf y [ln(1 - q_tm e^{-y}) + ln(1 - q_te e^{-y})] dy.
double matsubara_term(const SideConfig& s1, const SideConfig& s2, double x,
                      double a, double T, Tolerance tol) {
    auto f = [&](double y) {
        const auto r1 = detail::side_reflection(s1, x, y, a, T);
        const auto r2 = detail::side_reflection(s2, x, y, a, T);
        const double e = std::exp(-y);
        // integrate_expweighted supplies the e^{-y} factor; fold the
        // compensating e^{y} into the log analytically, since past y ~ 709
        // the naive product turns into 0 * inf:
        //   ln(1 - q e^{-y}) e^{y} = q ln1p(-w)/w,  w = q e^{-y}
        auto folded = [&](double q) {
            const double w = q * e;
            return w == 0.0 ? -q : q * (std::log1p(-w) / w);
        };
        return y * (folded(r1.r_tm * r2.r_tm) + folded(r1.r_te * r2.r_te));
    };
    return integrate_expweighted(f, x, tol).value;
}

} // namespace

double pp_free_energy_area(double a, double T, const SideConfig& side1,
                           const SideConfig& side2, Tolerance tol) {
    if (!(a > 0.0))
        throw DomainError("pp_free_energy_area: separation must be positive");
    if (!(T > 0.0))
        throw DomainError("pp_free_energy_area: T must be > 0");
    const MatsubaraGrid grid(a, T);
    const Tolerance inner{std::min(tol.rel, 1e-11), tol.abs};

    auto term = [&](double l) {
        try {
            return matsubara_term(side1, side2, grid.zeta(l), a, T, inner);
        } catch (const ConvergenceError& e) {
            throw ConvergenceError(std::string(e.what()) +
                                   " (Matsubara order l=" + std::to_string(l) +
                                   ")");
        }
    };
    const double total = sum_matsubara(term, tol).value;
    return kBoltzmann * T / (8.0 * M_PI * a * a) * total;
}

double pfa_sphere_plate_force(double R, double a, double T,
                              const SideConfig& sphere, const SideConfig& plate,
                              Tolerance tol) {
    if (!(R > 0.0))
        throw DomainError("pfa_sphere_plate_force: radius must be positive");
    if (a / R > 0.01)
        std::cerr << "note: a/R = " << a / R
                  << " exceeds 0.01; the proximity-force mapping degrades\n";
    return 2.0 * M_PI * R * pp_free_energy_area(a, T, sphere, plate, tol);
}

void ExperimentConfig::validate() const {
    if (!(sphere_radius > 0.0))
        throw ConfigError("experiment: sphere radius must be positive");
    if (separations.empty())
        throw ConfigError("experiment: no separations given");
    for (double a : separations)
        if (!(a > 0.0))
            throw ConfigError("experiment: separations must be positive");
    if (!(temperature > 0.0))
        throw ConfigError("experiment: temperature must be positive");
    if (!(bright_carrier_density > 0.0))
        throw ConfigError("experiment: bright carrier density must be positive");
    if (plate_dark.dc_term) {
        const double n_dark =
            carrier_density(*plate_dark.dc_term, temperature).first;
        if (bright_carrier_density <= n_dark)
            throw ConfigError("experiment: the bright phase must have more "
                              "carriers than the dark phase");
    }
}

std::vector<DifferenceRow> difference_force(const ExperimentConfig& cfg,
                                            DcPolicy dark_policy,
                                            Tolerance tol) {
    if (dark_policy == DcPolicy::include_dc)
        throw ConfigError("difference_force: dark policy must be neglect_dc "
                          "or screened");
    cfg.validate();

    SideConfig sphere{cfg.sphere_material, DcPolicy::neglect_dc, -1.0};
    SideConfig dark{cfg.plate_dark, dark_policy, -1.0};
    SideConfig bright{cfg.plate_bright, DcPolicy::neglect_dc, -1.0};
    if (dark_policy == DcPolicy::screened) {
        bright.policy = DcPolicy::screened;
        bright.screening_density = cfg.bright_carrier_density;
    }

    std::vector<DifferenceRow> rows;
    rows.reserve(cfg.separations.size());
    for (double a : cfg.separations) {
        DifferenceRow row;
        row.separation = a;
        row.force_dark = pfa_sphere_plate_force(cfg.sphere_radius, a,
                                                cfg.temperature, sphere, dark,
                                                tol);
        row.force_bright = pfa_sphere_plate_force(cfg.sphere_radius, a,
                                                  cfg.temperature, sphere,
                                                  bright, tol);
        row.delta = std::abs(row.force_bright) - std::abs(row.force_dark);
        rows.push_back(row);
    }
    return rows;
}

double au_zero_frequency_check(const ExperimentConfig& cfg, Tolerance tol) {
    cfg.validate();
    if (cfg.sphere_material.drude_terms.empty() &&
        cfg.sphere_material.plasma_terms.empty() &&
        cfg.sphere_material.core != CoreKind::ideal_metal)
        throw ConfigError("au_zero_frequency_check: the sphere must be a metal");
    if (cfg.sphere_material.core != CoreKind::ideal_metal &&
        !cfg.sphere_material.dc_term)
        throw ConfigError("au_zero_frequency_check: the sphere model needs a "
                          "carrier density to screen with");

    SideConfig metallic{cfg.sphere_material, DcPolicy::neglect_dc, -1.0};
    SideConfig screened{cfg.sphere_material, DcPolicy::screened, -1.0};
    SideConfig plate{cfg.plate_dark, DcPolicy::neglect_dc, -1.0};

    double worst = 0.0;
    for (double a : cfg.separations) {
        const double f1 = pfa_sphere_plate_force(cfg.sphere_radius, a,
                                                 cfg.temperature, metallic,
                                                 plate, tol);
        const double f2 = pfa_sphere_plate_force(cfg.sphere_radius, a,
                                                 cfg.temperature, screened,
                                                 plate, tol);
        worst = std::max(worst, std::abs(f2 - f1) / std::abs(f1));
    }
    return worst;
}

} // namespace casimir
