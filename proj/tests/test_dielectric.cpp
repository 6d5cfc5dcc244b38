#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "casimir/constants.hpp"
#include "casimir/dielectric.hpp"

#include <cmath>

using namespace casimir;

namespace {

double rel_err(double got, double want) {
    return std::abs(got - want) / std::abs(want);
}

DielectricModel si_plate() {
    DielectricModel m;
    m.core = CoreKind::constant;
    m.eps0 = 11.67;
    return m;
}

DielectricModel silica_plate() {
    DielectricModel m;
    m.core = CoreKind::oscillators;
    m.oscillators = {{1.703, 1.88e14}, {1.098, 2.034e16}};
    return m;
}

} // namespace

TEST_CASE("constant core is the constant at any frequency") {
    const auto m = si_plate();
    for (double xi : {1e10, 1e13, 1e16, 1e19})
        CHECK(permittivity_iw(m, xi, 300.0) == 11.67);
    CHECK(eps0_static(m) == 11.67);
}

TEST_CASE("oscillator core sums strengths at zero and decays") {
    const auto m = silica_plate();
    CHECK(rel_err(eps0_static(m), 3.801) < 1e-14);
    // far above both resonances the core returns to vacuum
    CHECK(permittivity_iw(m, 1e20, 300.0) < 1.001);
}

TEST_CASE("plasma term adds exactly one at its own frequency") {
    DielectricModel m = si_plate();
    m.plasma_terms = {5.07e14};
    CHECK(rel_err(permittivity_iw(m, 5.07e14, 300.0), 11.67 + 1.0) < 1e-14);
}

TEST_CASE("drude term arithmetic") {
    DielectricModel m;
    m.core = CoreKind::constant;
    m.eps0 = 1.0;
    m.drude_terms = {{1.37e16, 5.3e13}};
    const double xi = 2.47e14;
    const double want = 1.0 + 1.37e16 * 1.37e16 / (xi * (xi + 5.3e13));
    CHECK(rel_err(permittivity_iw(m, xi, 300.0), want) < 1e-14);
}

TEST_CASE("dc term equals sigma0/(eps_vac xi) on top of the core") {
    // n = 5e14 cm^-3 = 5e20 m^-3, mu = 0.045 m^2/(V s)
    CarrierModel c;
    c.law = CarrierLaw::constant;
    c.n_ref = 5e20;
    c.mobility_ref = 0.045;
    DielectricModel m = si_plate();
    m.dc_term = c;
    const double xi = 1e11;
    const double sigma0 = 5e20 * kElementaryCharge * 0.045;
    CHECK(rel_err(dc_conductivity(c, 300.0), sigma0) < 1e-14);
    const double want = 11.67 + sigma0 / (kVacuumPermittivity * xi);
    CHECK(rel_err(permittivity_iw(m, xi, 300.0), want) < 1e-14);
}

TEST_CASE("permittivity preconditions") {
    CHECK_THROWS_AS(permittivity_iw(si_plate(), 0.0, 300.0), DomainError);
    CHECK_THROWS_AS(permittivity_iw(si_plate(), -1.0, 300.0), DomainError);
    DielectricModel im;
    im.core = CoreKind::ideal_metal;
    CHECK_THROWS_AS(permittivity_iw(im, 1e15, 300.0), DomainError);
    CHECK_THROWS_AS(eps0_static(im), DomainError);
}

TEST_CASE("permittivity is non-increasing in xi and >= 1 for every model") {
    std::vector<DielectricModel> models;
    models.push_back(si_plate());
    models.push_back(silica_plate());
    {
        DielectricModel m = silica_plate();
        m.plasma_terms = {5.07e14, 4.16e14};
        models.push_back(m);
    }
    {
        DielectricModel m = si_plate();
        m.drude_terms = {{1.37e16, 5.3e13}};
        CarrierModel c;
        c.n_ref = 5e20;
        c.mobility_ref = 0.045;
        m.dc_term = c;
        models.push_back(m);
    }
    for (const auto& m : models) {
        double prev = 1e308;
        for (int k = 0; k <= 100; ++k) { // 10 decades, 10 points per decade
            const double xi = 1e10 * std::pow(10.0, k / 10.0);
            const double eps = permittivity_iw(m, xi, 300.0);
            CHECK(eps >= 1.0);
            CHECK(eps <= prev * (1.0 + 1e-15));
            prev = eps;
        }
    }
}

TEST_CASE("permittivity without optional terms ignores temperature") {
    const auto m = silica_plate();
    CHECK(permittivity_iw(m, 3.3e15, 4.0) == permittivity_iw(m, 3.3e15, 900.0));
}

TEST_CASE("constant carrier law") {
    CarrierModel c;
    c.law = CarrierLaw::constant;
    c.n_ref = 1e20;
    for (double T : {0.0, 77.0, 300.0, 1000.0}) {
        auto [n, dn] = carrier_density(c, T);
        CHECK(n == 1e20);
        CHECK(dn == 0.0);
    }
}

TEST_CASE("arrhenius freeze-out") {
    CarrierModel c;
    c.law = CarrierLaw::arrhenius;
    c.n_ref = 1.3e30;
    c.activation = 1.12 * kElementaryCharge;
    auto [n300, dn300] = carrier_density(c, 300.0);
    const double want =
        1.3e30 * std::exp(-1.12 * kElementaryCharge /
                          (2.0 * kBoltzmann * 300.0));
    CHECK(rel_err(n300, want) < 1e-13);
    // analytic derivative: n * activation/(2 k_B T^2)
    CHECK(rel_err(dn300, want * 1.12 * kElementaryCharge /
                             (2.0 * kBoltzmann * 300.0 * 300.0)) < 1e-13);
    auto [n0, dn0] = carrier_density(c, 0.0);
    CHECK(n0 == 0.0);
    CHECK(dn0 == 0.0);
    // far below the activation scale the density underflows smoothly
    CHECK(carrier_density(c, 1.0).first == 0.0);
    CHECK_THROWS_AS(carrier_density(c, -1.0), DomainError);
}

TEST_CASE("tabulated carrier law interpolates monotonically") {
    CarrierModel c;
    c.law = CarrierLaw::tabulated;
    c.table = {{100.0, 1e18}, {200.0, 5e19}, {300.0, 4e20}, {400.0, 1e21}};
    for (auto& [T, n] : c.table) {
        auto [v, dv] = carrier_density(c, T);
        CHECK(rel_err(v, n) < 1e-14); // exact at the knots
        (void)dv;
    }
    // monotone data stays monotone between knots
    double prev = 0.0;
    for (double T = 100.0; T <= 400.0; T += 7.0) {
        auto [v, dv] = carrier_density(c, T);
        CHECK(v >= prev);
        CHECK(dv >= 0.0);
        prev = v;
    }
    CHECK_THROWS_AS(carrier_density(c, 99.0), DomainError);
    CHECK_THROWS_AS(carrier_density(c, 401.0), DomainError);
}

TEST_CASE("debye kappa arithmetic and scaling") {
    CarrierModel c;
    c.law = CarrierLaw::constant;
    c.n_ref = 5e20;
    // frozen from an independent arithmetic evaluation of
    // sqrt(e^2 n/(eps0 eps_vac k_B T))
    CHECK(rel_err(debye_kappa(c, 11.67, 300.0), 5476250.85810801384) < 1e-12);

    CarrierModel zero;
    zero.n_ref = 0.0;
    CHECK(debye_kappa(zero, 11.67, 300.0) == 0.0);

    CarrierModel c4 = c;
    c4.n_ref = 4.0 * c.n_ref;
    CHECK(rel_err(debye_kappa(c4, 11.67, 300.0),
                  2.0 * debye_kappa(c, 11.67, 300.0)) < 1e-14);

    CHECK_THROWS_AS(debye_kappa(c, 11.67, 0.0), DomainError);
    CHECK_THROWS_AS(debye_kappa(c, 0.5, 300.0), DomainError);
}

TEST_CASE("kappa^2 T eps0 is proportional to n") {
    CarrierModel c;
    c.law = CarrierLaw::constant;
    const double coef = kElementaryCharge * kElementaryCharge /
                        (kVacuumPermittivity * kBoltzmann);
    for (double n : {1e16, 1e20, 1e24}) {
        c.n_ref = n;
        for (double T : {10.0, 300.0}) {
            for (double e0 : {2.0, 11.67}) {
                const double k = debye_kappa(c, e0, T);
                CHECK(rel_err(k * k * T * e0, coef * n) < 1e-12);
            }
        }
    }
}

TEST_CASE("mobility power law only affects the conductivity") {
    CarrierModel c;
    c.law = CarrierLaw::constant;
    c.n_ref = 5e20;
    c.mobility_ref = 0.045;
    c.mobility_exponent = -2.0;
    const double T = 600.0;
    CHECK(rel_err(dc_conductivity(c, T),
                  5e20 * kElementaryCharge * 0.045 * std::pow(T / 300.0, -2.0)) <
          1e-14);
    // kappa sees only n(T), never the mobility
    CarrierModel plain = c;
    plain.mobility_exponent = 0.0;
    CHECK(debye_kappa(c, 11.67, T) == debye_kappa(plain, 11.67, T));
}
