#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"

#include "casimir/errors.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/units.hpp"

using namespace casimir;

namespace {
const MaterialModel kGold = Drude{DrudeParams::gold()};
constexpr double um = kMicrometre;
}  // namespace

TEST_CASE("Matsubara grid and gamma") {
    const ThermalGapConfig cfg(300.0, 1.0 * um);
    CHECK(cfg.matsubara(1) == doctest::Approx(2.4678e14).epsilon(1e-4));
    CHECK(ThermalGapConfig(350.0, um).matsubara(1) == doctest::Approx(2.8791e14).epsilon(1e-4));
    CHECK(cfg.gamma() == doctest::Approx(0.82317).epsilon(1e-4));
    CHECK(cfg.gamma() == doctest::Approx(2.0 * kPi * cfg.a_times_t()));
    CHECK(cfg.matsubara(0) == 0.0);
    CHECK_THROWS_AS(ThermalGapConfig(0.0, um), DomainError);
    CHECK_THROWS_AS(ThermalGapConfig(300.0, -um), DomainError);
}

TEST_CASE("reflection coefficients") {
    const ThermalGapConfig cfg(300.0, um);
    const double eps = permittivity(kGold, cfg.matsubara(1), 300.0);

    SUBCASE("bounded, TM above TE") {
        for (double y = cfg.gamma(); y < 20.0; y *= 1.7) {
            const auto r = reflection_pair(y, 1, cfg, eps);
            CHECK(r.A >= 0.0);
            CHECK(r.A < 1.0);
            CHECK(r.B >= 0.0);
            CHECK(r.B <= r.A);
        }
    }
    SUBCASE("perfect reflection as eps grows") {
        const auto r = reflection_pair(2.0, 1, cfg, 1e16);
        CHECK(r.A == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(r.B == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("no reflection from vacuum") {
        const auto r = reflection_pair(2.0, 1, cfg, 1.0);
        CHECK(r.A == 0.0);
        CHECK(r.B == 0.0);
    }
    SUBCASE("domain") {
        CHECK_THROWS_AS(lifshitz_variables(0.5 * cfg.gamma(), 1, cfg, eps), DomainError);
        CHECK_THROWS_AS(lifshitz_variables(1.0, 0, cfg, eps), DomainError);
    }
    SUBCASE("zero frequency, per model") {
        const auto drude = zero_frequency_reflection(kGold, 1.0, cfg);
        CHECK(drude.A == 1.0);
        CHECK(drude.B == 0.0);
        const auto ideal = zero_frequency_reflection(Ideal{}, 1.0, cfg);
        CHECK(ideal.B == 1.0);
        const auto plasma = zero_frequency_reflection(Plasma(9.0), 1.0, cfg);
        CHECK(plasma.A == 1.0);
        CHECK(plasma.B > 0.9);
        CHECK(plasma.B < 1.0);
    }
}

TEST_CASE("zero mode closed form for Drude: -zeta(3) k_B T / (8 pi a^3)") {
    for (double a : {1.0 * um, 3.0 * um}) {
        const ThermalGapConfig cfg(300.0, a);
        const double expected = -kZeta3 * constants().k_B * 300.0 / (8.0 * kPi * a * a * a);
        CHECK(std::abs(mode_pressure(0, cfg, kGold) / expected - 1.0) < 1e-8);
    }
}

TEST_CASE("ideal metal against the low-temperature closed form") {
    const double a = um;
    const double hbar_c = constants().hbar_c();
    const double casimir_t0 = -kPi * kPi * hbar_c / (240.0 * std::pow(a, 4));
    const auto p = total_pressure(ThermalGapConfig(10.0, a), Ideal{});
    CHECK(p.converged);
    CHECK(p.total == doctest::Approx(casimir_t0).epsilon(1e-3));
}

TEST_CASE("pressure and free energy sums") {
    const ThermalGapConfig cfg(300.0, um);
    const auto p = total_pressure(cfg, kGold);
    CHECK(p.converged);
    CHECK(p.total < 0.0);
    CHECK(p.total == doctest::Approx(-9.83e-4).epsilon(2e-3));

    double fractions = 0.0;
    for (const auto& mc : p.per_mode) fractions += mc.fraction_percent;
    CHECK(fractions == doctest::Approx(100.0).epsilon(1e-10));

    SUBCASE("vacuum gives nothing") {
        CHECK(total_pressure(cfg, Vacuum{}).total == 0.0);
        CHECK(free_energy(cfg, Vacuum{}) == 0.0);
    }
    SUBCASE("plasma attracts more strongly than Drude") {
        CHECK(std::abs(total_pressure(cfg, Plasma(9.0)).total) > std::abs(p.total));
    }
    SUBCASE("ideal metal bounds every real metal") {
        CHECK(std::abs(total_pressure(cfg, Ideal{}).total) > std::abs(total_pressure(cfg, Plasma(9.0)).total));
    }
    SUBCASE("tolerance validation") {
        QuadratureSettings q;
        q.rel_tol = 0.1;
        CHECK_THROWS_AS(total_pressure(cfg, kGold, q), DomainError);
    }
}

TEST_CASE("pressure is minus the gap derivative of the free energy") {
    QuadratureSettings q;
    q.rel_tol = 1e-12;
    for (double a_um : {0.5, 1.0, 2.0, 3.0, 5.0}) {
        const double a = a_um * um;
        const double h = 1e-3 * a;
        const double fp = free_energy(ThermalGapConfig(300.0, a + h), kGold, q);
        const double fm = free_energy(ThermalGapConfig(300.0, a - h), kGold, q);
        const double fp2 = free_energy(ThermalGapConfig(300.0, a + 2 * h), kGold, q);
        const double fm2 = free_energy(ThermalGapConfig(300.0, a - 2 * h), kGold, q);
        const double derivative = (-fp2 + 8 * fp - 8 * fm + fm2) / (12 * h);
        const double p = total_pressure(ThermalGapConfig(300.0, a), kGold, q).total;
        CAPTURE(a_um);
        CHECK(std::abs(-derivative / p - 1.0) < 1e-4);
    }
}

TEST_CASE("mode function") {
    const double a = um;
    SUBCASE("Drude TE vanishes at zero frequency") {
        CHECK(te_mode_function(0.0, a, kGold) == 0.0);
    }
    SUBCASE("linear extrapolation from w in [0.25, 0.5] does not reach zero") {
        const double intercept = te_mode_intercept(a, kGold, 300.0);
        CHECK(std::abs(intercept) == doctest::Approx(0.30).epsilon(0.1));
    }
    SUBCASE("TE plus TM") {
        const double zeta = 3e14;
        const double te = mode_function(zeta, a, kGold, 300.0, Polarization::TE);
        const double tm = mode_function(zeta, a, kGold, 300.0, Polarization::TM);
        CHECK(mode_function(zeta, a, kGold, 300.0, Polarization::Both) == doctest::Approx(te + tm).epsilon(1e-9));
    }
}

TEST_CASE("surface impedance reproduces the Fresnel TE coefficient") {
    const double eps = permittivity(kGold, 1e13, 300.0);
    for (double q : {1e13, 5e13, 1e15}) {
        const double r = rte_from_impedance(1e13, q, eps);
        const double p = q / 1e13;
        const double b = reflection_from_variables({p, std::sqrt(eps - 1.0 + p * p)}, eps).B;
        CHECK(std::abs(r * r - b) < 1e-12);
    }
    CHECK_THROWS_AS(surface_impedance(1e13, 1e12, eps), DomainError);

    const std::vector<double> seq = {1e12, 1e11, 1e10, 1e9, 1e8};
    const auto drude = rte_zero_frequency_comparison(kGold, 1e17, seq);
    CHECK(drude.momentum_dependent < 1e-3);
    CHECK(drude.frequency_only > 1.0 - 1e-3);
    const auto plasma = rte_zero_frequency_comparison(Plasma(9.0), 1e17, seq);
    // For plasma the momentum-dependent impedance keeps the Fresnel TE value at q.
    const double wp = ev_to_rad_per_s(9.0);
    const double root = std::sqrt(1e34 + wp * wp);
    const double fresnel = std::pow((root - 1e17) / (root + 1e17), 2);
    CHECK(plasma.momentum_dependent == doctest::Approx(fresnel).epsilon(1e-3));
    CHECK(plasma.frequency_only > 0.5);
    CHECK_THROWS_AS(rte_zero_frequency_comparison(Ideal{}, 1e17, seq), UnsupportedModelError);
}

TEST_CASE("a sampled Drude table reproduces the analytic Drude pressure") {
    const auto table = PermittivityTable::from_csv_file(std::string(CASIMIR_TEST_DATA_DIR) + "/drude_gold.csv");
    const MaterialModel drude_like = Tabulated{table, ZeroModeClass::DrudeLike};
    for (double a_um : {0.5, 1.0, 3.0}) {
        const ThermalGapConfig cfg(300.0, a_um * um);
        CAPTURE(a_um);
        CHECK(total_pressure(cfg, drude_like).total == doctest::Approx(total_pressure(cfg, kGold).total).epsilon(1e-4));
    }
    // Plasma-like zero mode keeps a TE contribution, so the attraction is stronger.
    const MaterialModel plasma_like = Tabulated{table, ZeroModeClass::PlasmaLike};
    const ThermalGapConfig cfg(300.0, 3.0 * um);
    CHECK(std::abs(total_pressure(cfg, plasma_like).total) > std::abs(total_pressure(cfg, drude_like).total));
}
