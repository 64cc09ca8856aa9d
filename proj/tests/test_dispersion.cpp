#include <cmath>
#include <sstream>

#include "doctest.h"

#include "casimir/dispersion.hpp"
#include "casimir/errors.hpp"
#include "casimir/units.hpp"

using namespace casimir;

TEST_CASE("unit conversions") {
    CHECK(ev_to_rad_per_s(1.0) == doctest::Approx(1.519267e15).epsilon(1e-6));
    CHECK(rad_per_s_to_ev(ev_to_rad_per_s(0.035)) == doctest::Approx(0.035).epsilon(1e-15));
    CHECK(constants().version == "CODATA-2018");
}

TEST_CASE("Drude and plasma permittivity") {
    const auto gold = DrudeParams::gold();
    const double wp = gold.omega_p();
    const double nu = gold.nu(300.0);
    const double zeta = 1e14;
    CHECK(eps_drude(zeta, gold, 300.0) == doctest::Approx(1.0 + wp * wp / (zeta * (zeta + nu))));
    CHECK(eps_plasma(zeta, 9.0) == doctest::Approx(1.0 + wp * wp / (zeta * zeta)));

    SUBCASE("eps decreases toward 1 with frequency") {
        double previous = INFINITY;
        for (double z = 1e10; z < 1e19; z *= 3.0) {
            const double e = eps_drude(z, gold, 300.0);
            CHECK(e > 1.0);
            CHECK(e < previous);
            previous = e;
        }
    }
    SUBCASE("invalid arguments") {
        CHECK_THROWS_AS(eps_drude(0.0, gold, 300.0), DomainError);
        CHECK_THROWS_AS(eps_drude(-1.0, gold, 300.0), DomainError);
        CHECK_THROWS_AS(DrudeParams(-9.0, ConstantRelaxation{}), DomainError);
        CHECK_THROWS_AS(Plasma(0.0), DomainError);
    }
}

TEST_CASE("permittivity dispatch") {
    CHECK(std::isinf(permittivity(Ideal{}, 1e14, 300.0)));
    CHECK(permittivity(Vacuum{}, 1e14, 300.0) == 1.0);
    CHECK(model_name(Drude{DrudeParams::gold()}) == "drude");
    CHECK(model_name(Plasma(9.0)) == "plasma");
}

TEST_CASE("Bloch-Grueneisen relaxation") {
    const BlochGruneisen bg{170.0, 0.0356, 300.0};
    CHECK(nu_bloch_gruneisen(300.0, bg) == 0.0356);
    const double nu350 = nu_bloch_gruneisen(350.0, bg);
    CHECK(nu350 == doctest::Approx(0.0418).epsilon(0.5 / 41.8));
    // High-temperature regime is nearly linear in T.
    CHECK(nu_bloch_gruneisen(600.0, bg) / nu_bloch_gruneisen(300.0, bg) == doctest::Approx(2.0).epsilon(0.05));
    // Low temperatures fall off as T^5.
    CHECK(nu_bloch_gruneisen(4.0, bg) / nu_bloch_gruneisen(2.0, bg) == doctest::Approx(32.0).epsilon(1e-3));
    CHECK(nu_bloch_gruneisen(123.0, ConstantRelaxation{0.035}) == 0.035);
}

TEST_CASE("sum rule of the Drude spectral function") {
    for (double g : {1e-3, 1.0, 1e3}) CHECK(std::abs(sum_rule_check(g) - 1.0) < 1e-6);
    CHECK(spectral_integral(1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("zero-frequency product separates Drude from plasma") {
    const auto gold = DrudeParams::gold();
    CHECK(zero_mode_product(Drude{gold}) < 1e-12 * gold.omega_p() * gold.omega_p());
    const double wp = ev_to_rad_per_s(9.0);
    CHECK(zero_mode_product(Plasma(9.0)) == doctest::Approx(wp * wp).epsilon(1e-12));
    CHECK_THROWS_AS(zero_mode_product(Ideal{}), UnsupportedModelError);
}

TEST_CASE("zeta^2 (eps - 1) rises toward omega_p^2 for Drude and is flat for plasma") {
    const auto gold = DrudeParams::gold();
    const double wp2 = gold.omega_p() * gold.omega_p();
    double previous = 0.0;
    for (double z = 1e8; z < 1e18; z *= 4.0) {
        const double drude = z * z * (eps_drude(z, gold, 300.0) - 1.0);
        CHECK(drude > previous);
        CHECK(drude < wp2);
        previous = drude;
        CHECK(z * z * (eps_plasma(z, 9.0) - 1.0) == doctest::Approx(wp2).epsilon(1e-12));
    }
}

TEST_CASE("permittivity table") {
    const PermittivityTable table({{1e14, 101.0}, {1e16, 2.0}});

    SUBCASE("log-log interpolation") {
        CHECK(table(1e15) == doctest::Approx(11.0).epsilon(1e-12));
        CHECK(table(1e14) == 101.0);
        CHECK(table(1e16) == 2.0);
        double previous = INFINITY;
        for (double z = 1e14; z <= 1e16; z *= 1.5) {
            CHECK(table(z) < previous);
            previous = table(z);
        }
    }
    SUBCASE("outside the nodes") {
        CHECK_THROWS_AS(table(1e13), RangeError);
        CHECK_THROWS_AS(table(1e17), RangeError);
    }
    SUBCASE("construction rules") {
        CHECK_THROWS_AS(PermittivityTable({{1e12, 2.0}}), ConfigError);
        CHECK_THROWS_AS(PermittivityTable({{1e12, 2.0}, {1e11, 3.0}}), ConfigError);
        CHECK_THROWS_AS(PermittivityTable({{1e12, 2.0}, {1e13, 0.5}}), ConfigError);
    }
    SUBCASE("CSV with header, CRLF and BOM") {
        std::istringstream in("\xEF\xBB\xBFzeta_rad_per_s,epsilon\r\n1e14,101\r\n1e16,2\r\n");
        const auto parsed = PermittivityTable::parse_csv(in);
        CHECK(parsed.nodes().size() == 2);
        CHECK(parsed(1e15) == doctest::Approx(11.0));
    }
    SUBCASE("CSV errors name the line") {
        std::istringstream in("zeta_rad_per_s,epsilon\n1e12,101\n1e14,abc\n");
        try {
            (void)PermittivityTable::parse_csv(in, "t.csv");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("t.csv:3:") != std::string::npos);
        }
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(PermittivityTable::from_csv_file("/nonexistent/table.csv"), ConfigError);
    }
}
