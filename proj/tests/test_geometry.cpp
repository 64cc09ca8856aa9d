#include <cmath>

#include "doctest.h"

#include "casimir/errors.hpp"
#include "casimir/geometry.hpp"
#include "casimir/units.hpp"

using namespace casimir;

TEST_CASE("proximity force from the plate free energy") {
    const MaterialModel gold = Drude{DrudeParams::gold()};
    const double a = 1.0 * kMicrometre;
    const SpherePlateConfig small(100.0 * kMicrometre, a);
    const SpherePlateConfig large(150.0 * kMicrometre, a);

    const double f = free_energy(ThermalGapConfig(300.0, a), gold);
    CHECK(pfa_force(small, 300.0, gold) == doctest::Approx(2.0 * kPi * 100.0 * kMicrometre * f));
    CHECK(pfa_force(small, 300.0, gold) < 0.0);

    SUBCASE("the normalized difference does not depend on R") {
        CHECK(pfa_force_difference(small, gold) == pfa_force_difference(large, gold));
    }
    SUBCASE("advisory when R is not much larger than a") {
        CHECK_FALSE(small.proximity_advisory());
        CHECK(SpherePlateConfig(50.0 * kMicrometre, a).proximity_advisory());
    }
    SUBCASE("validation") {
        CHECK_THROWS_AS(SpherePlateConfig(0.0, a), DomainError);
        CHECK_THROWS_AS(SpherePlateConfig(1e-4, 0.0), DomainError);
    }
}
