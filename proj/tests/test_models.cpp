#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "g2sim/errors.hpp"
#include "g2sim/fieldgen.hpp"
#include "g2sim/models.hpp"

#include <cmath>

using namespace g2sim;
using namespace g2sim::models;

TEST_CASE("mixture law round-trips through its inverse") {
    for (double x = 0.0; x <= 1.0; x += 0.01) {
        const double g2 = mixture_g2(x);
        CHECK(std::abs(mixture_thermal_fraction(g2) - x) < 1e-12);
    }
    CHECK(mixture_g2(0.0) == 1.0);
    CHECK(mixture_g2(1.0) == 2.0);
    CHECK(mixture_thermal_fraction(1.0) == 0.0);
    CHECK(mixture_thermal_fraction(2.0) == 1.0);
}

TEST_CASE("mixture inverse hits the frozen reference point") {
    CHECK(std::abs(mixture_thermal_fraction(1.67) - 0.4255437353) < 1e-9);
}

TEST_CASE("mixture domain is enforced") {
    CHECK_THROWS_AS(mixture_g2(-0.01), ModelDomainError);
    CHECK_THROWS_AS(mixture_g2(1.01), ModelDomainError);
    CHECK_THROWS_AS(mixture_thermal_fraction(0.99), ModelDomainError);
    CHECK_THROWS_AS(mixture_thermal_fraction(2.01), ModelDomainError);
}

TEST_CASE("laser quadrature agrees with the closed form") {
    for (double pump = -3.0; pump <= 3.0 + 1e-12; pump += 0.25) {
        const double quad = laser_g2(pump);
        const double closed = laser_g2_closed_form(pump);
        REQUIRE(std::abs(quad - closed) < 1e-9 * closed);
    }
}

TEST_CASE("laser statistics hit the known limits") {
    CHECK(std::abs(laser_g2(-10.0) - 2.0) < 1e-3);
    CHECK(std::abs(laser_g2(10.0) - 1.0) < 1e-3);
    const double half_pi = 1.5707963267948966;
    CHECK(std::abs(laser_g2(0.0) - half_pi) < 1e-6);
}

TEST_CASE("laser g2 decreases monotonically through threshold") {
    double prev = laser_g2(-3.0);
    for (double pump = -2.9; pump <= 3.0 + 1e-12; pump += 0.1) {
        const double cur = laser_g2(pump);
        REQUIRE(cur < prev);
        prev = cur;
    }
}

TEST_CASE("laser relative power is one at threshold and grows with pump") {
    CHECK(std::abs(laser_relative_power(0.0) - 1.0) < 1e-9);
    CHECK(std::abs(laser_relative_power(3.0) - 26.5868) < 1e-3);
    double prev = laser_relative_power(-2.0);
    for (double pump = -1.75; pump <= 3.0 + 1e-12; pump += 0.25) {
        const double cur = laser_relative_power(pump);
        REQUIRE(cur > prev);
        prev = cur;
    }
}

TEST_CASE("laser pump domain is bounded") {
    CHECK_THROWS_AS(laser_g2(-101.0), ModelDomainError);
    CHECK_THROWS_AS(laser_g2(101.0), ModelDomainError);
    CHECK_NOTHROW(laser_g2(100.0));
}

TEST_CASE("a pedestal raises the thermal fraction and the blended g2") {
    for (int j = 0; j < 10; ++j) {
        const double x = 0.1 * j;
        const double lifted = with_ase_pedestal(x, 0.02);
        CHECK(lifted > x);
        CHECK(lifted <= 1.0);
        CHECK(ase_g2(mixture_g2(x), 0.02) > mixture_g2(x));
    }
    CHECK(with_ase_pedestal(0.3, 0.0) == 0.3);
    CHECK(with_ase_pedestal(0.3, 1.0) == 1.0);
    CHECK(ase_g2(2.0, 0.05) == 2.0); // fully thermal cannot be lifted further
    CHECK_THROWS_AS(with_ase_pedestal(0.3, -0.1), ModelDomainError);
    CHECK_THROWS_AS(with_ase_pedestal(0.3, 1.1), ModelDomainError);
}

TEST_CASE("gaussian factorization holds for thermal fields only") {
    const SpectrumSpec line{LineShape::gaussian, 0.0, 0.1};
    const auto thermal = gen_thermal(line, 128, 8192, 1.0, 2024);
    CHECK(siegert_max_residual(thermal, 60.0) < 0.05);

    const auto coherent = gen_coherent(1.0, 0.0, 8, 4096, 1.0, 5);
    CHECK_THROWS_AS(siegert_max_residual(coherent, 60.0), ModelDomainError);
    const auto mixed = gen_mixture(0.5, line, 1.0, 8, 4096, 1.0, 6);
    CHECK_THROWS_AS(siegert_max_residual(mixed, 60.0), ModelDomainError);
}
