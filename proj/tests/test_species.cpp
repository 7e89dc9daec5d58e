#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ktp/species.hpp"

using namespace ktp;

TEST_CASE("derived constants, gamma = 2 in one dimension") {
    const EquilibriumConsts ec = derive_constants({1.0, 2.0, 1.0}, 1);
    CHECK(ec.d == Catch::Approx(1.0).margin(1e-14));
    CHECK(ec.sigma == Catch::Approx(0.5).margin(1e-14));
    CHECK(ec.c == Catch::Approx(1.0 / (2.0 * pi_v)).epsilon(1e-14));
    CHECK(ec.radius2_coef == Catch::Approx(4.0).epsilon(1e-14));
    CHECK_FALSE(ec.flat_top);
    CHECK(ec.ent_exp == Catch::Approx(3.0).margin(1e-14));
    // peak value at v = u is c * sqrt(4 n)
    CHECK(maxwellian_value(ec, 1.0, 0.0, 0.0) == Catch::Approx(1.0 / pi_v).epsilon(1e-13));
}

TEST_CASE("derived constants at the endpoint gamma = 3") {
    const EquilibriumConsts ec = derive_constants({1.0, 3.0, 1.0}, 1);
    CHECK(ec.d == 0.0);
    CHECK(ec.flat_top);
    CHECK(ec.c == Catch::Approx(1.0 / (2.0 * std::sqrt(3.0))).epsilon(1e-14));
    CHECK(ec.radius2_coef == Catch::Approx(3.0).epsilon(1e-14));
    // indicator of the closed ball: the boundary node itself still counts
    const double r = std::sqrt(support_radius2(ec, 1.0));
    CHECK(maxwellian_value(ec, 1.0, 0.0, r) == ec.c);
    CHECK(maxwellian_value(ec, 1.0, 0.0, std::nextafter(r, 10.0)) == 0.0);
}

TEST_CASE("derived constants, gamma = 7/5") {
    const EquilibriumConsts ec = derive_constants({1.0, 1.4, 1.0}, 1);
    CHECK(ec.d == Catch::Approx(4.0).epsilon(1e-12));
    CHECK(ec.sigma == Catch::Approx(0.2).margin(1e-14));
    CHECK(ec.radius2_coef == Catch::Approx(7.0).epsilon(1e-13));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(derive_constants({1.0, 1.0, 1.0}, 1), ConfigError);
    CHECK_THROWS_AS(derive_constants({1.0, 3.1, 1.0}, 1), ConfigError);
    CHECK_THROWS_AS(derive_constants({1.0, 2.1, 1.0}, 2), ConfigError);  // max is 2 for n_dim=2
    CHECK_THROWS_AS(derive_constants({0.0, 2.0, 1.0}, 1), ConfigError);
    CHECK_THROWS_AS(derive_constants({1.0, 2.0, 0.0}, 1), ConfigError);
    CHECK_THROWS_AS(derive_constants({1.0, 2.0, 1.0}, 4), ConfigError);
    CHECK_NOTHROW(derive_constants({2.0, 5.0 / 3.0, 0.5}, 3));
}

TEST_CASE("sampling stays normalized for non-unit particle mass") {
    // the density integral of M[n, u] is m-independent; a node sum over a
    // fine grid must recover n for m != 1 as well
    for (const SpeciesParams p : {SpeciesParams{1.5, 1.4, 1.0}, SpeciesParams{2.0, 1.5, 1.0}}) {
        const EquilibriumConsts ec = derive_constants(p, 1);
        const double n = 0.8, u = 0.15;
        const double b = ec.m * support_radius2(ec, n);
        CHECK(maxwellian_value(ec, n, u, u) ==
              Catch::Approx(ec.c * std::pow(b, ec.half_d)).epsilon(1e-13));
        const int nv = 4000;
        const double dv = 6.0 / nv;
        double mass = 0.0;
        for (int j = 0; j <= nv; ++j) mass += maxwellian_value(ec, n, u, -3.0 + j * dv);
        CHECK(mass * dv == Catch::Approx(n).epsilon(1e-5));
    }
}

TEST_CASE("equilibrium translation equivariance") {
    const EquilibriumConsts ec = derive_constants({1.5, 1.4, 1.0}, 1);
    const double n = 0.7, u = 0.45;
    for (double v : {-1.9, -0.3, 0.0, 0.41, 1.2, 2.8}) {
        CHECK(maxwellian_value(ec, n, u, v) ==
              Catch::Approx(maxwellian_value(ec, n, 0.0, v - u)).margin(1e-15));
    }
    CHECK(maxwellian_value(ec, 0.0, u, 0.3) == 0.0);
    CHECK(maxwellian_value(ec, -1.0, u, 0.3) == 0.0);
}

TEST_CASE("entropy density pinned value") {
    // gamma = 2, m = 1: h(f, v) = v^2 f / 2 + (1/(2 c^2)) f^3 / 3
    const EquilibriumConsts ec = derive_constants({1.0, 2.0, 1.0}, 1);
    const EntropyValue h = kinetic_entropy_density(ec, 1.0, 2.0);
    CHECK_FALSE(h.infinite);
    CHECK(h.value == Catch::Approx(2.0 + 2.0 * pi_v * pi_v / 3.0).epsilon(1e-14));
    CHECK(kinetic_entropy_density(ec, 0.0, 2.0).value == 0.0);
}

TEST_CASE("flat-top entropy barrier") {
    const EquilibriumConsts ec = derive_constants({1.0, 3.0, 1.0}, 1);
    const EntropyValue ok = kinetic_entropy_density(ec, ec.c, 1.5);
    CHECK_FALSE(ok.infinite);
    CHECK(ok.value == Catch::Approx(0.5 * 1.5 * 1.5 * ec.c).epsilon(1e-14));
    const EntropyValue bad = kinetic_entropy_density(ec, ec.c * (1.0 + 1e-9), 1.5);
    CHECK(bad.infinite);
    CHECK(std::isfinite(bad.value));
}

TEST_CASE("equilibrium entropy closed form") {
    const EquilibriumConsts ec = derive_constants({1.0, 2.0, 1.0}, 1);
    CHECK(equilibrium_entropy(ec, 1.0, 0.0) == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(equilibrium_entropy(ec, 2.0, 0.5) ==
          Catch::Approx(0.5 * 2.0 * 0.25 + 4.0).epsilon(1e-14));
}

TEST_CASE("pressure law and its Bregman divergence") {
    const EquilibriumConsts ec = derive_constants({1.0, 2.0, 1.0}, 1);
    CHECK(pressure(ec, 2.0) == Catch::Approx(4.0).epsilon(1e-14));
    CHECK(internal_energy(ec, 2.0) == Catch::Approx(4.0).epsilon(1e-14));
    // with s(n) = n^2 the divergence collapses to the squared difference
    for (double a : {0.2, 1.0, 2.7}) {
        for (double b : {0.5, 1.3}) {
            CHECK(internal_energy_divergence(ec, a, b) ==
                  Catch::Approx((a - b) * (a - b)).margin(1e-13));
        }
    }
    // convexity makes the divergence nonnegative for every gamma
    const EquilibriumConsts ec2 = derive_constants({1.5, 1.4, 1.0}, 1);
    for (double a : {0.1, 0.9, 2.4})
        for (double b : {0.3, 1.8}) CHECK(internal_energy_divergence(ec2, a, b) >= 0.0);
}
