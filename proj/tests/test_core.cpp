#include <doctest.h>

#include <cmath>

#include "pdm/config.hpp"
#include "pdm/core.hpp"
#include "pdm/error.hpp"

using namespace pdm;

TEST_CASE("singular mass values and derivatives") {
    const auto m = MassProfile::singular(1.5, 0.5);
    CHECK(eval_mass(m, 1.0) == doctest::Approx(1.5 * 1.25).epsilon(1e-15));
    CHECK(eval_mass(m, -0.5) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(m.inverse_mass(0.0) == 0.0);
    CHECK_THROWS_AS(eval_mass(m, 0.0), Error);
    // m' = -2 m0 x0^2 / x^3, m'' = 6 m0 x0^2 / x^4
    CHECK(m.first_derivative(2.0) == doctest::Approx(-2.0 * 1.5 * 0.25 / 8.0).epsilon(1e-14));
    CHECK(m.second_derivative(2.0) == doctest::Approx(6.0 * 1.5 * 0.25 / 16.0).epsilon(1e-14));
    CHECK(eval_mass(m, 1e6) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("constant and custom profiles") {
    const auto c = MassProfile::constant(2.0);
    CHECK(eval_mass(c, 0.0) == 2.0);
    CHECK(c.first_derivative(0.3) == 0.0);
    const auto u = MassProfile::custom({[](double x) { return 1.0 + x * x; }, {}, 1.0, "quad"});
    CHECK(u.first_derivative(0.5) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(u.second_derivative(0.5) == doctest::Approx(2.0).epsilon(1e-5));
    CHECK_THROWS_AS(MassProfile::singular(-1.0, 1.0), Error);
}

TEST_CASE("potential") {
    CHECK(eval_potential(HarmonicPotential(2.0, 3.0), 0.5) == doctest::Approx(0.5 * 2.0 * 9.0 * 0.25));
}

TEST_CASE("grid never places a node at the singular point") {
    for (std::size_t N : {10u, 11u, 4000u, 4001u}) {
        const Grid g = build_grid(10.0, N, true, {0.0});
        REQUIRE(g.size() == N);
        CHECK(g.h == doctest::Approx(20.0 / (N + 1)));
        for (double x : g.nodes) CHECK(x != 0.0);
        CHECK(g.nodes.front() > -10.0);
        CHECK(g.nodes.back() < 10.0);
    }
    const Grid even = build_grid(1.0, 10, true, {0.0});
    for (std::size_t i = 0; i < 10; ++i) CHECK(even.nodes[i] == doctest::Approx(-even.nodes[9 - i]));
    CHECK(even.midpoint(5) == doctest::Approx(0.0));
    CHECK_THROWS_AS(build_grid(1.0, 0, true), Error);
}

TEST_CASE("dimensionless conversions") {
    const auto d = to_dimensionless({1.0, 0.2, 1.0, 0.3}, Units::natural());
    CHECK(d.Gamma == doctest::Approx(0.2));
    CHECK(d.Eps == doctest::Approx(3.0));
    CHECK(energy_from_eps(3.0, 0.2, Units::natural()) == doctest::Approx(0.3));
    CHECK(omega_from_gamma(0.05, 1.0, 1.0, Units::natural()) == doctest::Approx(0.05));
    CHECK(oscillator_length(1.0, 4.0, Units::with_hbar(1.0)) == doctest::Approx(0.5));
}

TEST_CASE("core config from JSON") {
    const auto c = core_config_from_json(nlohmann::json{{"m0", 2.0}, {"N", 100}, {"L", 5.0}});
    CHECK(c.m0 == 2.0);
    CHECK(c.N == 100);
    CHECK(c.box_half_width() == 5.0);
    CHECK_THROWS_AS(core_config_from_json(nlohmann::json{{"bogus", 1}}), Error);
    CHECK_NOTHROW(core_config_from_json(nlohmann::json{{"levels", 1}}, {"levels"}));
    CoreConfig bad;
    bad.x0 = -1.0;
    CHECK_THROWS_AS(bad.validate(), Error);
    CoreConfig def;
    CHECK(def.box_half_width() == doctest::Approx(10.0 * oscillator_length(1.0, 1.0, Units::natural())));
}
