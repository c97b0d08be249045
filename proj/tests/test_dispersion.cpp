#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pdm/dispersion.hpp"
#include "pdm/error.hpp"

using namespace pdm;

TEST_CASE("reciprocal mass scale") {
    CHECK(std::abs(reciprocal_mass_scale(1.0, 1.0) - std::sqrt(2.0 * std::numbers::pi)) < 1e-12);
    CHECK(reciprocal_mass_scale(2.0, 0.5) == doctest::Approx(std::sqrt(2.0 * std::numbers::pi) * 0.5));
    CHECK_THROWS_AS(reciprocal_mass_scale(0.0, 1.0), Error);
}

TEST_CASE("dispersion curve") {
    const auto m = make_dispersion_model(1.0, 1.0, 1.0);
    CHECK(dispersion_energy(1.0, m) == doctest::Approx(-1.0 / m.m0k));
    CHECK(std::abs(dispersion_energy(std::numbers::e, m)) < 1e-15);
    CHECK_THROWS_AS(dispersion_energy(0.0, m), Error);
    for (double s : {0.5, 1.0, 3.0}) {
        const auto ms = make_dispersion_model(1.0, 1.0, s);
        CHECK(std::abs(dispersion_minimum(ms).k - 1.0 / s) < 1e-8);
        CHECK(std::abs(dispersion_zero(ms).k - std::numbers::e / s) < 1e-8);
    }
    const double g = golden_section_minimum([&](double k) { return dispersion_energy(k, m); }, 0.2, 4.0);
    CHECK(g == doctest::Approx(1.0).epsilon(1e-6));
    const auto c = dispersion_curve(m, 3.0, 30);
    CHECK(c.size() == 30);
    CHECK(c.back().k == 3.0);
}

TEST_CASE("second-derivative relation") {
    const auto m = make_dispersion_model(1.0, 1.0, 1.0);
    for (double k : {0.01, 0.1, 1.0, 10.0, 100.0}) CHECK(dispersion_consistency(m, k, 1e-4 * k) < 1e-8);
    CHECK_THROWS_AS(dispersion_consistency(m, 1e-5, 1e-4), Error);
}

TEST_CASE("regularised transform of 1/x^2") {
    for (double k : {0.5, 1.0, 3.0})
        for (double e : {0.1, 0.01}) {
            const double exact = std::numbers::pi / e * std::exp(-k * e);
            CHECK(regularized_fourier_integral(k, e) == doctest::Approx(exact).epsilon(1e-10));
        }
    CHECK_THROWS_AS(regularized_fourier_integral(0.0, 0.1), Error);
}

TEST_CASE("numeric reciprocal mass") {
    const auto r = reciprocal_mass_numeric(MassProfile::singular(1.0, 1.0), 2.0);
    CHECK(r.finite_part == doctest::Approx(-2.0 * std::numbers::pi).epsilon(1e-6));
    CHECK(r.regular == doctest::Approx(r.regular_closed_form).epsilon(1e-6));
    CHECK(r.delta_coefficient == doctest::Approx(std::sqrt(2.0 * std::numbers::pi)));
    // the transform is -1/2 of m0k k
    CHECK(r.regular / r.inferred == doctest::Approx(-0.5).epsilon(1e-6));
    CHECK_THROWS_AS(reciprocal_mass_numeric(MassProfile::constant(1.0), 1.0), Error);
}
