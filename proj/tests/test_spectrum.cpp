#include <doctest.h>

#include <cmath>
#include <sstream>

#include "pdm/config.hpp"
#include "pdm/error.hpp"
#include "pdm/spectrum.hpp"

using namespace pdm;

namespace {

SpectrumResult small_triangle(double G) {
    CoreConfig c;
    c.x0 = std::sqrt(G);
    c.N = 1000;
    SpectrumOptions o;
    o.refinements = 5;
    return compare_spectrum(c.singular_problem(), 2, o);
}

}  // namespace

TEST_CASE("triangle rows") {
    const auto r = small_triangle(0.05);
    REQUIRE(r.rows.size() == 3);
    CHECK(r.Gamma == doctest::Approx(0.05));
    CHECK(r.continuum_threshold == doctest::Approx(2.5));
    for (std::size_t n = 0; n < 2; ++n) {
        const auto& row = r.rows[n];
        CHECK(row.root.found);
        CHECK(std::abs(row.dev_root_numeric) < 1e-4);
        CHECK(std::abs(row.dev_formula_root) < 1e-12);
        CHECK(row.numeric_reliable);
        CHECK(std::abs(row.printed_dictionary_delta) > 1e-3);
    }
    CHECK_FALSE(r.rows[2].root.found);
    CHECK(r.rows[2].formula_plus.complex);
    CHECK(std::isnan(r.rows[2].dev_root_numeric));
}

TEST_CASE("exports") {
    const auto r = small_triangle(0.02);
    std::ostringstream csv, md;
    write_spectrum_csv(csv, r);
    CHECK(csv.str().rfind("n,Gamma,E_formula_plus", 0) == 0);
    write_spectrum_markdown(md, r, 1e-4);
    CHECK(md.str().find("| agree |") != std::string::npos);
    const auto j = spectrum_to_json(r);
    CHECK(j["rows"].size() == 3);
    CHECK(j["rows"][1]["E_rootfind"].get<double>() == doctest::Approx(2.402310562561766));

    const auto c = small_triangle(0.05);
    CHECK(spectrum_to_json(c)["rows"][2]["E_rootfind"].is_null());
    std::ostringstream md2;
    write_spectrum_markdown(md2, c, 1e-4);
    CHECK(md2.str().find("no root") != std::string::npos);
}

TEST_CASE("comparison needs the singular profile") {
    CoreConfig c;
    CHECK_THROWS_AS(compare_spectrum(c.constant_mass_problem(), 1), Error);
}
