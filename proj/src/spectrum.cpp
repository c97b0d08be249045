#include "pdm/spectrum.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "pdm/eigensolver.hpp"
#include "pdm/error.hpp"
#include "pdm/io.hpp"

namespace pdm {

SpectrumResult compare_spectrum(const ProblemSetup& setup, std::size_t n_max, const SpectrumOptions& opts) {
    const auto* sm = std::get_if<SingularMass>(&setup.profile.kind());
    if (!sm) throw Error(ErrorKind::BadParameter, "the spectrum comparison needs the singular mass profile");
    const double hbar = setup.units.hbar;
    const double omega0 = setup.potential.omega0;
    const double G = sm->m0 * omega0 * sm->x0 * sm->x0 / hbar;

    SpectrumResult out;
    out.Gamma = G;
    out.omega0 = omega0;
    out.hbar = hbar;
    out.branch = opts.branch;
    out.continuum_threshold = *continuum_threshold(setup.profile, setup.units);

    const auto roots = quantization_roots(G, n_max, opts.branch, omega0, setup.units, opts.roots);

    std::vector<RefinementStudy> studies;
    if (opts.numeric) {
        std::vector<std::size_t> idx;
        for (std::size_t n = 0; n <= n_max; ++n) idx.push_back(2 * n);
        studies = refinement_study(setup, idx, opts.refinements);
    }

    for (std::size_t n = 0; n <= n_max; ++n) {
        SpectrumRow row;
        row.n = n;
        row.Gamma = G;
        row.formula_plus = spectrum_formula(n, G, Branch::Plus, omega0, setup.units);
        row.formula_minus = spectrum_formula(n, G, Branch::Minus, omega0, setup.units);
        row.root = roots[n];
        if (opts.numeric) {
            const auto& st = studies[n];
            row.E_numeric = st.extrapolated;
            row.E_numeric_raw = st.values.back();
            row.numeric_error_estimate = st.error_estimate;
            row.numeric_leading_order = st.leading_order;
            row.numeric_reliable = st.reliable;
            row.above_continuum = st.values.back() >= out.continuum_threshold;
        }
        const double nan = std::numeric_limits<double>::quiet_NaN();
        row.dev_root_numeric = row.root.found && opts.numeric ? row.root.energy - row.E_numeric : nan;
        row.dev_formula_root = row.root.found && !row.formula_plus.complex ? row.formula_plus.energy - row.root.energy : nan;
        if (row.root.found) {
            const HeunParams printed = heun_params_from(G, row.root.Eps, opts.branch);
            row.printed_dictionary_truncation = first_truncation_residual(printed, n).real();
            const auto d = delta_determinant(printed, n);
            row.printed_dictionary_delta = std::abs(d.value) / d.scale;
        } else {
            row.printed_dictionary_truncation = nan;
            row.printed_dictionary_delta = nan;
        }
        out.rows.push_back(row);
    }
    return out;
}

void write_spectrum_csv(std::ostream& os, const SpectrumResult& r) {
    os << "n,Gamma,E_formula_plus,E_formula_minus,formula_complex,E_rootfind,root_found,E_numeric,E_numeric_raw,"
          "numeric_error_estimate,dev_root_numeric,dev_formula_root,printed_truncation,printed_delta,above_continuum\n";
    for (const auto& row : r.rows) {
        os << row.n << ',' << format_double(row.Gamma) << ',' << format_double(row.formula_plus.energy) << ','
           << format_double(row.formula_minus.energy) << ',' << (row.formula_plus.complex ? 1 : 0) << ','
           << format_double(row.root.found ? row.root.energy : std::nan("")) << ',' << (row.root.found ? 1 : 0)
           << ',' << format_double(row.E_numeric) << ',' << format_double(row.E_numeric_raw) << ','
           << format_double(row.numeric_error_estimate) << ',' << format_double(row.dev_root_numeric) << ','
           << format_double(row.dev_formula_root) << ',' << format_double(row.printed_dictionary_truncation) << ','
           << format_double(row.printed_dictionary_delta) << ',' << (row.above_continuum ? 1 : 0) << '\n';
    }
}

namespace {

nlohmann::json num(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

}  // namespace

nlohmann::json spectrum_to_json(const SpectrumResult& r) {
    nlohmann::json j;
    j["Gamma"] = r.Gamma;
    j["omega0"] = r.omega0;
    j["hbar"] = r.hbar;
    j["branch"] = to_string(r.branch);
    j["continuum_threshold"] = r.continuum_threshold;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : r.rows) {
        nlohmann::json x;
        x["n"] = row.n;
        x["E_formula_plus"] = num(row.formula_plus.energy);
        x["E_formula_minus"] = num(row.formula_minus.energy);
        x["formula_complex"] = row.formula_plus.complex;
        x["E_rootfind"] = row.root.found ? num(row.root.energy) : nlohmann::json(nullptr);
        x["Eps_rootfind"] = row.root.found ? num(row.root.Eps) : nlohmann::json(nullptr);
        x["root_polynomial"] = row.root.polynomial;
        x["root_message"] = row.root.message;
        x["E_numeric"] = num(row.E_numeric);
        x["E_numeric_raw"] = num(row.E_numeric_raw);
        x["numeric_error_estimate"] = num(row.numeric_error_estimate);
        x["numeric_leading_order"] = num(row.numeric_leading_order);
        x["numeric_reliable"] = row.numeric_reliable;
        x["above_continuum"] = row.above_continuum;
        x["dev_root_numeric"] = num(row.dev_root_numeric);
        x["dev_formula_root"] = num(row.dev_formula_root);
        x["printed_dictionary"] = {{"truncation_residual", num(row.printed_dictionary_truncation)},
                                   {"delta_relative", num(row.printed_dictionary_delta)}};
        j["rows"].push_back(x);
    }
    return j;
}

void write_spectrum_markdown(std::ostream& os, const SpectrumResult& r, double tolerance) {
    const double unit = r.hbar * r.omega0;
    os << "# Energy triangle, Gamma = " << format_double(r.Gamma) << ", branch " << to_string(r.branch) << "\n\n";
    os << "Energies in units of hbar*omega0. Continuum threshold " << format_double(r.continuum_threshold / unit)
       << ".\n\n";
    os << "| n | E_formula(+) | E_formula(-) | E_rootfind | E_numeric | root - numeric | formula - root | status |\n";
    os << "|---|---|---|---|---|---|---|---|\n";
    for (const auto& row : r.rows) {
        auto cell = [&](double v) { return std::isfinite(v) ? format_double(v / unit) : std::string("n/a"); };
        std::string status;
        if (!row.root.found)
            status = "no root";
        else if (row.above_continuum)
            status = "continuum";
        else if (std::isfinite(row.dev_root_numeric))
            status = std::abs(row.dev_root_numeric) < tolerance * unit ? "agree" : "DISAGREE";
        os << "| " << row.n << " | " << (row.formula_plus.complex ? "complex" : cell(row.formula_plus.energy)) << " | "
           << (row.formula_minus.complex ? "complex" : cell(row.formula_minus.energy)) << " | "
           << (row.root.found ? cell(row.root.energy) : "n/a") << " | " << cell(row.E_numeric) << " | "
           << cell(row.dev_root_numeric) << " | " << cell(row.dev_formula_root) << " | " << status << " |\n";
    }
    os << "\nThe printed parameter dictionary evaluated at each root (first condition residual, |Delta|/scale):\n\n";
    for (const auto& row : r.rows) {
        os << "- n = " << row.n << ": " << format_double(row.printed_dictionary_truncation) << ", "
           << format_double(row.printed_dictionary_delta) << "\n";
    }
}

}  // namespace pdm
