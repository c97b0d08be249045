#pragma once

// Per-level comparison of the three energy routes for the singular-mass
// oscillator: closed-form formula (both branches), polynomial quantization roots,
// and the grid eigensolver with refinement extrapolation.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "pdm/analytic.hpp"
#include "pdm/core.hpp"

namespace pdm {

struct SpectrumRow {
    std::size_t n = 0;
    double Gamma = 0.0;
    FormulaEnergy formula_plus;
    FormulaEnergy formula_minus;
    QuantizationRoot root;
    double E_numeric = 0.0;       // extrapolated
    double E_numeric_raw = 0.0;   // finest grid
    double numeric_error_estimate = 0.0;
    double numeric_leading_order = 2.0;
    bool numeric_reliable = true;
    bool above_continuum = false;
    double dev_root_numeric = 0.0;     // E_rootfind - E_numeric
    double dev_formula_root = 0.0;     // E_formula(+) - E_rootfind
    double printed_dictionary_truncation = 0.0;  // first condition with the printed eta
    double printed_dictionary_delta = 0.0;       // Delta_{n+1} / scale with the printed eta
};

struct SpectrumResult {
    double Gamma = 0.0;
    double omega0 = 1.0;
    double hbar = 1.0;
    Branch branch = Branch::Plus;
    double continuum_threshold = 0.0;
    std::vector<SpectrumRow> rows;  // sorted by n
};

struct SpectrumOptions {
    Branch branch = Branch::Plus;
    RootSearchOptions roots;
    std::size_t refinements = 8;      // grids N, 2N, ..., 2^r N
    bool numeric = true;
};

// Half-line level n of the singular oscillator appears twice in the full-line
// matrix (indices 2n and 2n+1); the lower index is used.
SpectrumResult compare_spectrum(const ProblemSetup& setup, std::size_t n_max, const SpectrumOptions& opts = {});

void write_spectrum_csv(std::ostream& os, const SpectrumResult& r);
nlohmann::json spectrum_to_json(const SpectrumResult& r);
void write_spectrum_markdown(std::ostream& os, const SpectrumResult& r, double tolerance = 1e-5);

}  // namespace pdm
