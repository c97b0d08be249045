#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pdm/analytic.hpp"
#include "pdm/config.hpp"

namespace pdm::cli {

inline constexpr const char* summary_schema = "pdm-spectra/summary/1";

struct RunConfig {
    std::string command;  // solve | analytic | compare | dispersion | sweep | heun-dump | figures
    CoreConfig core;
    std::optional<double> gamma;  // when set, omega0 = gamma hbar / (m0 x0^2)
    double sigma = 1.0;
    std::size_t levels = 4;
    Branch branch = Branch::Plus;
    double window = 2.0;
    std::size_t refinements = 8;
    double tolerance = 1e-5;
    bool constant_mass = false;
    std::vector<double> gammas{0.01, 0.02, 0.05};
    std::string out_dir = "pdm_out";
    std::vector<std::string> formats{"csv", "json", "md"};
    double k_max = 3.0;
    std::size_t points = 300;
    std::optional<double> eps;  // heun-dump
    std::size_t terms = 20;
    std::size_t level = 0;
    double fig3_x0 = 0.1;

    bool wants(const std::string& format) const;
    nlohmann::json to_json() const;
};

// Defaults, then the JSON file given by --config, then command-line flags.
// Throws UsageError (exit status 2) for unknown keys, bad values or a missing command.
// -h/--help is meant for main_entry, which prints the help text and returns 0.
RunConfig parse_config(int argc, const char* const* argv);

// Runs the command, writes artifacts under out_dir and a human summary to `log`.
// Returns 0 on success and 1 on numerical failure.
int run(const RunConfig& config, std::ostream& log);

// parse + run with the exit-status mapping 0 / 1 / 2.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Worker count for sweeps: PDM_SPECTRA_THREADS if set (>= 1), else the hardware count.
std::size_t sweep_threads();

}  // namespace pdm::cli
