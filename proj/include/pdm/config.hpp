#pragma once

#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "pdm/core.hpp"

namespace pdm {

// Physical and grid configuration: JSON keys m0, x0, omega0, hbar, L, N, staggered.
// When L is absent the box half-width defaults to `auto_box_lengths` oscillator
// lengths sqrt(hbar / (m0 omega0)).
struct CoreConfig {
    double m0 = 1.0;
    double x0 = 1.0;
    double omega0 = 1.0;
    double hbar = 1.0;
    std::optional<double> L;
    std::size_t N = 4000;
    bool staggered = true;

    static constexpr double auto_box_lengths = 10.0;
    static const std::set<std::string>& keys();

    Units units() const { return Units::with_hbar(hbar); }
    double gamma() const { return m0 * omega0 * x0 * x0 / hbar; }
    double box_half_width() const;
    Grid grid(const MassProfile& profile) const;
    ProblemSetup singular_problem() const;
    ProblemSetup constant_mass_problem() const;
    void validate() const;

    nlohmann::json to_json() const;
};

// Reads the core keys from `j`. Keys outside `CoreConfig::keys()` and `extra_keys`
// are rejected with UsageError; extra keys are left for the caller.
CoreConfig core_config_from_json(const nlohmann::json& j, const std::set<std::string>& extra_keys = {});

}  // namespace pdm
