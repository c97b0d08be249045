#include "pdm/config.hpp"

#include <cmath>

namespace pdm {

const std::set<std::string>& CoreConfig::keys() {
    static const std::set<std::string> k{"m0", "x0", "omega0", "hbar", "L", "N", "staggered"};
    return k;
}

double CoreConfig::box_half_width() const {
    if (L) return *L;
    return auto_box_lengths * std::sqrt(hbar / (m0 * omega0));
}

Grid CoreConfig::grid(const MassProfile& profile) const {
    const auto avoid = profile.is_singular() ? std::vector<double>{} : profile.singular_points();
    return build_grid(box_half_width(), N, staggered, avoid);
}

ProblemSetup CoreConfig::singular_problem() const {
    validate();
    ProblemSetup s;
    s.profile = MassProfile::singular(m0, x0);
    s.grid = grid(s.profile);
    s.potential = HarmonicPotential(m0, omega0);
    s.units = units();
    return s;
}

ProblemSetup CoreConfig::constant_mass_problem() const {
    validate();
    ProblemSetup s;
    s.profile = MassProfile::constant(m0);
    s.grid = grid(s.profile);
    s.potential = HarmonicPotential(m0, omega0);
    s.units = units();
    return s;
}

void CoreConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw Error(ErrorKind::UsageError, std::string(name) + " must be positive");
    };
    positive(m0, "m0");
    positive(x0, "x0");
    positive(omega0, "omega0");
    positive(hbar, "hbar");
    if (L) positive(*L, "L");
    if (N < 3) throw Error(ErrorKind::UsageError, "N must be at least 3");
}

nlohmann::json CoreConfig::to_json() const {
    nlohmann::json j{{"m0", m0}, {"x0", x0}, {"omega0", omega0}, {"hbar", hbar},
                     {"L", box_half_width()}, {"N", N}, {"staggered", staggered}};
    return j;
}

CoreConfig core_config_from_json(const nlohmann::json& j, const std::set<std::string>& extra_keys) {
    if (!j.is_object()) throw Error(ErrorKind::UsageError, "config must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (!CoreConfig::keys().count(key) && !extra_keys.count(key))
            throw Error(ErrorKind::UsageError, "unknown config key '" + key + "'");
    }
    CoreConfig c;
    try {
        if (j.contains("m0")) c.m0 = j.at("m0").get<double>();
        if (j.contains("x0")) c.x0 = j.at("x0").get<double>();
        if (j.contains("omega0")) c.omega0 = j.at("omega0").get<double>();
        if (j.contains("hbar")) c.hbar = j.at("hbar").get<double>();
        if (j.contains("L")) c.L = j.at("L").get<double>();
        if (j.contains("N")) c.N = j.at("N").get<std::size_t>();
        if (j.contains("staggered")) c.staggered = j.at("staggered").get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::UsageError, std::string("bad config value: ") + e.what());
    }
    c.validate();
    return c;
}

}  // namespace pdm
