#include "pdm/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pdm {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::SingularPoint: return "SingularPoint";
        case ErrorKind::BadGrid: return "BadGrid";
        case ErrorKind::BadParameter: return "BadParameter";
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::StepFailure: return "StepFailure";
        case ErrorKind::DivisionByZero: return "DivisionByZero";
        case ErrorKind::BadLevel: return "BadLevel";
        case ErrorKind::ZeroVector: return "ZeroVector";
        case ErrorKind::NoRootInWindow: return "NoRootInWindow";
        case ErrorKind::UsageError: return "UsageError";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

Units Units::with_hbar(double hbar) {
    if (!(hbar > 0.0)) throw Error(ErrorKind::BadParameter, "hbar must be positive");
    Units u;
    u.hbar = hbar;
    u.convention_note = hbar == 1.0 ? "natural units, hbar = 1" : "user-supplied hbar";
    return u;
}

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << name << " must be positive and finite (got " << v << ")";
        throw Error(ErrorKind::BadParameter, os.str());
    }
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_custom_point(const CustomMass& c, double x) {
    for (double s : c.singular_points) {
        if (x == s) {
            std::ostringstream os;
            os << "custom profile '" << c.id << "' evaluated at its singular point x=" << s;
            throw Error(ErrorKind::SingularPoint, os.str());
        }
    }
}

double custom_mass(const CustomMass& c, double x) {
    check_custom_point(c, x);
    const double m = c.mass(x);
    if (!(m > 0.0) || !std::isfinite(m)) {
        std::ostringstream os;
        os << "custom profile '" << c.id << "' returned non-positive mass " << m << " at x=" << x;
        throw Error(ErrorKind::SingularPoint, os.str());
    }
    return m;
}

}  // namespace

MassProfile MassProfile::singular(double m0, double x0) {
    require_positive(m0, "m0");
    require_positive(x0, "x0");
    return MassProfile(SingularMass{m0, x0});
}

MassProfile MassProfile::constant(double m0) {
    require_positive(m0, "m0");
    return MassProfile(ConstantMass{m0});
}

MassProfile MassProfile::custom(CustomMass def) {
    if (!def.mass) throw Error(ErrorKind::BadParameter, "custom mass profile needs a callable");
    require_positive(def.length_scale, "length_scale");
    std::sort(def.singular_points.begin(), def.singular_points.end());
    return MassProfile(std::move(def));
}

double MassProfile::m0() const {
    return std::visit(overloaded{[](const SingularMass& s) { return s.m0; },
                                 [](const ConstantMass& c) { return c.m0; },
                                 [](const CustomMass& c) { return c.mass(c.length_scale); }},
                      kind_);
}

std::vector<double> MassProfile::singular_points() const {
    return std::visit(overloaded{[](const SingularMass&) { return std::vector<double>{0.0}; },
                                 [](const ConstantMass&) { return std::vector<double>{}; },
                                 [](const CustomMass& c) { return c.singular_points; }},
                      kind_);
}

std::string MassProfile::id() const {
    return std::visit(overloaded{[](const SingularMass& s) {
                                     std::ostringstream os;
                                     os << "singular(m0=" << s.m0 << ",x0=" << s.x0 << ")";
                                     return os.str();
                                 },
                                 [](const ConstantMass& c) {
                                     std::ostringstream os;
                                     os << "constant(m0=" << c.m0 << ")";
                                     return os.str();
                                 },
                                 [](const CustomMass& c) { return c.id; }},
                      kind_);
}

double eval_mass(const MassProfile& profile, double x) {
    return std::visit(overloaded{[x](const SingularMass& s) {
                                     if (x == 0.0)
                                         throw Error(ErrorKind::SingularPoint,
                                                     "singular mass evaluated at x=0");
                                     const double r = s.x0 / x;
                                     return s.m0 * (1.0 + r * r);
                                 },
                                 [](const ConstantMass& c) { return c.m0; },
                                 [x](const CustomMass& c) { return custom_mass(c, x); }},
                      profile.kind());
}

double MassProfile::inverse_mass(double x) const {
    return std::visit(overloaded{[x](const SingularMass& s) {
                                     // x^2 / (m0 (x^2 + x0^2)), exactly 0 at the origin
                                     const double x2 = x * x;
                                     return x2 / (s.m0 * (x2 + s.x0 * s.x0));
                                 },
                                 [](const ConstantMass& c) { return 1.0 / c.m0; },
                                 [x](const CustomMass& c) { return 1.0 / custom_mass(c, x); }},
                      kind_);
}

double MassProfile::first_derivative(double x) const {
    return std::visit(overloaded{[x](const SingularMass& s) {
                                     if (x == 0.0)
                                         throw Error(ErrorKind::SingularPoint,
                                                     "m'(x) evaluated at x=0");
                                     return -2.0 * s.m0 * s.x0 * s.x0 / (x * x * x);
                                 },
                                 [](const ConstantMass&) { return 0.0; },
                                 [x](const CustomMass& c) {
                                     const double d = 1e-5 * c.length_scale;
                                     return (custom_mass(c, x + d) - custom_mass(c, x - d)) / (2.0 * d);
                                 }},
                      kind_);
}

double MassProfile::second_derivative(double x) const {
    return std::visit(overloaded{[x](const SingularMass& s) {
                                     if (x == 0.0)
                                         throw Error(ErrorKind::SingularPoint,
                                                     "m''(x) evaluated at x=0");
                                     const double x2 = x * x;
                                     return 6.0 * s.m0 * s.x0 * s.x0 / (x2 * x2);
                                 },
                                 [](const ConstantMass&) { return 0.0; },
                                 [x](const CustomMass& c) {
                                     const double d = 1e-5 * c.length_scale;
                                     return (custom_mass(c, x + d) - 2.0 * custom_mass(c, x) +
                                             custom_mass(c, x - d)) /
                                            (d * d);
                                 }},
                      kind_);
}

HarmonicPotential::HarmonicPotential(double m0_, double omega0_) : m0(m0_), omega0(omega0_) {
    require_positive(m0, "m0");
    require_positive(omega0, "omega0");
}

double eval_potential(const HarmonicPotential& V, double x) {
    return 0.5 * V.m0 * V.omega0 * V.omega0 * x * x;
}

Grid build_grid(double L, std::size_t N, bool staggered, const std::vector<double>& avoid) {
    if (!(L > 0.0) || !std::isfinite(L)) throw Error(ErrorKind::BadGrid, "half-width L must be positive");
    if (N < 3) throw Error(ErrorKind::BadGrid, "need at least 3 interior nodes");

    Grid g;
    g.L = L;
    g.N = N;
    g.h = 2.0 * L / static_cast<double>(N + 1);
    g.staggered = staggered;

    auto fill = [&](double shift) {
        g.nodes.resize(N);
        for (std::size_t i = 0; i < N; ++i) {
            // Mirror the right half from the left so the symmetric grid is exactly odd.
            const std::size_t j = std::min(i, N - 1 - i);
            double x = -L + static_cast<double>(j + 1) * g.h;
            if (i != j) x = -x;
            if (2 * i + 1 == N) x = 0.0;
            g.nodes[i] = x + shift;
        }
    };
    auto collides = [&]() {
        const double tol = 1e-9 * g.h;
        for (double s : avoid)
            for (double x : g.nodes)
                if (std::abs(x - s) <= tol) return true;
        return false;
    };

    const double base_shift = (staggered && N % 2 == 1) ? -0.5 * g.h : 0.0;
    fill(base_shift);
    if (collides()) {
        for (double frac : {0.5, 0.25, 0.75, 0.125, 0.375}) {
            fill(base_shift - frac * g.h);
            if (!collides()) return g;
        }
        throw Error(ErrorKind::BadGrid, "could not place nodes away from the singular points");
    }
    return g;
}

DimensionlessSetup to_dimensionless(const PhysicalParams& setup, const Units& units) {
    require_positive(setup.omega0, "omega0");
    DimensionlessSetup d;
    d.Gamma = setup.m0 * setup.omega0 * setup.x0 * setup.x0 / units.hbar;
    d.Eps = 2.0 * setup.E / (units.hbar * setup.omega0);
    return d;
}

double energy_from_eps(double Eps, double omega0, const Units& units) {
    return 0.5 * Eps * units.hbar * omega0;
}

double omega_from_gamma(double Gamma, double m0, double x0, const Units& units) {
    require_positive(m0, "m0");
    require_positive(x0, "x0");
    return Gamma * units.hbar / (m0 * x0 * x0);
}

double oscillator_length(double m0, double omega0, const Units& units) {
    require_positive(m0, "m0");
    require_positive(omega0, "omega0");
    return std::sqrt(units.hbar / (m0 * omega0));
}

}  // namespace pdm
