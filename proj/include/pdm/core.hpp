#pragma once

// Domain types shared by every layer: units, the mass profile m(x), the
// harmonic potential, the uniform grid and the dimensionless (Gamma, Eps) pair.

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "pdm/error.hpp"

namespace pdm {

struct Units {
    double hbar = 1.0;
    std::string convention_note = "natural units, hbar = 1";

    static Units natural() { return {}; }
    static Units with_hbar(double hbar);
};

// m(x) = m0 (1 + x0^2 / x^2); diverges at the origin, tends to m0 at infinity.
struct SingularMass {
    double m0 = 1.0;
    double x0 = 1.0;
};

struct ConstantMass {
    double m0 = 1.0;
};

// User-supplied profile. The singular points are avoided by the grid builder and
// rejected by every evaluation; length_scale sets the finite-difference step
// used for m' and m''.
struct CustomMass {
    std::function<double(double)> mass;
    std::vector<double> singular_points;
    double length_scale = 1.0;
    std::string id = "custom";
};

class MassProfile {
public:
    using Kind = std::variant<SingularMass, ConstantMass, CustomMass>;

    static MassProfile singular(double m0, double x0);
    static MassProfile constant(double m0);
    static MassProfile custom(CustomMass def);

    const Kind& kind() const noexcept { return kind_; }
    bool is_singular() const noexcept { return std::holds_alternative<SingularMass>(kind_); }
    bool is_constant() const noexcept { return std::holds_alternative<ConstantMass>(kind_); }

    // Asymptotic mass m0 (for Custom: m at the length scale, informational only).
    double m0() const;
    std::vector<double> singular_points() const;
    std::string id() const;

    // Reciprocal mass 1/m(x). Well defined at the Singular origin, where it is 0.
    double inverse_mass(double x) const;

    // m'(x), m''(x): closed form for the built-in kinds, central differences
    // with step 1e-5 * length_scale for Custom.
    double first_derivative(double x) const;
    double second_derivative(double x) const;

private:
    explicit MassProfile(Kind kind) : kind_(std::move(kind)) {}
    Kind kind_;
};

double eval_mass(const MassProfile& profile, double x);

struct HarmonicPotential {
    double m0 = 1.0;
    double omega0 = 1.0;

    HarmonicPotential() = default;
    HarmonicPotential(double m0_, double omega0_);
};

double eval_potential(const HarmonicPotential& V, double x);

struct Grid {
    double L = 1.0;
    std::size_t N = 0;
    double h = 0.0;
    bool staggered = false;
    std::vector<double> nodes;

    // Flux point between node i-1 and node i, for i in [0, N]. Points 0 and N lie
    // half a cell outside the first and last interior node.
    double midpoint(std::size_t i) const {
        if (i == 0) return nodes.front() - 0.5 * h;
        if (i == N) return nodes.back() + 0.5 * h;
        return 0.5 * (nodes[i - 1] + nodes[i]);
    }
    std::size_t size() const noexcept { return N; }
};

// Uniform interior nodes on (-L, L) with spacing h = 2L/(N+1). For even N the
// grid is symmetric with a flux midpoint at 0 and no node there. A staggered grid
// with odd N is shifted by h/2 so that the origin is again a midpoint. Nodes that
// coincide with one of `avoid` are moved off by shifting the whole grid.
Grid build_grid(double L, std::size_t N, bool staggered, const std::vector<double>& avoid = {});

struct PhysicalParams {
    double m0 = 1.0;
    double omega0 = 1.0;
    double x0 = 1.0;
    double E = 0.0;
};

struct DimensionlessSetup {
    double Gamma = 0.0;
    double Eps = 0.0;
};

DimensionlessSetup to_dimensionless(const PhysicalParams& setup, const Units& units);
double energy_from_eps(double Eps, double omega0, const Units& units);
double omega_from_gamma(double Gamma, double m0, double x0, const Units& units);
// sqrt(hbar / (m0 omega0)); x = oscillator_length * xi.
double oscillator_length(double m0, double omega0, const Units& units);

struct ProblemSetup {
    Grid grid;
    MassProfile profile = MassProfile::singular(1.0, 1.0);
    HarmonicPotential potential;
    Units units;
};

}  // namespace pdm
