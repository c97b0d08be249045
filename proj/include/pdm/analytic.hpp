#pragma once

// Closed-form layer of the oscillator with singular mass: Frobenius exponent,
// Heun parameter dictionary, spectrum formula and bounds, quantization roots,
// analytic eigenfunctions and their densities.

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pdm/core.hpp"
#include "pdm/heun.hpp"

namespace pdm {

enum class Branch { Plus = 1, Minus = -1 };

inline double sign(Branch b) { return b == Branch::Plus ? 1.0 : -1.0; }
Branch parse_branch(const std::string& s);
std::string to_string(Branch b);

// True when 4 Eps Gamma > 1: the origin exponents, beta and the continuum
// threshold all turn complex.
inline bool complex_regime(double Gamma, double Eps) { return 4.0 * Eps * Gamma > 1.0; }

// lambda = -1/4 + branch * sqrt(1 - 4 Eps Gamma) / 4
cplx lambda_exponent(double Gamma, double Eps, Branch branch);

// Parameter dictionary exactly as printed:
//   alpha = Gamma, beta = branch sqrt(1 - 4 Eps Gamma)/2, gamma = -2,
//   delta = -(Gamma/4)(Eps - Gamma), eta = [4(Gamma+1) - Eps + 3 branch sqrt(1 - 4 Eps Gamma)]/4
HeunParams heun_params_from(double Gamma, double Eps, Branch branch);

// Same alpha, beta, gamma, delta with eta = 5/4 + Gamma (Eps - Gamma)/4, the value
// that makes the transformed Schroedinger equation coincide with the Heun ODE.
// Used by the root finder and the wavefunctions.
HeunParams heun_params_rederived(double Gamma, double Eps, Branch branch);

struct FormulaEnergy {
    double energy = 0.0;  // NaN when complex
    std::complex<double> value;
    bool complex = false;
};

// E_n = (2n - Gamma/2 + branch sqrt(1 - 16 n Gamma)/2) hbar omega0
FormulaEnergy spectrum_formula(std::size_t n, double Gamma, Branch branch, double omega0, const Units& units = {});

// (p + 1/2) hbar omega0
double spectrum_constant_mass(std::size_t p, double omega0, const Units& units = {});

// 1/(16 n) and hbar / (16 n m0 x0^2). BadLevel for n = 0.
double gamma_bound(std::size_t n);
double frequency_bound(std::size_t n, double m0, double x0, const Units& units = {});

struct QuantizationRoot {
    std::size_t n = 0;
    bool found = false;
    double Eps = 0.0;
    double energy = 0.0;           // Eps hbar omega0 / 2
    double truncation_residual = 0.0;
    double delta = 0.0;            // Delta_{n+1} at the root
    double delta_scale = 1.0;
    bool polynomial = false;       // is_polynomial at the root
    bool above_continuum = false;  // 4 Eps Gamma >= 1
    std::string message;
};

struct RootSearchOptions {
    double half_width = 2.0;  // window [4n+1 - w, 4n+1 + w]
    std::size_t scan_points = 400;
    double tolerance = 1e-10;
    double polynomial_tol = 1e-8;
};

// For each n <= n_max, brackets sign changes of the first truncation residual
// over the window, refines by bisection, and checks Delta_{n+1} and the series
// truncation at the root. Gamma > 0. Failed levels carry found = false.
std::vector<QuantizationRoot> quantization_roots(double Gamma, std::size_t n_max, Branch branch, double omega0,
                                                 const Units& units = {}, const RootSearchOptions& opts = {});

struct OscillatorParams {
    double m0 = 1.0;
    double omega0 = 1.0;
    double x0 = 1.0;
    Units units;

    double gamma() const { return m0 * omega0 * x0 * x0 / units.hbar; }
    double length() const { return oscillator_length(m0, omega0, units); }
};

// Psi^(1)(x) = (x^2/x0^2)^lambda exp(-m0 omega0 x^2 / 2 hbar) Hc(params; -x^2/x0^2)
// Psi^(2)(x) uses the exponent lambda - beta and the -beta parameter set.
// The constant phase of the negative base is dropped, so Psi is real for real
// lambda. At a polynomial root the Heun factor is the truncated polynomial and
// the norm is closed form; otherwise Hc comes from series + ODE continuation
// and normalization is left to the caller.
class AnalyticWavefunction {
public:
    AnalyticWavefunction(const OscillatorParams& osc, double Eps, Branch branch, int which,
                         std::optional<std::size_t> degree = std::nullopt);

    double operator()(double x) const;

    double origin_exponent() const { return 2.0 * exponent_; }  // psi ~ |x|^s
    bool square_integrable() const { return 2.0 * origin_exponent() > -1.0; }
    bool polynomial() const { return degree_.has_value(); }
    double norm() const { return norm_; }
    const HeunParams& params() const { return params_; }
    const std::vector<double>& coefficients() const { return coeffs_; }
    double exponent() const { return exponent_; }

private:
    OscillatorParams osc_;
    double Eps_;
    double exponent_ = 0.0;
    HeunParams params_;
    std::optional<std::size_t> degree_;
    std::vector<double> coeffs_;
    double norm_ = 1.0;  // divides the raw expression
};

// Square integrability at the origin of Psi^(which) on the given branch.
struct Admissibility {
    double origin_exponent = 0.0;
    bool square_integrable = false;
};
Admissibility admissibility(double Gamma, double Eps, Branch branch, int which);

struct DensitySample {
    std::vector<double> x;
    std::vector<double> density;
    double Eps = 0.0;
    double energy = 0.0;
    std::size_t nodes_per_half_line = 0;
};

// |Psi|^2 of level n on the nodes of `grid`, trapezoid-normalised to 1.
DensitySample probability_density(std::size_t n, Branch branch, int which, const OscillatorParams& osc,
                                  const Grid& grid);

}  // namespace pdm
