#pragma once

// Lowest eigenpairs of the symmetric tridiagonal BDD matrix: Sturm-sequence
// bisection for eigenvalues, inverse iteration for eigenvectors, grid-refinement
// studies for the discretisation error.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdm/core.hpp"
#include "pdm/hamiltonian.hpp"

namespace pdm {

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;  // trapezoid-normalised on the grid
    std::size_t index = 0;
    std::size_t block = 0;        // decoupled block that supports the vector
    double residual = 0.0;        // ||H u - value u||_2 for the unit 2-norm u
};

// Number of eigenvalues strictly below sigma (LDL^T pivots in extended precision).
std::size_t sturm_count(std::span<const double> diag, std::span<const double> offdiag, long double sigma);
std::size_t sturm_count(const DiscreteHamiltonian& H, double sigma);

// The k smallest eigenvalues, nondecreasing, bisected to 1e-12 absolute.
std::vector<double> eigenvalues_tridiag(const DiscreteHamiltonian& H, std::size_t k);

// The k smallest eigenpairs. The matrix is split at exact-zero couplings; each
// vector lives on one block. Throws NoConvergence with the achieved residual.
std::vector<EigenPair> eigen_tridiag(const DiscreteHamiltonian& H, std::size_t k);

// Scales v so that the trapezoid integral of v^2 over [-L, L] (zero at the
// walls) is 1. Throws ZeroVector.
std::vector<double> normalize(const Grid& grid, std::span<const double> v);
double trapezoid_norm2(const Grid& grid, std::span<const double> v);

struct LevelDiagnostics {
    double tail_left = 0.0;   // |psi| at the first node relative to max |psi|
    double tail_right = 0.0;
    bool tail_ok = true;      // both tails below 1e-8
    std::optional<std::size_t> degenerate_partner;
    bool above_continuum = false;  // value >= continuum threshold of the singular mass
    std::size_t sign_changes = 0;  // within the supporting block
};

struct BoundStates {
    std::vector<EigenPair> pairs;
    std::vector<LevelDiagnostics> levels;
    std::vector<std::string> warnings;
    double norm_inf = 0.0;
    std::size_t blocks = 1;
    std::optional<double> continuum_threshold;
};

// hbar^2 / (8 m0 x0^2) for the Singular profile: below it the half-line problem
// has discrete spectrum, above it the spectrum is continuous.
std::optional<double> continuum_threshold(const MassProfile& profile, const Units& units);

BoundStates solve_bound_states(const ProblemSetup& setup, std::size_t k);

// One eigenvalue followed through successive grid doublings N, 2N, 4N, ...
// The error model is a power series in h: {2, 4, 6, ...} for smooth profiles;
// for the Singular profile the eigenfunction behaves as |x|^s at the origin and
// the leading exponents are multiples of p = sqrt(1 - E / E_c) = 1 + 2s, then 2.
struct RefinementStudy {
    std::size_t index = 0;
    std::vector<std::size_t> N;
    std::vector<double> h;
    std::vector<double> values;
    std::vector<double> exponents;  // exponents used by the final extrapolant
    double leading_order = 2.0;
    double extrapolated = 0.0;      // generalised Richardson estimate of the h -> 0 limit
    double richardson_pair = 0.0;   // classical (N, 2N) estimate with the leading order
    double error_estimate = 0.0;    // change when the last exponent is dropped
    bool reliable = true;
    std::string model;
};

std::vector<RefinementStudy> refinement_study(const ProblemSetup& setup, std::span<const std::size_t> indices,
                                              std::size_t refinements);

// Solves for e_0 in E_j = e_0 + sum_q c_q h_j^q using the last (exponents+1) samples.
double generalized_richardson(std::span<const double> h, std::span<const double> values,
                              std::span<const double> exponents);

}  // namespace pdm
