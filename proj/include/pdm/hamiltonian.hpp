#pragma once

// von Roos kinetic operator, the ordering-induced potential U_k and the
// flux-conservative (BenDaniel-Duke) tridiagonal Hamiltonian.
//
// Common (alpha, beta, gamma) choices in the von Roos family, for reference:
//   BenDaniel-Duke   (0, -1, 0)     Zhu-Kroemer  (-1/2, 0, -1/2)
//   Li-Kuhn          (0, -1/2, -1/2) Gora-Williams (-1, 0, 0)
// In the K0-supplemented operator used here, (0, -1, 0) plays the role of Weyl
// ordering and the ambiguity-free selection is (alpha, gamma) in {(0,1), (1,0)}.

#include <iosfwd>
#include <string>
#include <vector>

#include "pdm/core.hpp"

namespace pdm {

class OrderingParams {
public:
    // Throws BadParameter unless alpha + beta + gamma = -1 within 1e-12.
    OrderingParams(double alpha, double beta, double gamma);

    static OrderingParams from_alpha_gamma(double alpha, double gamma) {
        return OrderingParams(alpha, -1.0 - alpha - gamma, gamma);
    }
    static OrderingParams ambiguity_free() { return OrderingParams(0.0, -2.0, 1.0); }
    static OrderingParams weyl() { return OrderingParams(0.0, -1.0, 0.0); }

    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    double gamma() const noexcept { return gamma_; }

private:
    double alpha_, beta_, gamma_;
};

// U_k(x) = -(hbar^2 / 4 m^3) [ (alpha+gamma-1) (m/2) m'' + (1 - alpha gamma - alpha - gamma) m'^2 ]
double uk_potential(const OrderingParams& ordering, const MassProfile& profile, double x,
                    const Units& units = {});

struct AmbiguityCheck {
    bool ambiguity_free = false;
    double sum_residual = 0.0;      // alpha + gamma - 1
    double product_residual = 0.0;  // alpha gamma + alpha + gamma - 1
};

AmbiguityCheck check_ambiguity_free(const OrderingParams& ordering);

struct DiscreteHamiltonian {
    struct Meta {
        double alpha = 0.0, beta = -2.0, gamma = 1.0;
        std::string profile_id;
        bool bdd = true;
    };

    std::vector<double> diag;
    std::vector<double> offdiag;
    Grid grid;
    Meta meta;

    std::size_t size() const noexcept { return diag.size(); }
    // Infinity norm of the symmetric tridiagonal matrix.
    double norm_inf() const;
    // y = H x
    std::vector<double> apply(const std::vector<double>& x) const;
    // Indices i where offdiag[i] == 0 exactly (decoupled blocks begin at i+1).
    std::vector<std::size_t> split_points() const;
};

// diag_i = (w_{i-1/2} + w_{i+1/2}) / h^2 + V(x_i);  offdiag_i = -w_{i+1/2} / h^2
// with w = hbar^2 / (2 m) at the flux midpoints and Dirichlet walls just outside
// the first and last node. A Singular midpoint at x = 0 gives w = 0 exactly.
DiscreteHamiltonian assemble_bdd(const Grid& grid, const MassProfile& profile, const HarmonicPotential& V,
                                 const Units& units = {});
DiscreteHamiltonian assemble_bdd(const ProblemSetup& setup);

// BDD stencil plus U_k(x_i) on the diagonal.
DiscreteHamiltonian assemble_vonroos(const Grid& grid, const MassProfile& profile, const HarmonicPotential& V,
                                     const OrderingParams& ordering, const Units& units = {});

// Two columns, "diag,offdiag"; the final row leaves offdiag empty.
void write_csv(std::ostream& os, const DiscreteHamiltonian& H);

}  // namespace pdm
