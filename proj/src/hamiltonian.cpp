#include "pdm/hamiltonian.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "pdm/io.hpp"

namespace pdm {

OrderingParams::OrderingParams(double alpha, double beta, double gamma)
    : alpha_(alpha), beta_(beta), gamma_(gamma) {
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(gamma) ||
        std::abs(alpha + beta + gamma + 1.0) > 1e-12) {
        std::ostringstream os;
        os << "von Roos exponents must satisfy alpha+beta+gamma=-1 (got " << alpha << ", " << beta << ", "
           << gamma << ")";
        throw Error(ErrorKind::BadParameter, os.str());
    }
}

double uk_potential(const OrderingParams& o, const MassProfile& profile, double x, const Units& units) {
    for (double s : profile.singular_points()) {
        if (x == s) throw Error(ErrorKind::SingularPoint, "U_k evaluated at a singular point of m(x)");
    }
    const double a = o.alpha(), g = o.gamma();
    const double m = eval_mass(profile, x);
    const double dm = profile.first_derivative(x);
    const double d2m = profile.second_derivative(x);
    const double bracket = (a + g - 1.0) * 0.5 * m * d2m + (1.0 - a * g - a - g) * dm * dm;
    return -units.hbar * units.hbar / (4.0 * m * m * m) * bracket;
}

AmbiguityCheck check_ambiguity_free(const OrderingParams& o) {
    AmbiguityCheck c;
    c.sum_residual = o.alpha() + o.gamma() - 1.0;
    c.product_residual = o.alpha() * o.gamma() + o.alpha() + o.gamma() - 1.0;
    c.ambiguity_free = std::abs(c.sum_residual) <= 1e-12 && std::abs(c.product_residual) <= 1e-12;
    return c;
}

double DiscreteHamiltonian::norm_inf() const {
    double best = 0.0;
    const std::size_t n = diag.size();
    for (std::size_t i = 0; i < n; ++i) {
        double row = std::abs(diag[i]);
        if (i > 0) row += std::abs(offdiag[i - 1]);
        if (i + 1 < n) row += std::abs(offdiag[i]);
        best = std::max(best, row);
    }
    return best;
}

std::vector<double> DiscreteHamiltonian::apply(const std::vector<double>& x) const {
    const std::size_t n = diag.size();
    if (x.size() != n) throw Error(ErrorKind::BadParameter, "vector length does not match the matrix");
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = diag[i] * x[i];
        if (i > 0) v += offdiag[i - 1] * x[i - 1];
        if (i + 1 < n) v += offdiag[i] * x[i + 1];
        y[i] = v;
    }
    return y;
}

std::vector<std::size_t> DiscreteHamiltonian::split_points() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < offdiag.size(); ++i)
        if (offdiag[i] == 0.0) out.push_back(i);
    return out;
}

namespace {

double flux_weight(const MassProfile& profile, double x, const Units& units) {
    if (profile.is_singular()) {
        // 1/m(0) = 0: the two half-lines decouple at an exact-zero midpoint.
        return 0.5 * units.hbar * units.hbar * profile.inverse_mass(x);
    }
    for (double s : profile.singular_points()) {
        if (x == s) {
            std::ostringstream os;
            os << "flux midpoint x=" << x << " hits a singular point of " << profile.id();
            throw Error(ErrorKind::SingularPoint, os.str());
        }
    }
    return 0.5 * units.hbar * units.hbar * profile.inverse_mass(x);
}

}  // namespace

DiscreteHamiltonian assemble_bdd(const Grid& grid, const MassProfile& profile, const HarmonicPotential& V,
                                 const Units& units) {
    const std::size_t n = grid.size();
    if (n < 3 || grid.nodes.size() != n) throw Error(ErrorKind::BadGrid, "grid is not initialised");
    for (double s : profile.singular_points()) {
        for (double x : grid.nodes) {
            if (x == s && !profile.is_singular())
                throw Error(ErrorKind::SingularPoint, "grid node coincides with a singular point");
        }
    }

    std::vector<double> w(n + 1);
    for (std::size_t i = 0; i <= n; ++i) w[i] = flux_weight(profile, grid.midpoint(i), units);

    DiscreteHamiltonian H;
    H.grid = grid;
    H.diag.resize(n);
    H.offdiag.resize(n - 1);
    const double inv_h2 = 1.0 / (grid.h * grid.h);
    for (std::size_t i = 0; i < n; ++i) H.diag[i] = (w[i] + w[i + 1]) * inv_h2 + eval_potential(V, grid.nodes[i]);
    for (std::size_t i = 0; i + 1 < n; ++i) H.offdiag[i] = -w[i + 1] * inv_h2;
    H.meta.profile_id = profile.id();
    return H;
}

DiscreteHamiltonian assemble_bdd(const ProblemSetup& setup) {
    return assemble_bdd(setup.grid, setup.profile, setup.potential, setup.units);
}

DiscreteHamiltonian assemble_vonroos(const Grid& grid, const MassProfile& profile, const HarmonicPotential& V,
                                     const OrderingParams& ordering, const Units& units) {
    DiscreteHamiltonian H = assemble_bdd(grid, profile, V, units);
    for (std::size_t i = 0; i < H.size(); ++i) H.diag[i] += uk_potential(ordering, profile, grid.nodes[i], units);
    H.meta.alpha = ordering.alpha();
    H.meta.beta = ordering.beta();
    H.meta.gamma = ordering.gamma();
    H.meta.bdd = check_ambiguity_free(ordering).ambiguity_free;
    return H;
}

void write_csv(std::ostream& os, const DiscreteHamiltonian& H) {
    os << "diag,offdiag\n";
    for (std::size_t i = 0; i < H.size(); ++i) {
        os << format_double(H.diag[i]) << ',';
        if (i < H.offdiag.size()) os << format_double(H.offdiag[i]);
        os << '\n';
    }
}

}  // namespace pdm
