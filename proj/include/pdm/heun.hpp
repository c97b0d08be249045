#pragma once

// Confluent Heun function Hc(alpha, beta, gamma, delta, eta; y), normalised by
// Hc(0) = 1, in the convention
//
//   H'' + [alpha + (beta+1)/y + (gamma+1)/(y-1)] H' + [mu/y + nu/(y-1)] H = 0
//   mu = (alpha - beta - gamma + alpha beta - beta gamma)/2 - eta
//   nu = (alpha + beta + gamma + alpha gamma + beta gamma)/2 + delta + eta
//
// beta is complex when 4 Gamma Eps > 1 in the oscillator problem; everything
// below is evaluated in complex arithmetic and flagged instead of rejected.

#include <complex>
#include <cstddef>
#include <vector>

namespace pdm {

using cplx = std::complex<double>;

struct HeunParams {
    double alpha = 0.0;
    cplx beta = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
    double eta = 0.0;

    bool unphysical() const noexcept { return beta.imag() != 0.0; }
};

struct AccessoryCoeffs {
    cplx mu;
    cplx nu_ode;
};

AccessoryCoeffs accessory(const HeunParams& p);

// Parameters whose accessory coefficients are the given (mu, nu), keeping
// alpha, beta, gamma: eta solves the mu relation, delta the nu relation.
HeunParams with_accessory(double alpha, cplx beta, double gamma, cplx mu, cplx nu);

struct HeunValue {
    cplx value;
    cplx derivative;
};

// c_0 ... c_{terms-1} of the Frobenius series about y = 0, from
// (k+1)(k+beta+1) c_{k+1} = [k(k+beta+gamma+1-alpha) - mu] c_k + [alpha(k-1) + mu + nu] c_{k-1}.
std::vector<cplx> series_coefficients(const HeunParams& p, std::size_t terms);

constexpr double default_series_radius = 0.5;

// Series evaluation for |y| < radius. Stops once three consecutive terms fall
// below tol * |partial sum|; NoConvergence after 10^4 terms.
HeunValue heunc_series(const HeunParams& p, double y, double tol = 1e-16,
                       double radius = default_series_radius);

// Integrates the ODE from (y0, start) to y1 along the real axis with an
// embedded Runge-Kutta-Fehlberg 7(8) pair at relative tolerance rtol.
// The segment must not contain 0 or 1. Throws StepFailure with the location.
HeunValue heunc_integrate(const HeunParams& p, double y0, const HeunValue& start, double y1,
                          double rtol = 1e-12);

// Series inside the radius, otherwise series at y = -radius followed by ODE
// continuation to y_target. Requires y_target <= 0.
HeunValue heunc_continue(const HeunParams& p, double y_target, double rtol = 1e-12,
                         double radius = default_series_radius);

// H'' reconstructed from the ODE at (y, H, H').
cplx heun_second_derivative(const HeunParams& p, double y, const HeunValue& v);

// delta/alpha + (beta+gamma)/2 + 1 + n. Throws DivisionByZero for alpha = 0.
cplx first_truncation_residual(const HeunParams& p, std::size_t n);

struct DeltaDeterminant {
    cplx value;          // det of the (n+1)x(n+1) recurrence matrix
    double scale = 1.0;  // product of max(1, row 2-norm), for relative tests
    double log_scale = 0.0;  // log of the accumulated step rescaling
};

// Determinant of the tridiagonal matrix with
//   diag   a_k = mu - k(k+beta+gamma+1-alpha)
//   upper  b_k = (k+1)(k+beta+1)
//   lower  c_k = -(alpha(k-1) + mu + nu)
// for k = 0..n, i.e. the condition for c_{n+1} = 0 in the series. Computed by
// D_{k+1} = a_k D_k - b_{k-1} c_k D_{k-1}, rescaling by max(1, |D_k|) each step.
DeltaDeterminant delta_determinant(const HeunParams& p, std::size_t n);

struct PolynomialCheck {
    bool polynomial = false;
    cplx truncation_residual;
    DeltaDeterminant delta;
    double coefficient_ratio = 0.0;  // |c_{n+1}| / max_{k<=n} |c_k|
};

PolynomialCheck polynomial_check(const HeunParams& p, std::size_t n, double tol = 1e-8);
bool is_polynomial(const HeunParams& p, std::size_t n, double tol = 1e-8);

}  // namespace pdm
