#pragma once

// Reciprocal-space view of the singular mass: E(k) = (hbar^2/m0k)[k ln(sigma k) - k]
// with m0k = sqrt(2 pi) m0 x0^2, its second-derivative relation, and a numerical
// Fourier transform of m(x) for comparison.

#include <functional>
#include <vector>

#include "pdm/core.hpp"

namespace pdm {

struct DispersionModel {
    double m0k = 1.0;
    double sigma = 1.0;
    Units units;
};

double reciprocal_mass_scale(double m0, double x0);
DispersionModel make_dispersion_model(double m0, double x0, double sigma = 1.0, const Units& units = {});

// Throws DomainError for k <= 0.
double dispersion_energy(double k, const DispersionModel& model);

// d2E/dk2 by a central difference evaluated in extended precision.
double dispersion_second_derivative(const DispersionModel& model, double k, double h_step);

// |E''(k) m0k k - hbar^2| with E'' from dispersion_second_derivative. Requires k > 2 h_step.
double dispersion_consistency(const DispersionModel& model, double k, double h_step);

struct CurvePoint {
    double k = 0.0;
    double E = 0.0;
};

// Stationary point of E(k) (the root of E'(k) = (hbar^2/m0k) ln(sigma k)) and the
// positive zero of E(k), both by bisection to a relative width of tol.
CurvePoint dispersion_minimum(const DispersionModel& model, double tol = 1e-14);
CurvePoint dispersion_zero(const DispersionModel& model, double tol = 1e-14);

// Golden-section search for a minimum of f on [a, b] to width tol.
double golden_section_minimum(const std::function<double(double)>& f, double a, double b, double tol = 1e-10);

std::vector<CurvePoint> dispersion_curve(const DispersionModel& model, double k_max, std::size_t points);

// Integral over the real line of cos(k x) / (x^2 + eps^2); k != 0, eps > 0.
double regularized_fourier_integral(double k, double eps);

struct ReciprocalMass {
    double k = 0.0;
    double delta_coefficient = 0.0;  // m(x) -> m0 contributes delta_coefficient * delta(k)
    std::vector<double> eps;
    std::vector<double> finite_parts;  // regularized integral minus pi/eps, per eps
    double finite_part = 0.0;          // eps -> 0 Richardson limit (tends to -pi |k|)
    double regular = 0.0;              // (m0 x0^2 / sqrt(2 pi)) * finite_part
    double regular_closed_form = 0.0;  // -sqrt(pi/2) m0 x0^2 |k|
    double inferred = 0.0;             // m0k * k, implied by E'' = hbar^2 / m(k)
    double error_estimate = 0.0;
};

// Distributional transform (1/sqrt(2 pi)) \int m(x) e^{-ikx} dx of the Singular
// profile, with the 1/x^2 part regularised as 1/(x^2+eps^2) and the divergent
// pi/eps removed. Throws NoConvergence when the eps extrapolation is unstable.
ReciprocalMass reciprocal_mass_numeric(const MassProfile& profile, double k,
                                       const std::vector<double>& eps = {1e-2, 5e-3, 2.5e-3});

}  // namespace pdm
