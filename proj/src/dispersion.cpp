#include "pdm/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pdm/error.hpp"

namespace pdm {

double reciprocal_mass_scale(double m0, double x0) {
    if (!(m0 > 0.0) || !(x0 > 0.0)) throw Error(ErrorKind::BadParameter, "m0 and x0 must be positive");
    return std::sqrt(2.0 * std::numbers::pi) * m0 * x0 * x0;
}

DispersionModel make_dispersion_model(double m0, double x0, double sigma, const Units& units) {
    if (!(sigma > 0.0)) throw Error(ErrorKind::BadParameter, "sigma must be positive");
    return DispersionModel{reciprocal_mass_scale(m0, x0), sigma, units};
}

namespace {

long double energy_ld(long double k, const DispersionModel& m) {
    const long double h2 = static_cast<long double>(m.units.hbar) * m.units.hbar;
    return h2 / m.m0k * (k * std::log(static_cast<long double>(m.sigma) * k) - k);
}

}  // namespace

double dispersion_energy(double k, const DispersionModel& model) {
    if (!(k > 0.0)) throw Error(ErrorKind::DomainError, "dispersion energy needs k > 0");
    const double h2 = model.units.hbar * model.units.hbar;
    return h2 / model.m0k * (k * std::log(model.sigma * k) - k);
}

double dispersion_second_derivative(const DispersionModel& model, double k, double h_step) {
    if (!(k > 2.0 * h_step) || !(h_step > 0.0))
        throw Error(ErrorKind::DomainError, "finite difference needs 0 < 2 h_step < k");
    const long double kk = k, h = h_step;
    return static_cast<double>((energy_ld(kk + h, model) - 2.0L * energy_ld(kk, model) + energy_ld(kk - h, model)) /
                               (h * h));
}

double dispersion_consistency(const DispersionModel& model, double k, double h_step) {
    const double d2 = dispersion_second_derivative(model, k, h_step);
    return std::abs(d2 * model.m0k * k - model.units.hbar * model.units.hbar);
}

namespace {

double bisect(const std::function<double(double)>& f, double a, double b, double tol) {
    double fa = f(a);
    if ((fa < 0.0) == (f(b) < 0.0)) throw Error(ErrorKind::NoConvergence, "bisection interval has no sign change");
    while (b - a > tol * std::max(std::abs(a), std::abs(b))) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

CurvePoint dispersion_minimum(const DispersionModel& model, double tol) {
    const double s = model.sigma;
    const double k = bisect([&](double q) { return std::log(s * q); }, 0.1 / s, 10.0 / s, tol);
    return {k, dispersion_energy(k, model)};
}

CurvePoint dispersion_zero(const DispersionModel& model, double tol) {
    const double s = model.sigma;
    const double k = bisect([&](double q) { return s * q * std::log(s * q) - s * q; }, 1.5 / s, 5.0 / s, tol);
    return {k, dispersion_energy(k, model)};
}

double golden_section_minimum(const std::function<double(double)>& f, double a, double b, double tol) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

std::vector<CurvePoint> dispersion_curve(const DispersionModel& model, double k_max, std::size_t points) {
    if (points < 2 || !(k_max > 0.0)) throw Error(ErrorKind::BadParameter, "curve needs k_max > 0 and 2+ points");
    std::vector<CurvePoint> out;
    out.reserve(points);
    for (std::size_t i = 1; i <= points; ++i) {
        const double k = k_max * static_cast<double>(i) / static_cast<double>(points);
        out.push_back({k, dispersion_energy(k, model)});
    }
    return out;
}

double regularized_fourier_integral(double k, double eps) {
    if (k == 0.0) throw Error(ErrorKind::DomainError, "the regularised transform is evaluated at k != 0");
    if (!(eps > 0.0)) throw Error(ErrorKind::BadParameter, "eps must be positive");
    const double ak = std::abs(k);
    const double e2 = eps * eps;
    auto f = [&](double x) { return std::cos(ak * x) / (x * x + e2); };

    const double period = 2.0 * std::numbers::pi / ak;
    constexpr int periods = 100;
    const double X = periods * period;
    std::vector<double> cuts{0.0};
    for (double b = eps; b < std::min(period, X); b *= 4.0) cuts.push_back(b);
    for (int j = 1; j <= periods; ++j) cuts.push_back(j * period);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    long double body = 0.0L;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) body += GK::integrate(f, cuts[i], cuts[i + 1], 10, 1e-13);

    // Tail beyond X (where sin kX = 0, cos kX = 1): repeated integration by parts,
    //   \int_X^inf cos(kx) g dx = -sum_m (-1)^m g^{(2m+1)}(X) / k^{2m+2},
    // with g = sum_j (-eps^2)^j x^{-2-2j}.
    auto dpow = [](double p, int order, double x) {
        double c = 1.0;
        for (int i = 0; i < order; ++i) c *= -(p + i);
        return c * std::pow(x, -p - order);
    };
    long double tail = 0.0L;
    for (int m = 0; m < 5; ++m) {
        double g = 0.0;
        double w = 1.0;
        for (int j = 0; j < 4; ++j) {
            g += w * dpow(2.0 + 2.0 * j, 2 * m + 1, X);
            w *= -e2;
        }
        tail -= (m % 2 ? -1.0L : 1.0L) * g / std::pow(static_cast<long double>(ak), 2 * m + 2);
    }
    return static_cast<double>(2.0L * (body + tail));
}

ReciprocalMass reciprocal_mass_numeric(const MassProfile& profile, double k, const std::vector<double>& eps) {
    const auto* sm = std::get_if<SingularMass>(&profile.kind());
    if (!sm) throw Error(ErrorKind::BadParameter, "the reciprocal mass transform needs the singular profile");
    if (k == 0.0) throw Error(ErrorKind::DomainError, "reciprocal mass evaluated at k = 0");
    if (eps.size() < 2) throw Error(ErrorKind::BadParameter, "eps extrapolation needs at least two values");

    ReciprocalMass r;
    r.k = k;
    const double s2pi = std::sqrt(2.0 * std::numbers::pi);
    r.delta_coefficient = s2pi * sm->m0;
    r.eps = eps;
    for (double e : eps) r.finite_parts.push_back(regularized_fourier_integral(k, e) - std::numbers::pi / e);

    // Neville-style elimination of eps, eps^2, ... terms.
    auto extrapolate = [&](std::size_t count) {
        std::vector<double> t(r.finite_parts.end() - static_cast<std::ptrdiff_t>(count), r.finite_parts.end());
        std::vector<double> e(eps.end() - static_cast<std::ptrdiff_t>(count), eps.end());
        for (std::size_t level = 1; level < count; ++level)
            for (std::size_t i = count - 1; i >= level; --i)
                t[i] = (e[i - level] * t[i] - e[i] * t[i - 1]) / (e[i - level] - e[i]);
        return t.back();
    };
    r.finite_part = extrapolate(eps.size());
    const double coarse = extrapolate(eps.size() - 1);
    r.error_estimate = std::abs(r.finite_part - coarse);
    if (!std::isfinite(r.finite_part) || r.error_estimate > 1e-3 * std::max(1.0, std::abs(r.finite_part))) {
        std::ostringstream os;
        os << "eps extrapolation unstable at k = " << k << " (change " << r.error_estimate << ")";
        throw Error(ErrorKind::NoConvergence, os.str());
    }
    const double scale = sm->m0 * sm->x0 * sm->x0;
    r.regular = scale / s2pi * r.finite_part;
    r.regular_closed_form = -std::sqrt(std::numbers::pi / 2.0) * scale * std::abs(k);
    r.inferred = reciprocal_mass_scale(sm->m0, sm->x0) * k;
    return r;
}

}  // namespace pdm
