#include "pdm/heun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "pdm/error.hpp"

namespace pdm {

namespace odeint = boost::numeric::odeint;

AccessoryCoeffs accessory(const HeunParams& p) {
    const double a = p.alpha, g = p.gamma;
    const cplx b = p.beta;
    AccessoryCoeffs c;
    c.mu = 0.5 * (a - b - g + a * b - b * g) - p.eta;
    c.nu_ode = 0.5 * (a + b + g + a * g + b * g) + p.delta + p.eta;
    return c;
}

HeunParams with_accessory(double alpha, cplx beta, double gamma, cplx mu, cplx nu) {
    const cplx eta = 0.5 * (alpha - beta - gamma + alpha * beta - beta * gamma) - mu;
    const cplx delta = nu - 0.5 * (alpha + beta + gamma + alpha * gamma + beta * gamma) - eta;
    if (eta.imag() != 0.0 || delta.imag() != 0.0)
        throw Error(ErrorKind::BadParameter, "accessory coefficients need a complex eta or delta");
    return HeunParams{alpha, beta, gamma, delta.real(), eta.real()};
}

namespace {

void check_beta(const HeunParams& p, std::size_t kmax) {
    const double br = p.beta.real();
    if (p.beta.imag() == 0.0 && br < 0.0 && br == std::round(br) && static_cast<std::size_t>(-br) <= kmax)
        throw Error(ErrorKind::DomainError, "beta is a negative integer; the Frobenius series does not exist");
}

}  // namespace

std::vector<cplx> series_coefficients(const HeunParams& p, std::size_t terms) {
    check_beta(p, terms);
    const auto [mu, nu] = accessory(p);
    std::vector<cplx> c(terms, 0.0);
    if (terms == 0) return c;
    c[0] = 1.0;
    for (std::size_t k = 0; k + 1 < terms; ++k) {
        const double kd = static_cast<double>(k);
        const cplx lhs = (kd + 1.0) * (kd + p.beta + 1.0);
        cplx rhs = (kd * (kd + p.beta + p.gamma + 1.0 - p.alpha) - mu) * c[k];
        if (k > 0) rhs += (p.alpha * (kd - 1.0) + mu + nu) * c[k - 1];
        c[k + 1] = rhs / lhs;
    }
    return c;
}

HeunValue heunc_series(const HeunParams& p, double y, double tol, double radius) {
    if (!(std::abs(y) < radius)) {
        std::ostringstream os;
        os << "heunc_series: |y| = " << std::abs(y) << " outside the series radius " << radius;
        throw Error(ErrorKind::DomainError, os.str());
    }
    const auto [mu, nu] = accessory(p);
    constexpr std::size_t max_terms = 10000;
    cplx cm1 = 0.0, ck = 1.0;
    cplx sum = 1.0, dsum = 0.0;
    double yk = 1.0;  // y^k
    int small = 0;
    for (std::size_t k = 0; k < max_terms; ++k) {
        const double kd = static_cast<double>(k);
        const cplx lhs = (kd + 1.0) * (kd + p.beta + 1.0);
        if (lhs == 0.0) throw Error(ErrorKind::DomainError, "beta is a negative integer; the Frobenius series does not exist");
        cplx rhs = (kd * (kd + p.beta + p.gamma + 1.0 - p.alpha) - mu) * ck;
        if (k > 0) rhs += (p.alpha * (kd - 1.0) + mu + nu) * cm1;
        const cplx cn = rhs / lhs;
        // term k+1
        const double ykp = yk * y;
        const cplx term = cn * ykp;
        const cplx dterm = (kd + 1.0) * cn * yk;
        sum += term;
        dsum += dterm;
        const double ref = std::max(std::abs(sum), 1e-300);
        if (std::abs(term) < tol * ref && std::abs(dterm) <= tol * std::max(std::abs(dsum), ref))
            ++small;
        else
            small = 0;
        if (small >= 3) return {sum, dsum};
        cm1 = ck;
        ck = cn;
        yk = ykp;
        if (yk == 0.0 && small >= 1) return {sum, dsum};
    }
    throw Error(ErrorKind::NoConvergence, "heunc_series: 10^4 terms without convergence");
}

cplx heun_second_derivative(const HeunParams& p, double y, const HeunValue& v) {
    const auto [mu, nu] = accessory(p);
    const cplx P = p.alpha + (p.beta + 1.0) / y + (p.gamma + 1.0) / (y - 1.0);
    const cplx Q = mu / y + nu / (y - 1.0);
    return -P * v.derivative - Q * v.value;
}

HeunValue heunc_integrate(const HeunParams& p, double y0, const HeunValue& start, double y1, double rtol) {
    if ((y0 <= 0.0 && y1 >= 0.0 && !(y0 == 0.0 && y1 == 0.0)) || (y0 >= 0.0 && y1 <= 0.0) ||
        (y0 <= 1.0 && y1 >= 1.0) || (y0 >= 1.0 && y1 <= 1.0))
        throw Error(ErrorKind::DomainError, "heunc_integrate: the path crosses a singular point (0 or 1)");
    if (y0 == y1) return start;

    using State = std::array<double, 4>;
    const auto [mu, nu] = accessory(p);
    const cplx bp1 = p.beta + 1.0;
    const double gp1 = p.gamma + 1.0;
    auto rhs = [&](const State& s, State& ds, double y) {
        const cplx H(s[0], s[1]), dH(s[2], s[3]);
        const cplx P = p.alpha + bp1 / y + gp1 / (y - 1.0);
        const cplx Q = mu / y + nu / (y - 1.0);
        const cplx d2 = -P * dH - Q * H;
        ds = {dH.real(), dH.imag(), d2.real(), d2.imag()};
    };

    State x{start.value.real(), start.value.imag(), start.derivative.real(), start.derivative.imag()};
    double mag = 0.0;
    for (double v : x) mag = std::max(mag, std::abs(v));
    const double atol = rtol * 1e-6 * std::max(mag, 1e-300);
    auto stepper = odeint::make_controlled(atol, rtol, odeint::runge_kutta_fehlberg78<State>());

    const double dir = y1 > y0 ? 1.0 : -1.0;
    const double len = std::abs(y1 - y0);
    double y = y0;
    double dt = dir * std::min(len, 1e-2 * std::max(std::abs(y0), 1e-3));
    constexpr std::size_t max_steps = 2000000;
    for (std::size_t step = 0; step < max_steps; ++step) {
        if ((y1 - y) * dir <= 0.0) return {cplx(x[0], x[1]), cplx(x[2], x[3])};
        if ((y + dt - y1) * dir > 0.0) dt = y1 - y;
        const double before = y;
        const auto res = stepper.try_step(rhs, x, y, dt);
        if (res == odeint::fail) {
            if (std::abs(dt) < 1e-15 * std::max(1.0, std::abs(before))) {
                std::ostringstream os;
                os << "heunc_integrate: step size underflow at y = " << before;
                throw Error(ErrorKind::StepFailure, os.str());
            }
            continue;
        }
        for (double v : x) {
            if (!std::isfinite(v)) {
                std::ostringstream os;
                os << "heunc_integrate: non-finite state at y = " << y;
                throw Error(ErrorKind::StepFailure, os.str());
            }
        }
        // Snap to the endpoint when the remaining interval is negligible.
        if (std::abs(y1 - y) <= 1e-15 * std::max(1.0, std::abs(y1))) y = y1;
    }
    std::ostringstream os;
    os << "heunc_integrate: step limit reached at y = " << y;
    throw Error(ErrorKind::StepFailure, os.str());
}

HeunValue heunc_continue(const HeunParams& p, double y_target, double rtol, double radius) {
    if (!(y_target <= 0.0)) throw Error(ErrorKind::DomainError, "heunc_continue: y_target must be <= 0");
    if (std::abs(y_target) < radius) return heunc_series(p, y_target, 1e-16, radius);
    const double ys = -0.999 * radius;
    const HeunValue start = heunc_series(p, ys, 1e-16, radius);
    return heunc_integrate(p, ys, start, y_target, rtol);
}

cplx first_truncation_residual(const HeunParams& p, std::size_t n) {
    if (p.alpha == 0.0)
        throw Error(ErrorKind::DivisionByZero, "first truncation condition is inapplicable for alpha = 0");
    return p.delta / p.alpha + 0.5 * (p.beta + p.gamma) + 1.0 + static_cast<double>(n);
}

DeltaDeterminant delta_determinant(const HeunParams& p, std::size_t n) {
    const auto [mu, nu] = accessory(p);
    auto a = [&](std::size_t k) {
        const double kd = static_cast<double>(k);
        return mu - kd * (kd + p.beta + p.gamma + 1.0 - p.alpha);
    };
    auto b = [&](std::size_t k) {
        const double kd = static_cast<double>(k);
        return (kd + 1.0) * (kd + p.beta + 1.0);
    };
    auto c = [&](std::size_t k) {
        const double kd = static_cast<double>(k);
        return -(p.alpha * (kd - 1.0) + mu + nu);
    };

    DeltaDeterminant out;
    double log_hadamard = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        double row = std::norm(a(k));
        if (k > 0) row += std::norm(c(k));
        if (k < n) row += std::norm(b(k));
        log_hadamard += 0.5 * std::log(std::max(row, 1.0));
    }

    cplx dm1 = 1.0;    // D_{k-1}
    cplx d = a(0);     // D_k, k = 1
    double log_scale = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        const cplx next = a(k) * d - b(k - 1) * c(k) * dm1;
        dm1 = d;
        d = next;
        const double s = std::max(1.0, std::abs(d));
        d /= s;
        dm1 /= s;
        log_scale += std::log(s);
    }
    out.log_scale = log_scale;
    out.value = d * std::exp(log_scale);
    out.scale = std::exp(log_hadamard);
    return out;
}

PolynomialCheck polynomial_check(const HeunParams& p, std::size_t n, double tol) {
    PolynomialCheck out;
    out.truncation_residual = first_truncation_residual(p, n);
    out.delta = delta_determinant(p, n);
    const auto c = series_coefficients(p, n + 3);
    double cmax = 0.0;
    for (std::size_t k = 0; k <= n; ++k) cmax = std::max(cmax, std::abs(c[k]));
    out.coefficient_ratio = std::max(std::abs(c[n + 1]), std::abs(c[n + 2])) / cmax;
    out.polynomial = std::abs(out.truncation_residual) < tol &&
                     std::abs(out.delta.value) < tol * out.delta.scale && out.coefficient_ratio < 1e-12;
    return out;
}

bool is_polynomial(const HeunParams& p, std::size_t n, double tol) { return polynomial_check(p, n, tol).polynomial; }

}  // namespace pdm
