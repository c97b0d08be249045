#pragma once

// Independent bound-state energies for -(hbar^2/2)(psi'/m)' + V psi = E psi on
// the half line (0, L) with psi(L) = 0. Flux form u = psi, q = psi'/m:
//   u' = m q,   q' = (2/hbar^2)(V - E) u.
// Even states start with the regular Frobenius solution at the origin
// (singular mass) or with u = 1, q = 0 (constant mass). Classical RK4 on a
// graded mesh; energy by bisection on the node count.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>

namespace oracle {

struct HalfLineProblem {
    std::function<double(double)> mass;
    std::function<double(double)> potential;
    double hbar = 1.0;
    double L = 10.0;
    // singular mass m ~ m0 x0^2 / x^2 near 0
    bool singular = false;
    double m0 = 1.0;
    double x0 = 1.0;
    std::size_t steps = 200000;
};

struct Shot {
    double uL = 0.0;
    std::size_t nodes = 0;
};

inline Shot shoot(const HalfLineProblem& p, double E) {
    double x, u, q;
    if (p.singular) {
        // (x^2 psi')' ~ -(2 m0 x0^2 E / hbar^2) psi near 0, so psi ~ x^s with
        // s (s + 1) = -2 m0 x0^2 E / hbar^2
        const double disc = 1.0 - 8.0 * p.m0 * p.x0 * p.x0 * E / (p.hbar * p.hbar);
        if (disc <= 0.0) return {std::nan(""), 0};
        const double s = 0.5 * (-1.0 + std::sqrt(disc));
        x = 1e-6 * p.L;
        u = std::pow(x, s);
        q = s * std::pow(x, s - 1.0) / p.mass(x);
    } else {
        x = 0.0;
        u = 1.0;
        q = 0.0;
    }
    const double x_start = x;
    auto rhs = [&](double xx, double uu, double qq) {
        return std::array<double, 2>{p.mass(xx) * qq, 2.0 / (p.hbar * p.hbar) * (p.potential(xx) - E) * uu};
    };
    Shot out;
    double prev = u;
    const double n = static_cast<double>(p.steps);
    for (std::size_t i = 0; i < p.steps; ++i) {
        // graded mesh x(t) = x_start + (L - x_start) t^2 when singular, uniform otherwise
        auto pos = [&](double t) { return p.singular ? x_start + (p.L - x_start) * t * t : p.L * t; };
        const double xa = pos(i / n), xb = pos((i + 1) / n);
        const double h = xb - xa;
        const auto k1 = rhs(xa, u, q);
        const auto k2 = rhs(xa + h / 2, u + h / 2 * k1[0], q + h / 2 * k1[1]);
        const auto k3 = rhs(xa + h / 2, u + h / 2 * k2[0], q + h / 2 * k2[1]);
        const auto k4 = rhs(xb, u + h * k3[0], q + h * k3[1]);
        u += h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
        q += h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
        if (u != 0.0 && prev != 0.0 && (u > 0) != (prev > 0)) ++out.nodes;
        if (u != 0.0) prev = u;
        // rescale to avoid overflow in the forbidden region
        const double big = std::max(std::abs(u), std::abs(q));
        if (big > 1e100) {
            u /= big;
            q /= big;
            prev /= big;
        }
    }
    out.uL = u;
    return out;
}

// Energy of the even state with `nodes` sign changes on the half line, in [lo, hi].
inline double even_level(const HalfLineProblem& p, std::size_t nodes, double lo, double hi) {
    // just above a level a new node enters from the wall
    auto above = [&](double E) { return shoot(p, E).nodes > nodes; };
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (above(mid))
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace oracle
