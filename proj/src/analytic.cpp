#include "pdm/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pdm/eigensolver.hpp"
#include "pdm/error.hpp"

namespace pdm {

Branch parse_branch(const std::string& s) {
    if (s == "+" || s == "plus" || s == "+1" || s == "1") return Branch::Plus;
    if (s == "-" || s == "minus" || s == "-1") return Branch::Minus;
    throw Error(ErrorKind::UsageError, "branch must be '+' or '-' (got '" + s + "')");
}

std::string to_string(Branch b) { return b == Branch::Plus ? "+" : "-"; }

namespace {

cplx root_disc(double Gamma, double Eps) { return std::sqrt(cplx(1.0 - 4.0 * Eps * Gamma, 0.0)); }

}  // namespace

cplx lambda_exponent(double Gamma, double Eps, Branch branch) {
    return -0.25 + sign(branch) * 0.25 * root_disc(Gamma, Eps);
}

HeunParams heun_params_from(double Gamma, double Eps, Branch branch) {
    const cplx r = root_disc(Gamma, Eps);
    HeunParams p;
    p.alpha = Gamma;
    p.beta = sign(branch) * 0.5 * r;
    p.gamma = -2.0;
    p.delta = -0.25 * Gamma * (Eps - Gamma);
    p.eta = ((4.0 * (Gamma + 1.0) - Eps + 3.0 * sign(branch) * r) / 4.0).real();
    return p;
}

HeunParams heun_params_rederived(double Gamma, double Eps, Branch branch) {
    HeunParams p = heun_params_from(Gamma, Eps, branch);
    p.eta = 1.25 + 0.25 * Gamma * (Eps - Gamma);
    return p;
}

FormulaEnergy spectrum_formula(std::size_t n, double Gamma, Branch branch, double omega0, const Units& units) {
    const double nd = static_cast<double>(n);
    // Decide the regime against the rounded bound so the flag flips exactly at
    // gamma_bound(n); the product 16 n Gamma can round to either side of 1 there.
    const bool complex = n > 0 && Gamma > 1.0 / (16.0 * nd);
    double disc = 1.0 - 16.0 * nd * Gamma;
    if (!complex) disc = std::max(disc, 0.0);
    const cplx root = std::sqrt(cplx(disc, 0.0));
    FormulaEnergy out;
    out.value = (2.0 * nd - 0.5 * Gamma + sign(branch) * 0.5 * root) * units.hbar * omega0;
    out.complex = complex;
    out.energy = out.complex ? std::numeric_limits<double>::quiet_NaN() : out.value.real();
    return out;
}

double spectrum_constant_mass(std::size_t p, double omega0, const Units& units) {
    return (static_cast<double>(p) + 0.5) * units.hbar * omega0;
}

double gamma_bound(std::size_t n) {
    if (n == 0) throw Error(ErrorKind::BadLevel, "the frequency constraint is vacuous for n = 0");
    return 1.0 / (16.0 * static_cast<double>(n));
}

double frequency_bound(std::size_t n, double m0, double x0, const Units& units) {
    return gamma_bound(n) * units.hbar / (m0 * x0 * x0);
}

std::vector<QuantizationRoot> quantization_roots(double Gamma, std::size_t n_max, Branch branch, double omega0,
                                                 const Units& units, const RootSearchOptions& opts) {
    if (!(Gamma > 0.0)) throw Error(ErrorKind::BadParameter, "quantization_roots needs Gamma > 0");
    if (opts.scan_points < 2) throw Error(ErrorKind::BadParameter, "scan needs at least two points");
    std::vector<QuantizationRoot> out;
    for (std::size_t n = 0; n <= n_max; ++n) {
        QuantizationRoot r;
        r.n = n;
        const double centre = 4.0 * static_cast<double>(n) + 1.0;
        const double lo = centre - opts.half_width, hi = centre + opts.half_width;
        auto f = [&](double e) -> std::optional<double> {
            if (complex_regime(Gamma, e)) return std::nullopt;
            return first_truncation_residual(heun_params_rederived(Gamma, e, branch), n).real();
        };

        struct Bracket {
            double a, b;
        };
        std::vector<Bracket> brackets;
        std::optional<double> prev;
        double prev_e = lo;
        for (std::size_t i = 0; i < opts.scan_points; ++i) {
            const double e = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(opts.scan_points - 1);
            const auto v = f(e);
            if (v && *v == 0.0) brackets.push_back({e, e});
            if (v && prev && ((*prev < 0.0) != (*v < 0.0)) && *prev != 0.0 && *v != 0.0)
                brackets.push_back({prev_e, e});
            prev = v;
            prev_e = e;
        }

        double best_rel = std::numeric_limits<double>::infinity();
        for (const auto& br : brackets) {
            double a = br.a, b = br.b;
            const double fa = *f(a);
            while (b - a > 0.0) {
                const double m = 0.5 * (a + b);
                if (m <= a || m >= b) break;
                const auto fm = f(m);
                if (!fm) break;
                if (*fm == 0.0) {
                    a = b = m;
                    break;
                }
                if ((*fm < 0.0) == (fa < 0.0))
                    a = m;
                else
                    b = m;
            }
            const double eps = std::abs(*f(a)) <= std::abs(f(b).value_or(std::numeric_limits<double>::infinity())) ? a : b;
            if (b - a > opts.tolerance) continue;
            const HeunParams p = heun_params_rederived(Gamma, eps, branch);
            const auto chk = polynomial_check(p, n, opts.polynomial_tol);
            const double rel = std::abs(chk.delta.value) / chk.delta.scale;
            if (rel < best_rel) {
                best_rel = rel;
                r.found = true;
                r.Eps = eps;
                r.energy = 0.5 * eps * units.hbar * omega0;
                r.truncation_residual = chk.truncation_residual.real();
                r.delta = chk.delta.value.real();
                r.delta_scale = chk.delta.scale;
                r.polynomial = chk.polynomial;
                r.above_continuum = 4.0 * eps * Gamma >= 1.0;
            }
        }
        if (!r.found) {
            std::ostringstream os;
            os << "no quantization root for n = " << n << " in [" << lo << ", " << hi << "]";
            r.message = os.str();
        } else if (!r.polynomial) {
            std::ostringstream os;
            os << "root for n = " << n << " does not truncate the series (|Delta|/scale = " << best_rel << ")";
            r.message = os.str();
        }
        out.push_back(std::move(r));
    }
    return out;
}

Admissibility admissibility(double Gamma, double Eps, Branch branch, int which) {
    if (which != 1 && which != 2) throw Error(ErrorKind::BadParameter, "solution index must be 1 or 2");
    const cplx lam = lambda_exponent(Gamma, Eps, branch);
    const cplx beta = 0.5 + 2.0 * lam;
    const cplx e = which == 1 ? lam : lam - beta;
    Admissibility a;
    a.origin_exponent = 2.0 * e.real();
    a.square_integrable = 2.0 * a.origin_exponent > -1.0;
    return a;
}

AnalyticWavefunction::AnalyticWavefunction(const OscillatorParams& osc, double Eps, Branch branch, int which,
                                           std::optional<std::size_t> degree)
    : osc_(osc), Eps_(Eps), degree_(degree) {
    if (which != 1 && which != 2) throw Error(ErrorKind::BadParameter, "solution index must be 1 or 2");
    if (!(osc.m0 > 0.0 && osc.omega0 > 0.0 && osc.x0 > 0.0))
        throw Error(ErrorKind::BadParameter, "m0, omega0 and x0 must be positive");
    const double G = osc.gamma();
    if (complex_regime(G, Eps))
        throw Error(ErrorKind::DomainError, "complex origin exponent (4 Eps Gamma > 1): no real wavefunction");
    params_ = heun_params_rederived(G, Eps, branch);
    const double lam = lambda_exponent(G, Eps, branch).real();
    exponent_ = lam;
    if (which == 2) {
        exponent_ = lam - params_.beta.real();
        params_.beta = -params_.beta;
    }
    if (degree_) {
        const auto c = series_coefficients(params_, *degree_ + 1);
        coeffs_.reserve(c.size());
        for (const auto& ck : c) coeffs_.push_back(ck.real());
        if (square_integrable()) {
            // |Psi|^2 = t^{2 lambda} e^{-a x^2} P(-t)^2 with t = x^2/x0^2, a = m0 omega0 / hbar.
            const std::size_t nd = coeffs_.size();
            std::vector<double> sq(2 * nd - 1, 0.0);
            for (std::size_t i = 0; i < nd; ++i)
                for (std::size_t j = 0; j < nd; ++j) sq[i + j] += coeffs_[i] * coeffs_[j];
            const double a = osc.m0 * osc.omega0 / osc.units.hbar;
            long double total = 0.0L;
            for (std::size_t j = 0; j < sq.size(); ++j) {
                const double jd = static_cast<double>(j);
                const double s = 2.0 * exponent_ + jd + 0.5;
                const double lg = std::lgamma(s) - s * std::log(a) - (4.0 * exponent_ + 2.0 * jd) * std::log(osc.x0);
                total += static_cast<long double>((j % 2 ? -1.0 : 1.0) * sq[j]) * std::exp(static_cast<long double>(lg));
            }
            norm_ = static_cast<double>(std::sqrt(total));
        }
    }
}

double AnalyticWavefunction::operator()(double x) const {
    const double t = x * x / (osc_.x0 * osc_.x0);
    double pre;
    if (x == 0.0) {
        if (exponent_ > 0.0)
            pre = 0.0;
        else if (exponent_ == 0.0)
            pre = 1.0;
        else
            throw Error(ErrorKind::SingularPoint, "wavefunction diverges at the origin");
    } else {
        pre = std::exp(2.0 * exponent_ * (std::log(std::abs(x)) - std::log(osc_.x0)));
    }
    const double gauss = std::exp(-0.5 * osc_.m0 * osc_.omega0 * x * x / osc_.units.hbar);
    if (gauss == 0.0) return 0.0;
    double heun;
    if (degree_) {
        const double y = -t;
        heun = 0.0;
        for (std::size_t k = coeffs_.size(); k-- > 0;) heun = heun * y + coeffs_[k];
    } else {
        heun = heunc_continue(params_, -t).value.real();
    }
    return pre * gauss * heun / norm_;
}

DensitySample probability_density(std::size_t n, Branch branch, int which, const OscillatorParams& osc,
                                  const Grid& grid) {
    const double G = osc.gamma();
    const auto roots = quantization_roots(G, n, branch, osc.omega0, osc.units);
    const auto& root = roots.back();
    if (!root.found) throw Error(ErrorKind::NoRootInWindow, root.message);
    const auto adm = admissibility(G, root.Eps, branch, which);
    if (!adm.square_integrable) {
        std::ostringstream os;
        os << "Psi^(" << which << ") behaves as |x|^" << adm.origin_exponent
           << " at the origin and is not square integrable";
        throw Error(ErrorKind::DomainError, os.str());
    }
    AnalyticWavefunction psi(osc, root.Eps, branch, which, which == 1 ? std::optional<std::size_t>(n) : std::nullopt);
    DensitySample out;
    out.Eps = root.Eps;
    out.energy = root.energy;
    out.x = grid.nodes;
    std::vector<double> amp(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) amp[i] = psi(grid.nodes[i]);
    const auto unit = normalize(grid, amp);
    out.density.resize(unit.size());
    double prev = 0.0;
    double amax = 0.0;
    for (double v : unit) amax = std::max(amax, std::abs(v));
    for (std::size_t i = 0; i < unit.size(); ++i) {
        out.density[i] = unit[i] * unit[i];
        if (grid.nodes[i] <= 0.0 || std::abs(unit[i]) < 1e-8 * amax) continue;
        if (prev != 0.0 && (unit[i] > 0.0) != (prev > 0.0)) ++out.nodes_per_half_line;
        prev = unit[i];
    }
    return out;
}

}  // namespace pdm
