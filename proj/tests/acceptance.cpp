// Acceptance suite: one PASS/FAIL line per criterion, details indented below.
// Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "pdm/analytic.hpp"
#include "pdm/cli.hpp"
#include "pdm/config.hpp"
#include "pdm/dispersion.hpp"
#include "pdm/eigensolver.hpp"
#include "pdm/hamiltonian.hpp"
#include "pdm/heun.hpp"
#include "pdm/io.hpp"
#include "pdm/spectrum.hpp"

using namespace pdm;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Report {
    std::ostringstream detail;
    bool pass = true;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "    failed: " << what << "\n";
        }
    }
};

int failures = 0;

void emit(int id, const std::string& title, const std::function<void(Report&)>& body) {
    Report r;
    try {
        body(r);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail << "    exception: " << e.what() << "\n";
    }
    std::cout << (r.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << title << "\n" << r.detail.str();
    std::cout.flush();
    if (!r.pass) ++failures;
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

// --- 1 ---------------------------------------------------------------------
void constant_mass(Report& r) {
    const auto t0 = Clock::now();
    CoreConfig c;
    c.L = 12.0;
    c.N = 4000;
    const auto setup = c.constant_mass_problem();
    std::vector<std::size_t> idx(10);
    for (std::size_t i = 0; i < 10; ++i) idx[i] = i;
    const auto st = refinement_study(setup, idx, 1);
    const double t = seconds_since(t0);
    double raw = 0.0, rich = 0.0;
    for (std::size_t n = 0; n < 10; ++n) {
        const double exact = n + 0.5;
        raw = std::max(raw, std::abs(st[n].values[0] - exact) / exact);
        rich = std::max(rich, std::abs(st[n].richardson_pair - exact) / exact);
    }
    r.detail << "    N = 4000 raw max relative error " << sci(raw) << " (second-order stencil)\n"
             << "    (N, 2N) Richardson max relative error " << sci(rich) << ", runtime " << sci(t) << " s\n";
    r.require(rich < 1e-6, "relative error < 1e-6");
    r.require(t < 10.0, "runtime < 10 s");
}

// --- 2 ---------------------------------------------------------------------
void ordering(Report& r) {
    const double m0 = 1.0, x0 = 1.0;
    const auto prof = MassProfile::singular(m0, x0);
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> mag(0.05, 10.0);
    double worst_free = 0.0, worst_weyl = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double x = (rng() & 1 ? 1.0 : -1.0) * mag(rng);
        for (auto [a, g] : {std::pair{0.0, 1.0}, std::pair{1.0, 0.0}})
            worst_free = std::max(worst_free, std::abs(uk_potential(OrderingParams::from_alpha_gamma(a, g), prof, x)));
        // alpha = gamma = 0: U = -(1/4m^3)[-(m/2) m'' + m'^2], with m' = -2 m0 x0^2/x^3, m'' = 6 m0 x0^2/x^4
        const double m = m0 * (1 + x0 * x0 / (x * x));
        const double m1 = -2 * m0 * x0 * x0 / (x * x * x);
        const double m2 = 6 * m0 * x0 * x0 / (x * x * x * x);
        const double ref = -(1.0 / (4 * m * m * m)) * (-0.5 * m * m2 + m1 * m1);
        const double got = uk_potential(OrderingParams::weyl(), prof, x);
        worst_weyl = std::max(worst_weyl, std::abs(got - ref) / std::max(1.0, std::abs(ref)));
    }
    r.detail << "    max |U_k| ambiguity-free " << sci(worst_free) << ", Weyl deviation " << sci(worst_weyl) << "\n";
    r.require(worst_free < 1e-12, "|U_k| < 1e-12");
    r.require(worst_weyl < 1e-10, "Weyl U_k within 1e-10");
}

// --- 3 ---------------------------------------------------------------------
void heun(Report& r) {
    std::mt19937_64 rng(31415);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    bool origin_exact = true;
    for (int s = 0; s < 20; ++s) {
        HeunParams p{0.05 + 1.45 * u(rng), 2.0 * u(rng), -3.0 + 4.0 * u(rng), -1.0 + 2.0 * u(rng),
                     -1.0 + 2.0 * u(rng)};
        origin_exact = origin_exact && heunc_series(p, 0.0).value == cplx(1.0) && heunc_continue(p, 0.0).value == cplx(1.0);
        const double y0 = -0.05;
        const auto start = heunc_series(p, y0);
        for (int k = 1; k <= 50; ++k) {
            const double y = y0 - 0.4 * k / 50.0;
            const auto a = heunc_series(p, y);
            const auto b = heunc_integrate(p, y0, start, y);
            worst = std::max(worst, std::abs(a.value - b.value) / std::abs(a.value));
        }
    }
    double flat = 0.0;
    std::uniform_real_distribution<double> al(0.1, 2.0), be(0.0, 2.0), ga(-3.0, 1.0);
    for (int s = 0; s < 5; ++s) {
        const auto p = with_accessory(al(rng), be(rng), ga(rng), 0.0, 0.0);
        for (int k = 0; k <= 100; ++k) flat = std::max(flat, std::abs(heunc_continue(p, -0.1 * k).value - 1.0));
    }
    r.detail << "    series vs ODE worst relative deviation " << sci(worst) << " (20 sets x 50 points)\n"
             << "    mu = nu = 0 worst |Hc - 1| on [-10, 0] " << sci(flat) << "\n";
    r.require(worst < 1e-10, "overlap agreement < 1e-10");
    r.require(origin_exact, "Hc(0) = 1 exactly");
    r.require(flat < 1e-10, "Hc = 1 for mu = nu = 0");
}

// --- 4 ---------------------------------------------------------------------
void triangle(Report& r) {
    const auto t0 = Clock::now();
    std::ostringstream md;
    double worst = 0.0;
    std::size_t rows = 0;
    for (double G : {0.01, 0.02, 0.05}) {
        // omega0 = 1 and x0 = sqrt(Gamma): energies directly in hbar omega0, box 10 oscillator lengths
        CoreConfig c;
        c.x0 = std::sqrt(G);
        c.N = 2000;
        SpectrumOptions o;
        o.refinements = 8;
        const auto res = compare_spectrum(c.singular_problem(), 2, o);
        write_spectrum_markdown(md, res, 1e-5);
        md << "\n";
        for (const auto& row : res.rows) {
            const bool admissible = row.n == 0 || G <= gamma_bound(row.n);
            r.detail << "    Gamma " << G << " n " << row.n << ": ";
            if (!admissible) {
                r.detail << "outside Gamma <= 1/(16n), no root (formula complex: "
                         << (row.formula_plus.complex ? "yes" : "no") << ")\n";
                continue;
            }
            ++rows;
            r.require(row.root.found, "root found");
            const double dev = std::abs(row.dev_root_numeric);
            worst = std::max(worst, dev);
            r.detail << "root " << format_double(row.root.energy) << ", numeric " << format_double(row.E_numeric)
                     << " (+- " << sci(row.numeric_error_estimate) << "), |root - numeric| " << sci(dev)
                     << ", formula - root " << sci(row.dev_formula_root) << "\n";
            r.require(dev < 1e-5, "agreement within 1e-5 hbar omega0");
        }
    }
    const double t = seconds_since(t0);
    const fs::path out = fs::current_path() / "acceptance_triangle.md";
    write_text_file(out, md.str());
    r.detail << "    " << rows << " admissible rows, worst " << sci(worst) << ", runtime " << sci(t)
             << " s; report written to " << out.string() << "\n";
    r.require(rows == 8, "eight admissible rows");
    r.require(t < 120.0, "runtime < 2 min");
}

// --- 5 ---------------------------------------------------------------------
void small_gamma(Report& r) {
    const auto roots = quantization_roots(1e-6, 3, Branch::Plus, 1.0);
    for (const auto& q : roots) {
        r.require(q.found, "root found");
        const double dev = std::abs(q.energy - (2.0 * q.n + 0.5));
        const double f = spectrum_formula(q.n, 0.0, Branch::Plus, 1.0).energy;
        r.detail << "    n " << q.n << ": E " << format_double(q.energy) << ", |E - (2n+1/2)| " << sci(dev) << "\n";
        r.require(dev < 1e-4, "within 1e-4 of 2n + 1/2");
        r.require(f == 2.0 * q.n + 0.5, "formula at Gamma = 0");
    }
}

// --- 6 ---------------------------------------------------------------------
void wavefunction(Report& r) {
    double worst_res = 0.0, worst_norm = 0.0, worst_even = 0.0;
    std::size_t count = 0;
    for (double G : {0.01, 0.02, 0.05}) {
        OscillatorParams osc{1.0, 1.0, std::sqrt(G), Units::natural()};
        const double ell = osc.length();
        for (const auto& q : quantization_roots(G, 2, Branch::Plus, 1.0)) {
            if (!q.found) continue;
            ++count;
            AnalyticWavefunction psi(osc, q.Eps, Branch::Plus, 1, q.n);
            auto f = [&](double x) { return psi(x); };
            double res = 0.0, scale = 0.0;
            for (int side : {1, -1})
                for (int i = 0; i <= 400; ++i) {
                    const double x = side * ell * (0.05 + (6.0 - 0.05) * i / 400.0);
                    const double h = std::min(1e-3 * std::abs(x), 1e-3 * ell);
                    const double d1 = (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
                    const double d2 =
                        (-f(x - 2 * h) + 16 * f(x - h) - 30 * f(x) + 16 * f(x + h) - f(x + 2 * h)) / (12 * h * h);
                    const double m = 1.0 + G / (x * x), mp = -2.0 * G / (x * x * x);
                    const double kin = -0.5 * (d2 / m - d1 * mp / (m * m));
                    const double pot = 0.5 * x * x * f(x), en = q.energy * f(x);
                    res = std::max(res, std::abs(kin + pot - en));
                    scale = std::max(scale, std::abs(kin) + std::abs(pot) + std::abs(en));
                    worst_even = std::max(worst_even, std::abs(f(x) * f(x) - f(-x) * f(-x)));
                }
            worst_res = std::max(worst_res, res / scale);
            boost::math::quadrature::exp_sinh<double> quad;
            const double norm = 2.0 * quad.integrate([&](double x) { return f(x) * f(x); });
            worst_norm = std::max(worst_norm, std::abs(norm - 1.0));
        }
    }
    r.detail << "    " << count << " roots; worst relative residual " << sci(worst_res) << ", |norm - 1| "
             << sci(worst_norm) << ", evenness defect " << sci(worst_even) << "\n";
    r.require(count == 8, "eight accepted roots");
    r.require(worst_res < 1e-6, "residual < 1e-6");
    r.require(worst_norm < 1e-6, "normalization within 1e-6");
    r.require(worst_even == 0.0, "density even");
}

// --- 7 ---------------------------------------------------------------------
void constraint(Report& r) {
    for (std::size_t n = 1; n <= 8; ++n) {
        const double g = gamma_bound(n);
        const bool at = spectrum_formula(n, g, Branch::Plus, 1.0).complex;
        const bool below = spectrum_formula(n, std::nextafter(g, 0.0), Branch::Plus, 1.0).complex;
        const bool above = spectrum_formula(n, std::nextafter(g, 1.0), Branch::Plus, 1.0).complex;
        r.require(!at && !below && above, "flip at 1/(16n) for n = " + std::to_string(n));
        r.require(g == 1.0 / (16.0 * n), "gamma_bound value");
    }
    const double fb = frequency_bound(1, 1.0, 1.0);
    r.detail << "    flag flips between 1/(16n) and the next double for n = 1..8; frequency_bound(1) = "
             << format_double(fb) << "\n";
    r.require(fb == 0.0625, "frequency_bound = 0.0625");
}

// --- 8 ---------------------------------------------------------------------
void dispersion(Report& r) {
    const auto t0 = Clock::now();
    const double scale_err = std::abs(reciprocal_mass_scale(1.0, 1.0) - std::sqrt(2.0 * std::numbers::pi));
    r.require(scale_err < 1e-12, "reciprocal_mass_scale(1,1) = sqrt(2 pi)");
    double worst_loc = 0.0;
    for (double s : {0.25, 1.0, 4.0}) {
        const auto m = make_dispersion_model(1.0, 1.0, s);
        worst_loc = std::max(worst_loc, std::abs(dispersion_minimum(m).k - 1.0 / s));
        worst_loc = std::max(worst_loc, std::abs(dispersion_zero(m).k - std::numbers::e / s));
        const double g = golden_section_minimum([&](double k) { return dispersion_energy(k, m); }, 0.1 / s, 10.0 / s,
                                                1e-9 / s);
        r.require(std::abs(g - 1.0 / s) < 1e-6 / s, "golden-section cross-check");
    }
    const auto m = make_dispersion_model(1.0, 1.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double k = std::pow(10.0, -2.0 + 4.0 * i / 400.0);
        worst = std::max(worst, dispersion_consistency(m, k, 1e-4 * k));
    }
    const auto ft = reciprocal_mass_numeric(MassProfile::singular(1.0, 1.0), 1.0);
    const double t = seconds_since(t0);
    r.detail << "    scale error " << sci(scale_err) << ", extremum/zero location error " << sci(worst_loc)
             << ", consistency residual " << sci(worst) << ", runtime " << sci(t) << " s\n"
             << "    transform of the 1/x^2 part at k = 1: " << format_double(ft.regular) << " vs m0k k = "
             << format_double(ft.inferred) << " (ratio " << format_double(ft.regular / ft.inferred) << ")\n";
    r.require(worst_loc < 1e-8, "minimum and zero to 1e-8");
    r.require(worst < 1e-8, "consistency residual < 1e-8");
    r.require(t < 5.0, "runtime < 5 s");
}

// --- 9 ---------------------------------------------------------------------
struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<double>> cols;
};

Csv read_csv(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("missing " + p.string());
    Csv c;
    std::string line, cell;
    std::getline(in, line);
    std::stringstream hs(line);
    while (std::getline(hs, cell, ',')) c.header.push_back(cell);
    c.cols.resize(c.header.size());
    while (std::getline(in, line)) {
        std::stringstream ls(line);
        for (std::size_t j = 0; j < c.header.size() && std::getline(ls, cell, ','); ++j)
            c.cols[j].push_back(std::stod(cell));
    }
    return c;
}

void figures(Report& r) {
    const fs::path dir = fs::temp_directory_path() / "pdm_acceptance_figures";
    fs::remove_all(dir);
    const char* argv[] = {"pdm_spectra", "figures", "--out", dir.c_str()};
    std::ostringstream log;
    const auto rc = cli::parse_config(4, argv);
    r.require(cli::run(rc, log) == 0, "figures command");

    const auto f1a = read_csv(dir / "fig1a_mass_vary_m0.csv");
    const auto f1b = read_csv(dir / "fig1b_mass_vary_x0.csv");
    const std::vector<double> vary{0.5, 1.0, 1.5, 2.0};
    double mass_err = 0.0;
    r.require(f1a.cols.size() == 5 && f1b.cols.size() == 5, "four curves per mass panel");
    for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t i = 0; i < f1a.cols[0].size(); ++i) {
            const double x = f1a.cols[0][i];
            const double a = vary[j] * (1 + 1.0 / (x * x)), b = 1.0 + vary[j] * vary[j] / (x * x);
            mass_err = std::max({mass_err, std::abs(f1a.cols[j + 1][i] - a) / a, std::abs(f1b.cols[j + 1][i] - b) / b});
        }
    r.require(mass_err < 1e-14, "mass curves");

    const auto f2 = read_csv(dir / "fig2_dispersion.csv");
    const auto& k = f2.cols[0];
    const auto& E = f2.cols[1];
    const std::size_t imin = std::min_element(E.begin(), E.end()) - E.begin();
    std::size_t izero = 0;
    for (std::size_t i = 1; i < E.size(); ++i)
        if (E[i - 1] < 0.0 && E[i] >= 0.0) izero = i;
    const double dk = k[1] - k[0];
    r.require(std::abs(k[imin] - 1.0) <= dk, "figure 2 minimum at k = 1");
    r.require(izero > 0 && std::abs(k[izero] - std::numbers::e) <= dk, "figure 2 zero at k = e");

    double worst_even = 0.0, worst_norm = 0.0;
    bool nodes_ok = true;
    for (const char* w : {"0.2", "0.4", "0.6", "0.8"}) {
        const auto f3 = read_csv(dir / (std::string("fig3_omega_") + w + ".csv"));
        const auto& x = f3.cols[0];
        const double h = x[1] - x[0];
        for (std::size_t n = 0; n < 4; ++n) {
            const auto it = std::find(f3.header.begin(), f3.header.end(), "rho_" + std::to_string(n));
            if (it == f3.header.end()) throw std::runtime_error("missing density column");
            const auto& rho = f3.cols[it - f3.header.begin()];
            double s = 0.0, mx = 0.0;
            for (std::size_t i = 0; i < rho.size(); ++i) {
                s += rho[i] * h;
                mx = std::max(mx, rho[i]);
                worst_even = std::max(worst_even, std::abs(rho[i] - rho[rho.size() - 1 - i]));
            }
            worst_norm = std::max(worst_norm, std::abs(s - 1.0));
            // zeros of psi on x > 0: interior local minima of the density that nearly vanish
            std::size_t zeros = 0;
            for (std::size_t i = 1; i + 1 < rho.size(); ++i)
                if (x[i] > 0.0 && rho[i] <= rho[i - 1] && rho[i] < rho[i + 1] && rho[i] < 1e-3 * mx) ++zeros;
            if (zeros != n) nodes_ok = false;
            r.detail << "    omega0 " << w << " n " << n << ": norm " << format_double(s) << ", zeros on x > 0 "
                     << zeros << "\n";
        }
    }
    r.detail << "    mass curve error " << sci(mass_err) << ", density evenness defect " << sci(worst_even)
             << ", |norm - 1| " << sci(worst_norm) << "\n";
    r.require(worst_even == 0.0, "densities even");
    r.require(worst_norm < 1e-6, "densities normalised");
    r.require(nodes_ok, "node count equals level index");
}

}  // namespace

int main() {
    emit(1, "constant-mass limit reproduces (n + 1/2)", constant_mass);
    emit(2, "ambiguity-free ordering gives U_k = 0; Weyl U_k", ordering);
    emit(3, "confluent Heun engine", heun);
    emit(4, "quantization triangle (root finder vs extrapolated eigensolver)", triangle);
    emit(5, "Gamma -> 0 continuity", small_gamma);
    emit(6, "analytic wavefunction residual, norm and parity", wavefunction);
    emit(7, "constraint boundary Gamma = 1/(16n)", constraint);
    emit(8, "dispersion relation", dispersion);
    emit(9, "figure data", figures);
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
    return failures;
}
