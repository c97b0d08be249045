#include "pdm/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "pdm/analytic.hpp"
#include "pdm/dispersion.hpp"
#include "pdm/eigensolver.hpp"
#include "pdm/error.hpp"
#include "pdm/heun.hpp"
#include "pdm/io.hpp"
#include "pdm/spectrum.hpp"

namespace pdm::cli {

namespace fs = std::filesystem;

namespace {

struct HelpRequested {
    std::string text;
};

const std::vector<std::string> commands{"solve", "analytic", "compare", "dispersion", "sweep", "heun-dump", "figures"};

const std::set<std::string>& run_keys() {
    static const std::set<std::string> k{"gamma",  "sigma",  "levels", "branch", "window", "refinements",
                                         "tolerance", "constant_mass", "gammas", "out", "formats", "k_max",
                                         "points", "eps", "terms", "level", "fig3_x0", "command"};
    return k;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

double parse_number(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorKind::UsageError, std::string("bad number for ") + what + ": '" + s + "'");
    }
}

template <class T>
T json_get(const nlohmann::json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::UsageError, std::string("bad config value for '") + key + "': " + e.what());
    }
}

void apply_json(RunConfig& rc, const nlohmann::json& j) {
    rc.core = core_config_from_json(j, run_keys());
    if (j.contains("command")) rc.command = json_get<std::string>(j, "command");
    if (j.contains("gamma")) rc.gamma = json_get<double>(j, "gamma");
    if (j.contains("sigma")) rc.sigma = json_get<double>(j, "sigma");
    if (j.contains("levels")) rc.levels = json_get<std::size_t>(j, "levels");
    if (j.contains("branch")) rc.branch = parse_branch(json_get<std::string>(j, "branch"));
    if (j.contains("window")) rc.window = json_get<double>(j, "window");
    if (j.contains("refinements")) rc.refinements = json_get<std::size_t>(j, "refinements");
    if (j.contains("tolerance")) rc.tolerance = json_get<double>(j, "tolerance");
    if (j.contains("constant_mass")) rc.constant_mass = json_get<bool>(j, "constant_mass");
    if (j.contains("gammas")) rc.gammas = json_get<std::vector<double>>(j, "gammas");
    if (j.contains("out")) rc.out_dir = json_get<std::string>(j, "out");
    if (j.contains("formats")) rc.formats = json_get<std::vector<std::string>>(j, "formats");
    if (j.contains("k_max")) rc.k_max = json_get<double>(j, "k_max");
    if (j.contains("points")) rc.points = json_get<std::size_t>(j, "points");
    if (j.contains("eps")) rc.eps = json_get<double>(j, "eps");
    if (j.contains("terms")) rc.terms = json_get<std::size_t>(j, "terms");
    if (j.contains("level")) rc.level = json_get<std::size_t>(j, "level");
    if (j.contains("fig3_x0")) rc.fig3_x0 = json_get<double>(j, "fig3_x0");
}

void validate(RunConfig& rc, bool omega_given) {
    if (rc.command.empty()) throw Error(ErrorKind::UsageError, "missing command (one of solve, analytic, compare, "
                                                               "dispersion, sweep, heun-dump, figures)");
    if (std::find(commands.begin(), commands.end(), rc.command) == commands.end())
        throw Error(ErrorKind::UsageError, "unknown command '" + rc.command + "'");
    if (rc.gamma) {
        if (omega_given) throw Error(ErrorKind::UsageError, "give either --gamma or --omega0, not both");
        if (!(*rc.gamma > 0.0)) throw Error(ErrorKind::UsageError, "gamma must be positive");
        rc.core.omega0 = *rc.gamma * rc.core.hbar / (rc.core.m0 * rc.core.x0 * rc.core.x0);
    }
    rc.core.validate();
    if (rc.levels < 1) throw Error(ErrorKind::UsageError, "levels must be at least 1");
    if (!(rc.sigma > 0.0)) throw Error(ErrorKind::UsageError, "sigma must be positive");
    if (!(rc.window > 0.0)) throw Error(ErrorKind::UsageError, "window must be positive");
    if (!(rc.tolerance > 0.0)) throw Error(ErrorKind::UsageError, "tolerance must be positive");
    if (!(rc.k_max > 0.0) || rc.points < 2) throw Error(ErrorKind::UsageError, "need k_max > 0 and points >= 2");
    if (!(rc.fig3_x0 > 0.0)) throw Error(ErrorKind::UsageError, "fig3_x0 must be positive");
    if (rc.refinements < 1 || rc.refinements > 12) throw Error(ErrorKind::UsageError, "refinements must be in 1..12");
    for (double g : rc.gammas)
        if (!(g > 0.0)) throw Error(ErrorKind::UsageError, "sweep gammas must be positive");
    for (const auto& f : rc.formats)
        if (f != "csv" && f != "json" && f != "md") throw Error(ErrorKind::UsageError, "unknown format '" + f + "'");
}

}  // namespace

bool RunConfig::wants(const std::string& format) const {
    return std::find(formats.begin(), formats.end(), format) != formats.end();
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j = core.to_json();
    j["command"] = command;
    j["gamma"] = core.gamma();
    j["sigma"] = sigma;
    j["levels"] = levels;
    j["branch"] = to_string(branch);
    j["window"] = window;
    j["refinements"] = refinements;
    j["tolerance"] = tolerance;
    j["constant_mass"] = constant_mass;
    j["gammas"] = gammas;
    j["out"] = out_dir;
    j["formats"] = formats;
    j["k_max"] = k_max;
    j["points"] = points;
    j["eps"] = eps ? nlohmann::json(*eps) : nlohmann::json(nullptr);
    j["terms"] = terms;
    j["level"] = level;
    j["fig3_x0"] = fig3_x0;
    return j;
}

RunConfig parse_config(int argc, const char* const* argv) {
    CLI::App app{"Position-dependent-mass oscillator: spectra, Heun functions and dispersion"};
    app.set_help_flag("-h,--help", "Show help");

    std::string command, config_path, branch, gammas, formats;
    double m0 = 0, x0 = 0, omega0 = 0, hbar = 0, L = 0, gamma = 0, sigma = 0, window = 0, tolerance = 0, k_max = 0,
           eps = 0, fig3_x0 = 0;
    std::size_t N = 0, levels = 0, refinements = 0, points = 0, terms = 0, level = 0;
    bool constant_mass = false, no_staggered = false;
    std::string out;

    app.add_option("command", command, "solve | analytic | compare | dispersion | sweep | heun-dump | figures");
    app.add_option("--config", config_path, "JSON config file (flags override it)");
    auto* o_m0 = app.add_option("--m0", m0, "asymptotic mass m0");
    auto* o_x0 = app.add_option("--x0", x0, "singular-mass length x0");
    auto* o_omega0 = app.add_option("--omega0", omega0, "oscillator frequency omega0");
    auto* o_hbar = app.add_option("--hbar", hbar, "reduced Planck constant");
    auto* o_gamma = app.add_option("--gamma", gamma, "Gamma = m0 omega0 x0^2 / hbar (sets omega0)");
    auto* o_L = app.add_option("--L", L, "box half-width");
    auto* o_N = app.add_option("--N", N, "interior grid nodes");
    auto* o_nostag = app.add_flag("--no-staggered", no_staggered, "use the unshifted grid");
    auto* o_sigma = app.add_option("--sigma", sigma, "dispersion jump parameter");
    auto* o_levels = app.add_option("--levels", levels, "number of levels");
    auto* o_branch = app.add_option("--branch", branch, "exponent branch: + or -");
    auto* o_window = app.add_option("--window", window, "root search half-width in Eps");
    auto* o_ref = app.add_option("--refinements", refinements, "grid doublings for extrapolation");
    auto* o_tol = app.add_option("--tolerance", tolerance, "agreement tolerance in units of hbar omega0");
    auto* o_cm = app.add_flag("--constant-mass", constant_mass, "replace m(x) by the constant m0");
    auto* o_gammas = app.add_option("--gammas", gammas, "comma-separated Gamma values for sweep");
    auto* o_out = app.add_option("--out", out, "output directory");
    auto* o_formats = app.add_option("--formats", formats, "comma-separated subset of csv,json,md");
    auto* o_kmax = app.add_option("--k-max", k_max, "largest k of the dispersion curve");
    auto* o_points = app.add_option("--points", points, "points on the dispersion curve");
    auto* o_eps = app.add_option("--eps", eps, "Eps = 2E/(hbar omega0) for heun-dump");
    auto* o_terms = app.add_option("--terms", terms, "series coefficients for heun-dump");
    auto* o_level = app.add_option("--level", level, "level whose root heun-dump uses when --eps is absent");
    auto* o_fig3 = app.add_option("--fig3-x0", fig3_x0, "x0 used for the density figures");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::ParseError& e) {
        throw Error(ErrorKind::UsageError, e.what());
    }

    RunConfig rc;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw Error(ErrorKind::UsageError, "cannot read config file " + config_path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::UsageError, std::string("config file is not valid JSON: ") + e.what());
        }
        apply_json(rc, j);
    }
    if (!command.empty()) rc.command = command;
    if (*o_m0) rc.core.m0 = m0;
    if (*o_x0) rc.core.x0 = x0;
    if (*o_omega0) {
        rc.core.omega0 = omega0;
        rc.gamma.reset();
    }
    if (*o_hbar) rc.core.hbar = hbar;
    if (*o_gamma) rc.gamma = gamma;
    if (*o_L) rc.core.L = L;
    if (*o_N) rc.core.N = N;
    if (*o_nostag) rc.core.staggered = !no_staggered;
    if (*o_sigma) rc.sigma = sigma;
    if (*o_levels) rc.levels = levels;
    if (*o_branch) rc.branch = parse_branch(branch);
    if (*o_window) rc.window = window;
    if (*o_ref) rc.refinements = refinements;
    if (*o_tol) rc.tolerance = tolerance;
    if (*o_cm) rc.constant_mass = constant_mass;
    if (*o_gammas) {
        rc.gammas.clear();
        for (const auto& s : split_list(gammas)) rc.gammas.push_back(parse_number(s, "--gammas"));
    }
    if (*o_out) rc.out_dir = out;
    if (*o_formats) rc.formats = split_list(formats);
    if (*o_kmax) rc.k_max = k_max;
    if (*o_points) rc.points = points;
    if (*o_eps) rc.eps = eps;
    if (*o_terms) rc.terms = terms;
    if (*o_level) rc.level = level;
    if (*o_fig3) rc.fig3_x0 = fig3_x0;

    validate(rc, *o_omega0 && *o_gamma);
    return rc;
}

std::size_t sweep_threads() {
    std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("PDM_SPECTRA_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
    }
    return hw;
}

namespace {

struct Output {
    const RunConfig& rc;
    std::ostream& log;
    nlohmann::json summary;
    std::vector<std::string> files;

    Output(const RunConfig& r, std::ostream& l) : rc(r), log(l) {
        summary["schema"] = summary_schema;
        summary["command"] = r.command;
        summary["config"] = r.to_json();
    }

    fs::path path(const std::string& name) const { return fs::path(rc.out_dir) / name; }

    void text(const std::string& name, const std::string& content) {
        write_text_file(path(name), content);
        files.push_back(name);
    }
    void csv(const std::string& name, const CsvTable& t) {
        if (!rc.wants("csv")) return;
        write_csv_file(path(name), t);
        files.push_back(name);
    }
    void finish() {
        summary["files"] = files;
        if (rc.wants("json")) write_text_file(path("summary.json"), summary.dump(2) + "\n");
    }
};

std::string fmt(double v) { return format_double(v); }

std::vector<double> grid_vector(const Grid& g) { return g.nodes; }

void run_solve(Output& o) {
    const RunConfig& rc = o.rc;
    const ProblemSetup setup = rc.constant_mass ? rc.core.constant_mass_problem() : rc.core.singular_problem();
    const auto bs = solve_bound_states(setup, rc.levels);
    std::vector<std::size_t> idx(rc.levels);
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    const auto studies = refinement_study(setup, idx, 1);
    const double unit = rc.core.hbar * rc.core.omega0;

    CsvTable t;
    t.add_column("x", grid_vector(setup.grid));
    for (std::size_t j = 0; j < bs.pairs.size(); ++j) t.add_column("psi_" + std::to_string(j), bs.pairs[j].vector);
    o.csv("eigenvectors.csv", t);

    CsvTable ev;
    std::vector<double> n, e, e_unit, rich;
    for (std::size_t j = 0; j < bs.pairs.size(); ++j) {
        n.push_back(static_cast<double>(j));
        e.push_back(bs.pairs[j].value);
        e_unit.push_back(bs.pairs[j].value / unit);
        rich.push_back(studies[j].richardson_pair);
    }
    ev.add_column("index", n);
    ev.add_column("E", e);
    ev.add_column("E_over_hbar_omega0", e_unit);
    ev.add_column("E_richardson_N_2N", rich);
    o.csv("eigenvalues.csv", ev);

    nlohmann::json levels = nlohmann::json::array();
    o.log << (rc.constant_mass ? "constant mass" : "singular mass") << ", Gamma = " << fmt(rc.core.gamma())
          << ", N = " << setup.grid.N << ", L = " << fmt(setup.grid.L) << "\n";
    o.log << "  j  E/(hbar w0)              (N,2N) extrapolated       residual\n";
    for (std::size_t j = 0; j < bs.pairs.size(); ++j) {
        const auto& p = bs.pairs[j];
        const auto& d = bs.levels[j];
        nlohmann::json l{{"index", j},
                         {"E", p.value},
                         {"E_over_hbar_omega0", p.value / unit},
                         {"E_richardson_N_2N", studies[j].richardson_pair},
                         {"residual", p.residual},
                         {"block", p.block},
                         {"tail_left", d.tail_left},
                         {"tail_right", d.tail_right},
                         {"tail_ok", d.tail_ok},
                         {"sign_changes", d.sign_changes},
                         {"above_continuum", d.above_continuum}};
        l["degenerate_partner"] = d.degenerate_partner ? nlohmann::json(*d.degenerate_partner) : nlohmann::json(nullptr);
        levels.push_back(l);
        o.log << std::setw(3) << j << "  " << std::left << std::setw(24) << fmt(p.value / unit) << " " << std::setw(24)
              << fmt(studies[j].richardson_pair / unit) << std::right << " " << fmt(p.residual)
              << (d.degenerate_partner ? "  pair" : "") << (d.above_continuum ? "  continuum" : "") << "\n";
    }
    for (const auto& w : bs.warnings) o.log << "warning: " << w << "\n";
    o.summary["levels"] = levels;
    o.summary["warnings"] = bs.warnings;
    o.summary["norm_inf"] = bs.norm_inf;
    o.summary["blocks"] = bs.blocks;
    o.summary["continuum_threshold"] =
        bs.continuum_threshold ? nlohmann::json(*bs.continuum_threshold) : nlohmann::json(nullptr);
}

void run_analytic(Output& o) {
    const RunConfig& rc = o.rc;
    const double G = rc.core.gamma();
    RootSearchOptions ro;
    ro.half_width = rc.window;
    const auto roots = quantization_roots(G, rc.levels - 1, rc.branch, rc.core.omega0, rc.core.units(), ro);
    const double unit = rc.core.hbar * rc.core.omega0;
    OscillatorParams osc{rc.core.m0, rc.core.omega0, rc.core.x0, rc.core.units()};
    const Grid grid = rc.core.grid(MassProfile::singular(rc.core.m0, rc.core.x0));

    CsvTable dens;
    dens.add_column("x", grid.nodes);
    nlohmann::json rows = nlohmann::json::array();
    o.log << "Gamma = " << fmt(G) << ", branch " << to_string(rc.branch) << "\n";
    o.log << "  n  E_rootfind/(hbar w0)     E_formula(+)             polynomial\n";
    for (const auto& r : roots) {
        const auto fp = spectrum_formula(r.n, G, Branch::Plus, rc.core.omega0, rc.core.units());
        nlohmann::json row{{"n", r.n}, {"found", r.found}, {"message", r.message}};
        if (r.found) {
            const auto adm = admissibility(G, r.Eps, rc.branch, 1);
            row["Eps"] = r.Eps;
            row["E"] = r.energy;
            row["polynomial"] = r.polynomial;
            row["truncation_residual"] = r.truncation_residual;
            row["delta"] = r.delta;
            row["delta_scale"] = r.delta_scale;
            row["above_continuum"] = r.above_continuum;
            row["origin_exponent_psi1"] = adm.origin_exponent;
            row["square_integrable_psi1"] = adm.square_integrable;
            const auto adm2 = admissibility(G, r.Eps, rc.branch, 2);
            row["origin_exponent_psi2"] = adm2.origin_exponent;
            row["square_integrable_psi2"] = adm2.square_integrable;
            if (adm.square_integrable && !r.above_continuum) {
                const auto d = probability_density(r.n, rc.branch, 1, osc, grid);
                dens.add_column("rho_" + std::to_string(r.n), d.density);
                row["nodes_per_half_line"] = d.nodes_per_half_line;
            }
        }
        row["E_formula_plus"] = fp.complex ? nlohmann::json(nullptr) : nlohmann::json(fp.energy);
        rows.push_back(row);
        o.log << std::setw(3) << r.n << "  " << std::left << std::setw(24)
              << (r.found ? fmt(r.energy / unit) : std::string("none")) << " " << std::setw(24)
              << (fp.complex ? std::string("complex") : fmt(fp.energy / unit)) << std::right << " "
              << (r.polynomial ? "yes" : "no") << "\n";
    }
    o.csv("densities.csv", dens);
    o.summary["roots"] = rows;
}

SpectrumResult triangle_for(const RunConfig& rc, const CoreConfig& core) {
    SpectrumOptions so;
    so.branch = rc.branch;
    so.roots.half_width = rc.window;
    so.refinements = rc.refinements;
    return compare_spectrum(core.singular_problem(), rc.levels - 1, so);
}

void run_compare(Output& o) {
    const RunConfig& rc = o.rc;
    const auto res = triangle_for(rc, rc.core);
    std::ostringstream csv, md;
    write_spectrum_csv(csv, res);
    write_spectrum_markdown(md, res, rc.tolerance);
    if (rc.wants("csv")) o.text("triangle.csv", csv.str());
    if (rc.wants("md")) o.text("report.md", md.str());
    o.summary["spectrum"] = spectrum_to_json(res);
    o.log << md.str();
}

void run_sweep(Output& o) {
    const RunConfig& rc = o.rc;
    std::vector<SpectrumResult> results(rc.gammas.size());
    std::vector<std::string> errors(rc.gammas.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < rc.gammas.size(); i = next++) {
            try {
                CoreConfig c = rc.core;
                c.omega0 = rc.gammas[i] * c.hbar / (c.m0 * c.x0 * c.x0);
                results[i] = triangle_for(rc, c);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const std::size_t nt = std::min(sweep_threads(), std::max<std::size_t>(1, rc.gammas.size()));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    for (std::size_t i = 0; i < errors.size(); ++i)
        if (!errors[i].empty()) throw Error(ErrorKind::NoConvergence, "sweep at Gamma = " + fmt(rc.gammas[i]) + ": " + errors[i]);

    std::ostringstream csv, md;
    nlohmann::json all = nlohmann::json::array();
    bool header = true;
    for (const auto& r : results) {
        std::ostringstream one;
        write_spectrum_csv(one, r);
        std::string s = one.str();
        if (!header) s = s.substr(s.find('\n') + 1);
        header = false;
        csv << s;
        write_spectrum_markdown(md, r, rc.tolerance);
        md << "\n";
        all.push_back(spectrum_to_json(r));
    }
    if (rc.wants("csv")) o.text("sweep.csv", csv.str());
    if (rc.wants("md")) o.text("sweep.md", md.str());
    o.summary["sweep"] = all;
    o.summary["threads"] = nt;
    o.log << md.str();
}

void run_dispersion(Output& o) {
    const RunConfig& rc = o.rc;
    const auto model = make_dispersion_model(rc.core.m0, rc.core.x0, rc.sigma, rc.core.units());
    const auto curve = dispersion_curve(model, rc.k_max / rc.sigma, rc.points);
    CsvTable t;
    std::vector<double> k, E;
    for (const auto& p : curve) {
        k.push_back(p.k);
        E.push_back(p.E);
    }
    t.add_column("k", k);
    t.add_column("E", E);
    o.csv("dispersion.csv", t);
    const auto mn = dispersion_minimum(model);
    const auto z = dispersion_zero(model);
    o.summary["m0k"] = model.m0k;
    o.summary["minimum"] = {{"k", mn.k}, {"E", mn.E}};
    o.summary["zero"] = {{"k", z.k}, {"E", z.E}};
    const auto ft = reciprocal_mass_numeric(MassProfile::singular(rc.core.m0, rc.core.x0), 1.0 / rc.sigma);
    o.summary["reciprocal_mass_at_k_over_sigma"] = {{"k", ft.k},
                                                    {"delta_coefficient", ft.delta_coefficient},
                                                    {"regular_numeric", ft.regular},
                                                    {"regular_closed_form", ft.regular_closed_form},
                                                    {"inferred_m0k_k", ft.inferred},
                                                    {"error_estimate", ft.error_estimate}};
    std::ostringstream gp;
    gp << "set datafile separator ','\nset xlabel 'k'\nset ylabel 'E(k)'\nset key off\n"
       << "plot 'dispersion.csv' using 1:2 every ::1 with lines lw 2\n";
    o.text("dispersion.gp", gp.str());
    o.log << "m0k = " << fmt(model.m0k) << "\nminimum at k = " << fmt(mn.k) << ", E = " << fmt(mn.E)
          << "\nzero at k = " << fmt(z.k) << "\nnumeric transform of the 1/x^2 part at k = " << fmt(ft.k) << ": "
          << fmt(ft.regular) << " (closed form " << fmt(ft.regular_closed_form) << ", inferred m0k k = "
          << fmt(ft.inferred) << ")\n";
}

void run_heun_dump(Output& o) {
    const RunConfig& rc = o.rc;
    const double G = rc.core.gamma();
    double Eps;
    if (rc.eps) {
        Eps = *rc.eps;
    } else {
        RootSearchOptions ro;
        ro.half_width = rc.window;
        const auto roots = quantization_roots(G, rc.level, rc.branch, rc.core.omega0, rc.core.units(), ro);
        if (!roots.back().found) throw Error(ErrorKind::NoRootInWindow, roots.back().message);
        Eps = roots.back().Eps;
    }
    const HeunParams p = heun_params_rederived(G, Eps, rc.branch);
    const auto c = series_coefficients(p, rc.terms);
    const auto acc = accessory(p);
    CsvTable t;
    std::vector<double> k, re, im;
    for (std::size_t i = 0; i < c.size(); ++i) {
        k.push_back(static_cast<double>(i));
        re.push_back(c[i].real());
        im.push_back(c[i].imag());
    }
    t.add_column("k", k);
    t.add_column("re", re);
    t.add_column("im", im);
    o.csv("heun_coefficients.csv", t);
    o.summary["params"] = {{"alpha", p.alpha},       {"beta_re", p.beta.real()}, {"beta_im", p.beta.imag()},
                           {"gamma", p.gamma},       {"delta", p.delta},         {"eta", p.eta},
                           {"mu_re", acc.mu.real()}, {"nu_re", acc.nu_ode.real()}, {"Eps", Eps},
                           {"unphysical", p.unphysical()}};
    o.log << "Gamma = " << fmt(G) << ", Eps = " << fmt(Eps) << "\n";
    std::ostringstream tab;
    t.write(tab);
    o.log << tab.str();
}

void run_figures(Output& o) {
    const RunConfig& rc = o.rc;
    // mass profiles and potentials
    const std::size_t np = 1000;
    std::vector<double> x(np);
    for (std::size_t i = 0; i < np; ++i) x[i] = -5.0 + (static_cast<double>(i) + 0.5) * 10.0 / np;
    const std::vector<double> vary{0.5, 1.0, 1.5, 2.0};
    CsvTable f1a, f1b, pa, pb;
    f1a.add_column("x", x);
    f1b.add_column("x", x);
    pa.add_column("x", x);
    pb.add_column("x", x);
    for (double v : vary) {
        std::vector<double> ma(np), mb(np), va(np), vb(np);
        const auto Pa = MassProfile::singular(v, 1.0), Pb = MassProfile::singular(1.0, v);
        const HarmonicPotential Va(v, 1.0), Vb(1.0, 0.2 * 2.0 * v);
        for (std::size_t i = 0; i < np; ++i) {
            ma[i] = eval_mass(Pa, x[i]);
            mb[i] = eval_mass(Pb, x[i]);
            va[i] = eval_potential(Va, x[i]);
            vb[i] = eval_potential(Vb, x[i]);
        }
        f1a.add_column("m0=" + fmt(v), ma);
        f1b.add_column("x0=" + fmt(v), mb);
        pa.add_column("m0=" + fmt(v), va);
        pb.add_column("omega0=" + fmt(0.4 * v), vb);
    }
    o.csv("fig1a_mass_vary_m0.csv", f1a);
    o.csv("fig1b_mass_vary_x0.csv", f1b);
    o.csv("potential_vary_m0.csv", pa);
    o.csv("potential_vary_omega0.csv", pb);

    const auto model = make_dispersion_model(1.0, 1.0, 1.0, Units::natural());
    const auto curve = dispersion_curve(model, 3.0, 300);
    CsvTable f2;
    std::vector<double> k, E;
    for (const auto& p : curve) {
        k.push_back(p.k);
        E.push_back(p.E);
    }
    f2.add_column("k", k);
    f2.add_column("E", E);
    o.csv("fig2_dispersion.csv", f2);

    nlohmann::json fig3 = nlohmann::json::array();
    for (double w : {0.2, 0.4, 0.6, 0.8}) {
        OscillatorParams osc{rc.core.m0, w, rc.fig3_x0, rc.core.units()};
        CoreConfig c = rc.core;
        c.omega0 = w;
        c.x0 = rc.fig3_x0;
        c.L.reset();
        if (c.N % 2) ++c.N;
        const ProblemSetup setup = c.singular_problem();
        const auto bs = solve_bound_states(setup, 8);
        CsvTable t;
        t.add_column("x", setup.grid.nodes);
        nlohmann::json entry{{"omega0", w}, {"Gamma", osc.gamma()}, {"levels", nlohmann::json::array()}};
        for (std::size_t n = 0; n < 4; ++n) {
            const auto d = probability_density(n, Branch::Plus, 1, osc, setup.grid);
            t.add_column("rho_" + std::to_string(n), d.density);
            std::vector<double> rho_num(setup.grid.size());
            for (std::size_t i = 0; i < rho_num.size(); ++i) {
                const double a = bs.pairs[2 * n].vector[i], b = bs.pairs[2 * n + 1].vector[i];
                rho_num[i] = 0.5 * (a * a + b * b);
            }
            t.add_column("rho_numeric_" + std::to_string(n), rho_num);
            double l1 = 0.0, odd = 0.0;
            const std::size_t N = setup.grid.size();
            for (std::size_t i = 0; i < N; ++i) {
                l1 += std::abs(d.density[i] - rho_num[i]) * setup.grid.h;
                odd = std::max(odd, std::abs(d.density[i] - d.density[N - 1 - i]));
            }
            entry["levels"].push_back({{"n", n},
                                       {"Eps", d.Eps},
                                       {"E", d.energy},
                                       {"nodes_per_half_line", d.nodes_per_half_line},
                                       {"l1_vs_numeric", l1},
                                       {"max_even_defect", odd},
                                       {"trapezoid_norm", trapezoid_norm2(setup.grid, [&] {
                                            std::vector<double> a(N);
                                            for (std::size_t i = 0; i < N; ++i) a[i] = std::sqrt(d.density[i]);
                                            return a;
                                        }())}});
        }
        std::ostringstream name;
        name << "fig3_omega_" << fmt(w) << ".csv";
        o.csv(name.str(), t);
        fig3.push_back(entry);
    }
    o.summary["fig3"] = fig3;

    std::ostringstream gp1, gp2, gp3;
    gp1 << "set datafile separator ','\nset key autotitle columnhead\nset xlabel 'x'\nset ylabel 'm(x)'\n"
        << "set yrange [0:20]\nset multiplot layout 1,2\n"
        << "plot for [c=2:5] 'fig1a_mass_vary_m0.csv' using 1:c with lines\n"
        << "plot for [c=2:5] 'fig1b_mass_vary_x0.csv' using 1:c with lines\nunset multiplot\n";
    gp2 << "set datafile separator ','\nset key off\nset xlabel 'k'\nset ylabel 'E(k)'\n"
        << "plot 'fig2_dispersion.csv' using 1:2 every ::1 with lines lw 2\n";
    gp3 << "set datafile separator ','\nset key autotitle columnhead\nset xlabel 'x'\nset ylabel '|psi|^2'\n"
        << "set multiplot layout 2,2\n";
    for (double w : {0.2, 0.4, 0.6, 0.8})
        gp3 << "plot for [c in '2 4 6 8'] 'fig3_omega_" << fmt(w) << ".csv' using 1:(column(c+0)) with lines\n";
    gp3 << "unset multiplot\n";
    o.text("fig1.gp", gp1.str());
    o.text("fig2.gp", gp2.str());
    o.text("fig3.gp", gp3.str());
    o.log << "figure data written to " << rc.out_dir << "\n";
}

}  // namespace

int run(const RunConfig& rc, std::ostream& log) {
    Output o(rc, log);
    if (rc.command == "solve")
        run_solve(o);
    else if (rc.command == "analytic")
        run_analytic(o);
    else if (rc.command == "compare")
        run_compare(o);
    else if (rc.command == "sweep")
        run_sweep(o);
    else if (rc.command == "dispersion")
        run_dispersion(o);
    else if (rc.command == "heun-dump")
        run_heun_dump(o);
    else if (rc.command == "figures")
        run_figures(o);
    else
        throw Error(ErrorKind::UsageError, "unknown command '" + rc.command + "'");
    o.finish();
    return 0;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig rc;
    try {
        rc = parse_config(argc, argv);
    } catch (const HelpRequested& h) {
        out << h.text;
        return 0;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return 2;
    }
    try {
        return run(rc, out);
    } catch (const Error& e) {
        err << e.what() << "\n";
        return e.kind() == ErrorKind::UsageError ? 2 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace pdm::cli
