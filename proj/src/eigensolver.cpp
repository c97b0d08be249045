#include "pdm/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace pdm {

namespace {

struct Block {
    std::size_t begin = 0;
    std::size_t end = 0;  // exclusive
    std::size_t size() const { return end - begin; }
};

std::vector<Block> split_blocks(const DiscreteHamiltonian& H) {
    std::vector<Block> blocks;
    std::size_t start = 0;
    for (std::size_t i = 0; i < H.offdiag.size(); ++i) {
        if (H.offdiag[i] == 0.0) {
            blocks.push_back({start, i + 1});
            start = i + 1;
        }
    }
    blocks.push_back({start, H.size()});
    return blocks;
}

std::pair<double, double> gershgorin(std::span<const double> d, std::span<const double> e) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    const std::size_t n = d.size();
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(e[i - 1]);
        if (i + 1 < n) r += std::abs(e[i]);
        lo = std::min(lo, d[i] - r);
        hi = std::max(hi, d[i] + r);
    }
    return {lo, hi};
}

// k smallest eigenvalues of one unreduced block. Bisection brackets are shared
// between eigenvalues through a record of (shift, count) evaluations.
std::vector<double> block_eigenvalues(std::span<const double> d, std::span<const double> e, std::size_t k) {
    const std::size_t n = d.size();
    k = std::min(k, n);
    std::vector<double> out;
    if (k == 0) return out;
    if (n == 1) return {d[0]};

    auto [lo0, hi0] = gershgorin(d, e);
    const double span = std::max(hi0 - lo0, 1.0);
    lo0 -= 1e-12 * span + 1e-300;
    hi0 += 1e-12 * span + 1e-300;

    struct Probe {
        long double x;
        std::size_t count;
    };
    std::vector<Probe> probes{{lo0, 0}, {hi0, n}};

    for (std::size_t j = 0; j < k; ++j) {
        long double lo = lo0, hi = hi0;
        for (const auto& p : probes) {
            if (p.count <= j) lo = std::max(lo, p.x);
            if (p.count > j) hi = std::min(hi, p.x);
        }
        for (int it = 0; it < 256; ++it) {
            if (hi - lo <= 1e-12L) break;
            const long double mid = lo + 0.5L * (hi - lo);
            if (mid <= lo || mid >= hi) break;
            const std::size_t c = sturm_count(d, e, mid);
            probes.push_back({mid, c});
            if (c <= j)
                lo = mid;
            else
                hi = mid;
        }
        out.push_back(static_cast<double>(lo + 0.5L * (hi - lo)));
    }
    return out;
}

// LU factorisation with partial pivoting of the shifted tridiagonal block, then a
// solve; the layout follows the classical gttrf/gtts2 pair.
class ShiftedTridiagonalSolver {
public:
    ShiftedTridiagonalSolver(std::span<const double> d, std::span<const double> e, double shift, double scale)
        : n_(d.size()), dl_(e.begin(), e.end()), d_(n_), du_(e.begin(), e.end()), du2_(n_ > 2 ? n_ - 2 : 0, 0.0),
          piv_(n_ > 0 ? n_ - 1 : 0, false) {
        for (std::size_t i = 0; i < n_; ++i) d_[i] = d[i] - shift;
        const double tiny = std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300);
        for (std::size_t i = 0; i + 1 < n_; ++i) {
            if (std::abs(d_[i]) >= std::abs(dl_[i])) {
                if (d_[i] == 0.0) d_[i] = tiny;
                const double f = dl_[i] / d_[i];
                dl_[i] = f;
                d_[i + 1] -= f * du_[i];
            } else {
                const double f = d_[i] / dl_[i];
                d_[i] = dl_[i];
                dl_[i] = f;
                const double t = du_[i];
                du_[i] = d_[i + 1];
                d_[i + 1] = t - f * d_[i + 1];
                if (i + 2 < n_) {
                    du2_[i] = du_[i + 1];
                    du_[i + 1] = -f * du_[i + 1];
                }
                piv_[i] = true;
            }
        }
        for (auto& v : d_)
            if (v == 0.0) v = tiny;
    }

    void solve(std::vector<double>& b) const {
        for (std::size_t i = 0; i + 1 < n_; ++i) {
            if (!piv_[i]) {
                b[i + 1] -= dl_[i] * b[i];
            } else {
                const double t = b[i];
                b[i] = b[i + 1];
                b[i + 1] = t - dl_[i] * b[i];
            }
        }
        b[n_ - 1] /= d_[n_ - 1];
        if (n_ > 1) b[n_ - 2] = (b[n_ - 2] - du_[n_ - 2] * b[n_ - 1]) / d_[n_ - 2];
        for (std::size_t ii = n_ >= 2 ? n_ - 2 : 0; ii-- > 0;) {
            b[ii] = (b[ii] - du_[ii] * b[ii + 1] - du2_[ii] * b[ii + 2]) / d_[ii];
        }
    }

private:
    std::size_t n_;
    std::vector<double> dl_, d_, du_, du2_;
    std::vector<bool> piv_;
};

double norm2(const std::vector<double>& v) {
    long double s = 0.0L;
    for (double x : v) s += static_cast<long double>(x) * x;
    return static_cast<double>(std::sqrt(s));
}

double block_residual(std::span<const double> d, std::span<const double> e, const std::vector<double>& u,
                      double lambda) {
    const std::size_t n = d.size();
    long double s = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        long double r = (static_cast<long double>(d[i]) - lambda) * u[i];
        if (i > 0) r += static_cast<long double>(e[i - 1]) * u[i - 1];
        if (i + 1 < n) r += static_cast<long double>(e[i]) * u[i + 1];
        s += r * r;
    }
    return static_cast<double>(std::sqrt(s));
}

void fix_sign(std::vector<double>& v) {
    double vmax = 0.0;
    for (double x : v) vmax = std::max(vmax, std::abs(x));
    for (double x : v) {
        if (std::abs(x) > 1e-3 * vmax) {
            if (x < 0)
                for (auto& y : v) y = -y;
            return;
        }
    }
}

}  // namespace

std::size_t sturm_count(std::span<const double> d, std::span<const double> e, long double sigma) {
    const std::size_t n = d.size();
    std::size_t count = 0;
    long double q = 1.0L;
    const long double tiny = std::numeric_limits<long double>::min() / std::numeric_limits<long double>::epsilon();
    for (std::size_t i = 0; i < n; ++i) {
        const long double b = i > 0 ? static_cast<long double>(e[i - 1]) : 0.0L;
        q = (static_cast<long double>(d[i]) - sigma) - (i > 0 ? b * b / q : 0.0L);
        if (q == 0.0L) q = -tiny;
        if (q < 0.0L) ++count;
    }
    return count;
}

std::size_t sturm_count(const DiscreteHamiltonian& H, double sigma) {
    return sturm_count(H.diag, H.offdiag, static_cast<long double>(sigma));
}

std::vector<double> eigenvalues_tridiag(const DiscreteHamiltonian& H, std::size_t k) {
    if (k > H.size()) throw Error(ErrorKind::BadParameter, "requested more eigenvalues than the matrix order");
    std::vector<double> all;
    for (const auto& b : split_blocks(H)) {
        std::span<const double> d(H.diag.data() + b.begin, b.size());
        std::span<const double> e(H.offdiag.data() + b.begin, b.size() - 1);
        auto vals = block_eigenvalues(d, e, k);
        all.insert(all.end(), vals.begin(), vals.end());
    }
    std::sort(all.begin(), all.end());
    all.resize(k);
    return all;
}

std::vector<EigenPair> eigen_tridiag(const DiscreteHamiltonian& H, std::size_t k) {
    if (k > H.size()) throw Error(ErrorKind::BadParameter, "requested more eigenvalues than the matrix order");
    const auto blocks = split_blocks(H);
    const double hnorm = H.norm_inf();
    const double tol = 1e-9 * hnorm;

    struct Candidate {
        double value;
        std::size_t block;
    };
    std::vector<Candidate> cands;
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        const auto& b = blocks[bi];
        std::span<const double> d(H.diag.data() + b.begin, b.size());
        std::span<const double> e(H.offdiag.data() + b.begin, b.size() - 1);
        for (double v : block_eigenvalues(d, e, k)) cands.push_back({v, bi});
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        return a.value < b.value || (a.value == b.value && a.block < b.block);
    });
    cands.resize(k);

    std::vector<EigenPair> out;
    out.reserve(k);
    std::mt19937_64 rng(0x5eed5eedULL);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);

    // Vectors already computed in each block, for Gram-Schmidt within clusters.
    std::vector<std::vector<std::pair<double, std::vector<double>>>> done(blocks.size());
    const double cluster_gap = 1e-7 * std::max(1.0, hnorm);

    for (std::size_t j = 0; j < k; ++j) {
        const auto& c = cands[j];
        const auto& b = blocks[c.block];
        const std::size_t n = b.size();
        std::span<const double> d(H.diag.data() + b.begin, n);
        std::span<const double> e(H.offdiag.data() + b.begin, n - 1);

        std::vector<const std::vector<double>*> cluster;
        std::size_t members = 0;
        for (const auto& [val, vec] : done[c.block]) {
            if (std::abs(val - c.value) <= cluster_gap) {
                cluster.push_back(&vec);
                ++members;
            }
        }
        const double shift = c.value + static_cast<double>(members) * 1e-10 * std::max(1.0, std::abs(c.value));

        std::vector<double> u(n);
        double res = std::numeric_limits<double>::infinity();
        if (n == 1) {
            u[0] = 1.0;
            res = 0.0;
        } else {
            for (auto& x : u) x = uni(rng);
            ShiftedTridiagonalSolver solver(d, e, shift, hnorm);
            for (int it = 0; it < 50; ++it) {
                solver.solve(u);
                for (const auto* w : cluster) {
                    const double dot = std::inner_product(u.begin(), u.end(), w->begin(), 0.0);
                    for (std::size_t i = 0; i < n; ++i) u[i] -= dot * (*w)[i];
                }
                const double nu = norm2(u);
                if (!(nu > 0.0) || !std::isfinite(nu)) break;
                for (auto& x : u) x /= nu;
                res = block_residual(d, e, u, c.value);
                if (res <= tol && it >= 1) break;
            }
        }
        if (!(res <= tol)) {
            std::ostringstream os;
            os << "inverse iteration for eigenvalue " << j << " (" << c.value << ") reached residual " << res
               << " > " << tol;
            throw Error(ErrorKind::NoConvergence, os.str());
        }
        fix_sign(u);
        done[c.block].push_back({c.value, u});

        std::vector<double> full(H.size(), 0.0);
        std::copy(u.begin(), u.end(), full.begin() + static_cast<std::ptrdiff_t>(b.begin));
        EigenPair p;
        p.value = c.value;
        p.index = j;
        p.block = c.block;
        p.residual = res;
        p.vector = normalize(H.grid, full);
        out.push_back(std::move(p));
    }
    return out;
}

double trapezoid_norm2(const Grid& grid, std::span<const double> v) {
    if (v.size() != grid.size()) throw Error(ErrorKind::BadParameter, "vector length does not match the grid");
    // Points -L, x_0 ... x_{N-1}, L with zero wall values.
    long double acc = 0.0L;
    long double prev_x = -grid.L, prev_f = 0.0L;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const long double f = static_cast<long double>(v[i]) * v[i];
        acc += 0.5L * (grid.nodes[i] - prev_x) * (f + prev_f);
        prev_x = grid.nodes[i];
        prev_f = f;
    }
    acc += 0.5L * (grid.L - prev_x) * prev_f;
    return static_cast<double>(acc);
}

std::vector<double> normalize(const Grid& grid, std::span<const double> v) {
    const double s = trapezoid_norm2(grid, v);
    if (!(s > 0.0) || !std::isfinite(s)) throw Error(ErrorKind::ZeroVector, "cannot normalise a zero vector");
    const double f = 1.0 / std::sqrt(s);
    std::vector<double> out(v.begin(), v.end());
    for (auto& x : out) x *= f;
    return out;
}

std::optional<double> continuum_threshold(const MassProfile& profile, const Units& units) {
    if (const auto* s = std::get_if<SingularMass>(&profile.kind()))
        return units.hbar * units.hbar / (8.0 * s->m0 * s->x0 * s->x0);
    return std::nullopt;
}

BoundStates solve_bound_states(const ProblemSetup& setup, std::size_t k) {
    const DiscreteHamiltonian H = assemble_bdd(setup);
    BoundStates out;
    out.norm_inf = H.norm_inf();
    out.blocks = H.split_points().size() + 1;
    out.pairs = eigen_tridiag(H, k);
    out.continuum_threshold = continuum_threshold(setup.profile, setup.units);
    out.levels.resize(out.pairs.size());

    const double deg_tol_rel = 1e-8;
    for (std::size_t j = 0; j < out.pairs.size(); ++j) {
        const auto& p = out.pairs[j];
        auto& lv = out.levels[j];
        double vmax = 0.0;
        for (double x : p.vector) vmax = std::max(vmax, std::abs(x));
        lv.tail_left = std::abs(p.vector.front()) / vmax;
        lv.tail_right = std::abs(p.vector.back()) / vmax;
        lv.tail_ok = lv.tail_left < 1e-8 && lv.tail_right < 1e-8;
        if (!lv.tail_ok) {
            std::ostringstream os;
            os << "level " << j << ": boundary tail " << std::max(lv.tail_left, lv.tail_right)
               << " exceeds 1e-8 of max|psi|; increase L";
            out.warnings.push_back(os.str());
        }
        if (out.continuum_threshold && p.value >= *out.continuum_threshold) {
            lv.above_continuum = true;
            std::ostringstream os;
            os << "level " << j << " (" << p.value << ") lies above the continuum threshold "
               << *out.continuum_threshold << " of the singular mass";
            out.warnings.push_back(os.str());
        }
        // sign changes over significant entries only
        double last = 0.0;
        for (double x : p.vector) {
            if (std::abs(x) < 1e-8 * vmax) continue;
            if (last != 0.0 && (x > 0) != (last > 0)) ++lv.sign_changes;
            last = x;
        }
    }
    for (std::size_t j = 0; j + 1 < out.pairs.size(); ++j) {
        const double a = out.pairs[j].value, b = out.pairs[j + 1].value;
        if (std::abs(b - a) <= deg_tol_rel * std::max(1.0, std::abs(a))) {
            out.levels[j].degenerate_partner = j + 1;
            out.levels[j + 1].degenerate_partner = j;
        }
    }
    return out;
}

double generalized_richardson(std::span<const double> h, std::span<const double> values,
                              std::span<const double> exponents) {
    const std::size_t m = exponents.size() + 1;
    if (h.size() != values.size() || h.size() < m)
        throw Error(ErrorKind::BadParameter, "not enough refinement levels for the requested exponents");
    const std::size_t off = h.size() - m;
    const double href = h[off];
    // Dense solve of the (m x m) system with partial pivoting.
    std::vector<std::vector<long double>> A(m, std::vector<long double>(m + 1));
    for (std::size_t r = 0; r < m; ++r) {
        A[r][0] = 1.0L;
        const long double t = static_cast<long double>(h[off + r]) / href;
        for (std::size_t c = 1; c < m; ++c) A[r][c] = std::pow(t, static_cast<long double>(exponents[c - 1]));
        A[r][m] = values[off + r];
    }
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < m; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        std::swap(A[col], A[piv]);
        for (std::size_t r = col + 1; r < m; ++r) {
            const long double f = A[r][col] / A[col][col];
            for (std::size_t c = col; c <= m; ++c) A[r][c] -= f * A[col][c];
        }
    }
    std::vector<long double> x(m);
    for (std::size_t r = m; r-- > 0;) {
        long double s = A[r][m];
        for (std::size_t c = r + 1; c < m; ++c) s -= A[r][c] * x[c];
        x[r] = s / A[r][r];
    }
    return static_cast<double>(x[0]);
}

namespace {

std::vector<double> exponent_family(double p) {
    // Multiples of p, dropping those within 0.25 of the regular h^2 term, then 2, 4.
    std::vector<double> out;
    for (int k = 1; k * p < 1.75; ++k) out.push_back(k * p);
    out.push_back(2.0);
    out.push_back(4.0);
    return out;
}

}  // namespace

std::vector<RefinementStudy> refinement_study(const ProblemSetup& setup, std::span<const std::size_t> indices,
                                              std::size_t refinements) {
    if (indices.empty()) return {};
    if (refinements < 1) throw Error(ErrorKind::BadParameter, "refinement study needs at least one doubling");
    const std::size_t kmax = *std::max_element(indices.begin(), indices.end()) + 1;
    std::size_t base = setup.grid.N;
    if (setup.profile.is_singular() && base % 2 == 1) ++base;  // keep the origin on a flux midpoint

    std::vector<RefinementStudy> out(indices.size());
    for (std::size_t q = 0; q < indices.size(); ++q) out[q].index = indices[q];

    for (std::size_t j = 0; j <= refinements; ++j) {
        const std::size_t N = base << j;
        ProblemSetup s = setup;
        s.grid = build_grid(setup.grid.L, N, setup.grid.staggered,
                            setup.profile.is_singular() ? std::vector<double>{} : setup.profile.singular_points());
        const auto vals = eigenvalues_tridiag(assemble_bdd(s), kmax);
        for (std::size_t q = 0; q < indices.size(); ++q) {
            out[q].N.push_back(N);
            out[q].h.push_back(s.grid.h);
            out[q].values.push_back(vals[indices[q]]);
        }
    }

    const auto threshold = continuum_threshold(setup.profile, setup.units);
    for (auto& st : out) {
        const std::size_t levels = st.values.size();
        auto fit = [&](double p) {
            auto fam = exponent_family(p);
            const std::size_t K = std::min(fam.size(), levels - 1);
            fam.resize(K);
            st.exponents = fam;
            const double e = generalized_richardson(st.h, st.values, fam);
            double e_less = e;
            if (K >= 2) {
                std::vector<double> fewer(fam.begin(), fam.end() - 1);
                e_less = generalized_richardson(st.h, st.values, fewer);
            } else {
                e_less = st.values.back();
            }
            st.error_estimate = std::abs(e - e_less);
            return e;
        };
        auto pair = [&](double order) {
            const double a = st.values[levels - 2], b = st.values[levels - 1];
            const double r = std::pow(st.h[levels - 2] / st.h[levels - 1], order);
            return b + (b - a) / (r - 1.0);
        };

        if (!threshold) {
            st.model = "smooth";
            st.leading_order = 2.0;
            st.richardson_pair = pair(2.0);
            std::vector<double> fam{2.0, 4.0, 6.0};
            fam.resize(std::min<std::size_t>(fam.size(), levels - 1));
            st.exponents = fam;
            st.extrapolated = generalized_richardson(st.h, st.values, fam);
            if (fam.size() >= 2) {
                std::vector<double> fewer(fam.begin(), fam.end() - 1);
                st.error_estimate = std::abs(st.extrapolated - generalized_richardson(st.h, st.values, fewer));
            } else {
                st.error_estimate = std::abs(st.extrapolated - st.values.back());
            }
            continue;
        }

        st.model = "singular-origin";
        double E = st.values.back();
        if (E >= *threshold) {
            st.reliable = false;
            st.extrapolated = st.values.back();
            st.richardson_pair = st.values.back();
            st.leading_order = 0.0;
            st.error_estimate = std::abs(st.values.back() - st.values[levels - 2]);
            continue;
        }
        // The exponent depends on the limit itself; iterate to a fixed point.
        for (int it = 0; it < 100; ++it) {
            const double p = std::sqrt(std::max(1e-6, 1.0 - E / *threshold));
            const double next = fit(p);
            const bool settled = std::abs(next - E) <= 1e-15 * std::max(1.0, std::abs(E));
            E = next;
            st.leading_order = p;
            if (settled) break;
            if (E >= *threshold) break;
        }
        st.extrapolated = E;
        st.richardson_pair = pair(st.leading_order);
        st.reliable = E < *threshold && std::isfinite(E);
    }
    return out;
}

}  // namespace pdm
