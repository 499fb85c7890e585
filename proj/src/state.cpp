#include "tqft/state.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <limits>
#include <random>

#include "tqft/quadrature.hpp"

namespace tqft {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr Cplx kI{0.0, 1.0};

}  // namespace

TetKernel tet_kernel(double sign, const std::array<double, 3>& alpha,
                     const QDilogParams& params) {
    double sum = alpha[0] + alpha[1] + alpha[2];
    if (!(alpha[0] > 0 && alpha[1] > 0 && alpha[2] > 0) || std::abs(sum - 1.0) > 1e-9)
        throw NonPositiveAngles("kernel angles must be positive and sum to 1");
    TetKernel k;
    k.sign = sign;
    k.alpha = alpha;
    k.hbar = params.hbar;
    k.cb = params.cb;
    double a1 = alpha[0], a3 = alpha[2];
    k.phi_T = a1 * a3 + (a1 - a3) / 3.0 - (2.0 * params.hbar + 1.0) / 6.0;
    return k;
}

Cplx kernel_log_weight(const TetKernel& k, const PhiEvaluator& phi,
                       const std::array<Cplx, 4>& x) {
    double a1 = k.alpha[0], a3 = k.alpha[2];
    Cplx d = x[3] - x[2];
    if (k.sign > 0) {
        return 2.0 * kPi * kI * d * (x[0] - kI * a3 * k.cb) +
               kI * kPi * k.phi_T / (4.0 * k.hbar) -
               phi.log_phi(d - kI * (1.0 - a1) * k.cb);
    }
    return -2.0 * kPi * kI * d * (x[0] + kI * a3 * k.cb) -
           kI * kPi * k.phi_T / (4.0 * k.hbar) +
           phi.log_phi(d + kI * (1.0 - a1) * k.cb);
}

Cplx apply_level(Cplx z, double level, double hbar) {
    return z * std::exp(kI * kPi * level / (4.0 * hbar));
}

Cplx StateIntegral::log_integrand(const std::vector<double>& y) const {
    std::vector<Cplx> vals(n_vars);
    for (std::size_t v = 0; v < n_vars; ++v) {
        Cplx acc = 0;
        for (int j = 0; j < dimension; ++j)
            acc += to_double(expand[v][j]) * Cplx(y[j], shifts[j]);
        vals[v] = acc;
    }
    Cplx lg = 0;
    for (std::size_t t = 0; t < kernels.size(); ++t) {
        std::array<Cplx, 4> x{vals[tet_vars[t][0]], vals[tet_vars[t][1]],
                              vals[tet_vars[t][2]], vals[tet_vars[t][3]]};
        lg += kernel_log_weight(kernels[t], *phi, x);
    }
    return lg;
}

std::vector<double> StateIntegral::freq_bounds(double box) const {
    std::vector<double> freq(dimension, 0.0);
    for (std::size_t t = 0; t < kernels.size(); ++t) {
        std::vector<double> e0(dimension), ed(dimension);
        for (int j = 0; j < dimension; ++j) {
            e0[j] = to_double(expand[tet_vars[t][0]][j]);
            ed[j] = to_double(expand[tet_vars[t][3]][j]) -
                    to_double(expand[tet_vars[t][2]][j]);
        }
        double m0 = 0, md = 0;
        for (int j = 0; j < dimension; ++j) {
            m0 += std::abs(e0[j]) * box;
            md += std::abs(ed[j]) * box;
        }
        double cb = kernels[t].cb;
        for (int j = 0; j < dimension; ++j) {
            // quadratic phase 2 pi (x3-x2) x0
            freq[j] += 2.0 * kPi * (std::abs(ed[j]) * (m0 + cb) +
                                    std::abs(e0[j]) * (md + cb));
            // dilog factor: |d log Phi / du| <= ~2 pi (|u| + 2 cb)
            freq[j] += 2.0 * kPi * std::abs(ed[j]) * (md + 2.0 * cb);
        }
    }
    return freq;
}

namespace {

// exact row reduction of the homogeneous delta system, Markowitz pivoting
struct Elimination {
    std::vector<std::size_t> free_vars;
    std::vector<std::vector<Rat>> expand;  // n_vars rows, |free_vars| cols
};

Elimination eliminate_deltas(std::vector<std::vector<Rat>> rows, std::size_t n_vars) {
    std::size_t m = rows.size();
    std::vector<bool> row_done(m, false), col_pivot(n_vars, false);
    std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, col)
    for (std::size_t step = 0; step < m; ++step) {
        long best = -1;
        std::size_t br = 0, bc = 0;
        for (std::size_t r = 0; r < m; ++r) {
            if (row_done[r]) continue;
            long rn = 0;
            for (std::size_t c = 0; c < n_vars; ++c)
                if (rows[r][c] != 0) ++rn;
            if (rn == 0) throw DegenerateDeltaSystem("dependent delta constraints");
            for (std::size_t c = 0; c < n_vars; ++c) {
                if (rows[r][c] == 0 || col_pivot[c]) continue;
                long cn = 0;
                for (std::size_t r2 = 0; r2 < m; ++r2)
                    if (!row_done[r2] && rows[r2][c] != 0) ++cn;
                long score = (rn - 1) * (cn - 1);
                if (best < 0 || score < best ||
                    (score == best && (c < bc || (c == bc && r < br)))) {
                    best = score;
                    br = r;
                    bc = c;
                }
            }
        }
        if (best < 0) throw DegenerateDeltaSystem("dependent delta constraints");
        Rat p = rows[br][bc];
        for (std::size_t c = 0; c < n_vars; ++c) rows[br][c] /= p;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == br || rows[r][bc] == 0) continue;
            Rat f = rows[r][bc];
            for (std::size_t c = 0; c < n_vars; ++c) rows[r][c] -= f * rows[br][c];
        }
        row_done[br] = true;
        col_pivot[bc] = true;
        pivots.push_back({br, bc});
    }

    Elimination out;
    for (std::size_t c = 0; c < n_vars; ++c)
        if (!col_pivot[c]) out.free_vars.push_back(c);
    std::size_t d = out.free_vars.size();
    out.expand.assign(n_vars, std::vector<Rat>(d, 0));
    for (std::size_t j = 0; j < d; ++j) out.expand[out.free_vars[j]][j] = 1;
    for (auto [r, c] : pivots)
        for (std::size_t j = 0; j < d; ++j)
            out.expand[c][j] = -rows[r][out.free_vars[j]];
    return out;
}

// all shift vectors over the candidate grid (full enumeration d <= 3,
// coordinate descent otherwise)
std::vector<double> choose_shifts(StateIntegral& si, double eps) {
    int d = si.dimension;
    // large shifts shrink the truncation box dramatically; the decay probe
    // below rejects any choice that crosses a pole or fails to decay
    double cb = si.kernels.empty() ? 1.0 : si.kernels[0].cb;
    std::vector<double> cand = {0.0,       eps,       -eps,      2 * eps,
                                -2 * eps,  0.1 * cb,  -0.1 * cb, 0.2 * cb,
                                -0.2 * cb, 0.3 * cb,  -0.3 * cb};
    std::vector<std::vector<double>> dirs;
    for (int j = 0; j < d; ++j) {
        std::vector<double> u(d, 0.0);
        u[j] = 1.0;
        dirs.push_back(u);
        u[j] = -1.0;
        dirs.push_back(u);
    }
    for (int mask = 0; mask < (1 << d); ++mask) {
        std::vector<double> u(d);
        double nr = std::sqrt(static_cast<double>(d));
        for (int j = 0; j < d; ++j) u[j] = ((mask >> j) & 1 ? 1.0 : -1.0) / nr;
        dirs.push_back(u);
    }

    // Im(x3 - x2) per tet as a function of the shift vector; the nearest
    // zero of the denominator dilog sits alpha_1 * cb below the unshifted
    // contour (above for mirrored tets), and the deformation must not
    // cross it
    std::vector<std::vector<double>> drow(si.kernels.size(), std::vector<double>(d));
    for (std::size_t t = 0; t < si.kernels.size(); ++t)
        for (int j = 0; j < d; ++j)
            drow[t][j] = to_double(si.expand[si.tet_vars[t][3]][j]) -
                         to_double(si.expand[si.tet_vars[t][2]][j]);
    auto clears_poles = [&](const std::vector<double>& sigma) {
        for (std::size_t t = 0; t < si.kernels.size(); ++t) {
            double s = 0;
            for (int j = 0; j < d; ++j) s += drow[t][j] * sigma[j];
            double lim = (si.kernels[t].alpha[0] - 0.03) * si.kernels[t].cb;
            if (si.kernels[t].sign > 0 ? s < -lim : s > lim) return false;
        }
        return true;
    };

    auto score = [&](const std::vector<double>& sigma) {
        if (!clears_poles(sigma)) return -std::numeric_limits<double>::infinity();
        si.shifts = sigma;
        double R1 = 4.0, R2 = 8.0;
        double g0;
        std::vector<double> y0(d, 0.0);
        try {
            g0 = si.log_integrand(y0).real();
        } catch (const PoleProximity&) {
            return -std::numeric_limits<double>::infinity();
        }
        double worst = std::numeric_limits<double>::infinity();
        for (const auto& u : dirs) {
            try {
                std::vector<double> y1(d), y2(d);
                for (int j = 0; j < d; ++j) {
                    y1[j] = R1 * u[j];
                    y2[j] = R2 * u[j];
                }
                double g1 = si.log_integrand(y1).real();
                double g2 = si.log_integrand(y2).real();
                worst = std::min(worst, (g0 - g1) / R1);
                worst = std::min(worst, (g1 - g2) / (R2 - R1));
            } catch (const PoleProximity&) {
                return -std::numeric_limits<double>::infinity();
            }
        }
        return worst;
    };

    std::vector<double> best(d, 0.0);
    double best_score = -std::numeric_limits<double>::infinity();
    if (d <= 3) {
        std::vector<std::size_t> idx(d, 0);
        while (true) {
            std::vector<double> sigma(d);
            for (int j = 0; j < d; ++j) sigma[j] = cand[idx[j]];
            double s = score(sigma);
            if (s > best_score) {
                best_score = s;
                best = sigma;
            }
            int j = 0;
            for (; j < d; ++j) {
                if (++idx[j] < cand.size()) break;
                idx[j] = 0;
            }
            if (j == d) break;
        }
    } else {
        best_score = score(best);
        for (int pass = 0; pass < 3; ++pass) {
            for (int j = 0; j < d; ++j) {
                for (double c : cand) {
                    std::vector<double> sigma = best;
                    sigma[j] = c;
                    double s = score(sigma);
                    if (s > best_score) {
                        best_score = s;
                        best = sigma;
                    }
                }
            }
        }
    }
    if (!(best_score > 0.0))
        throw NoDecay("no contour shift with decaying integrand found");
    si.shifts = best;
    return best;
}

}  // namespace

StateIntegral assemble(const Triangulation& tri, const ShapeAssignment& shape,
                       const PhiEvaluator& phi) {
    if (!tri.is_closed())
        throw NotAdmissible("state integral evaluation requires closed X");
    if (!shape.positive() || !shape.sums_ok(1e-9))
        throw NotAdmissible("shape must be positive with unit angle sums");
    if (!homology_h2_truncated(tri).admissible_topology)
        throw NotAdmissible("H2 of the truncated complex is nonzero");

    EdgeWeightVector w = edge_weights(tri, shape);
    for (const auto& [cls, target] : balance_targets(tri)) {
        if (std::abs(w.weights[cls] - to_double(target)) > 1e-9)
            throw NotBalanced("edge weights do not meet the balance targets");
    }

    StateIntegral si;
    si.phi = &phi;
    QDilogParams params = phi.params();

    // one variable per face class
    std::vector<int> var_of_class(tri.num_face_classes(), -1);
    for (int t = 0; t < tri.num_tets(); ++t) {
        for (int f = 0; f < 4; ++f) {
            int c = tri.face_class(t, f);
            if (var_of_class[c] < 0) {
                var_of_class[c] = static_cast<int>(si.face_of_var.size());
                si.face_of_var.push_back(c);
            }
        }
    }
    si.n_vars = si.face_of_var.size();

    std::vector<std::vector<Rat>> deltas;
    for (int t = 0; t < tri.num_tets(); ++t) {
        std::vector<Rat> row(si.n_vars, 0);
        row[var_of_class[tri.face_class(t, 0)]] += 1;
        row[var_of_class[tri.face_class(t, 1)]] -= 1;
        row[var_of_class[tri.face_class(t, 2)]] += 1;
        deltas.push_back(std::move(row));

        std::array<std::size_t, 4> tv;
        for (int f = 0; f < 4; ++f)
            tv[f] = static_cast<std::size_t>(var_of_class[tri.face_class(t, f)]);
        si.tet_vars.push_back(tv);
        si.kernels.push_back(tet_kernel(tri.tets()[t].sign, shape.angles[t], params));
    }
    si.n_deltas = deltas.size();

    Elimination el = eliminate_deltas(std::move(deltas), si.n_vars);
    si.free_vars = el.free_vars;
    si.expand = std::move(el.expand);
    si.dimension = static_cast<int>(si.free_vars.size());
    si.shifts.assign(si.dimension, 0.0);

    double eps = 0.05 / params.b;  // params.b >= 1, so this is 0.05 min(b, 1/b)
    choose_shifts(si, eps);
    return si;
}

QuadResult integrate_nd(const std::function<Cplx(const std::vector<double>&)>& f,
                        int dim, const QuadConfig& cfg) {
    auto prep = [&](double r) {
        if (cfg.prepare) cfg.prepare(r);
    };

    std::vector<std::vector<double>> dirs;
    for (int j = 0; j < dim; ++j) {
        std::vector<double> u(dim, 0.0);
        u[j] = 1.0;
        dirs.push_back(u);
        u[j] = -1.0;
        dirs.push_back(u);
    }
    for (int mask = 0; mask < (1 << dim); ++mask) {
        std::vector<double> u(dim);
        double nr = std::sqrt(static_cast<double>(dim));
        for (int j = 0; j < dim; ++j) u[j] = ((mask >> j) & 1 ? 1.0 : -1.0) / nr;
        dirs.push_back(u);
    }

    // magnitude at radius r along u, jittered against oscillation zeros
    auto mag = [&](const std::vector<double>& u, double r) {
        double m = 0;
        for (double j : {0.0, 0.137, 0.311}) {
            std::vector<double> y(dim);
            for (int k = 0; k < dim; ++k) y[k] = (r + j) * u[k];
            m = std::max(m, std::abs(f(y)));
        }
        return m;
    };

    prep(cfg.box0 * 2 + 1);
    double peak = std::abs(f(std::vector<double>(dim, 0.0)));
    for (const auto& u : dirs) peak = std::max(peak, mag(u, 0.5));
    if (!(peak > 0)) throw NoDecay("integrand vanishes at the probe points");

    // decay probe; magnitudes already at the truncation floor pass outright
    for (const auto& u : dirs) {
        double m2 = mag(u, 2 * cfg.box0);
        if (m2 <= cfg.boundary_rel * peak) continue;
        double m1 = mag(u, cfg.box0);
        if (!(m2 < m1 * std::exp(-cfg.min_decay * cfg.box0)))
            throw NoDecay("integrand does not decay along a shifted axis");
    }

    double box = cfg.box0;
    while (true) {
        prep(box + 1);
        double worst = 0;
        for (const auto& u : dirs) worst = std::max(worst, mag(u, box));
        if (std::getenv("TQFT_QUAD_TRACE"))
            std::fprintf(stderr, "[quad] grow box=%.2f worst/peak=%.2e\n", box,
                         worst / peak);
        if (worst <= cfg.boundary_rel * peak) break;
        box *= 1.35;
        if (box > cfg.box_max)
            throw ToleranceNotMet("truncation box limit reached before decay floor");
    }

    std::vector<double> freq(dim, 0.0);
    if (cfg.freq_fn) freq = cfg.freq_fn(box);
    else if (!cfg.freq.empty()) freq = cfg.freq;

    QuadResult res;
    res.box = box;
    prep(box + 1);
    double lpeak = std::log(peak);

    // sampled per axis frequency tables; phase gradients measured on the
    // integrand itself pick up the cancellations that analytic term by
    // term bounds miss
    int n_freq_grid = 0;
    double freq_du = 0;
    std::vector<std::vector<double>> ftab(dim);
    if (cfg.log_f && !cfg.local_freq) {
        n_freq_grid = 25;
        freq_du = 2.0 * box / (n_freq_grid - 1);
        std::mt19937 rng(12345);
        std::uniform_real_distribution<double> uni(-box, box);
        double floor_lg = lpeak + std::log(cfg.boundary_rel);
        double h = 1e-3;
        int n_samp = dim == 1 ? 1 : 24;
        for (int j = 0; j < dim; ++j) {
            ftab[j].assign(n_freq_grid, 1.0);
            for (int g = 0; g < n_freq_grid; ++g) {
                double u = -box + freq_du * g;
                double best = 1.0;
                for (int s = 0; s < n_samp; ++s) {
                    std::vector<double> y(dim, 0.0);
                    if (s > 0)
                        for (int k = 0; k < dim; ++k) y[k] = uni(rng);
                    y[j] = u;
                    Cplx l0 = cfg.log_f(y);
                    if (s > 0 && l0.real() < floor_lg) continue;
                    y[j] = u + h;
                    Cplx lp = cfg.log_f(y);
                    y[j] = u - h;
                    Cplx lm = cfg.log_f(y);
                    double d1 = std::abs((lp - l0).imag()) / h;
                    double d2 = std::abs((l0 - lm).imag()) / h;
                    // a log branch jump corrupts at most one of the two
                    // one sided differences
                    double fr = std::abs(d1 - d2) * h > 1.0 ? std::min(d1, d2)
                                                            : 0.5 * (d1 + d2);
                    best = std::max(best, fr);
                }
                ftab[j][g] = 1.35 * best;
            }
        }
    }

    auto run = [&](double scale) {
        std::vector<std::vector<double>> xs(dim), ws(dim);
        for (int j = 0; j < dim; ++j) {
            auto local = [&](double u) -> double {
                if (cfg.local_freq) return cfg.local_freq(j, u);
                if (!ftab[j].empty()) {
                    double s = (u + box) / freq_du;
                    int g = std::clamp(static_cast<int>(s), 0, n_freq_grid - 2);
                    double w1 = s - g;
                    return (1 - w1) * ftab[j][g] + w1 * ftab[j][g + 1];
                }
                return -1.0;
            };
            if (cfg.local_freq || !ftab[j].empty()) {
                // march across the axis with locally sized panels
                double u = -box;
                while (u < box) {
                    double fr = std::max(
                        {local(u), local(std::min(u + cfg.panel, box)), 1.0});
                    double w = std::min(cfg.panel, 1.2 * cfg.order / fr) * scale;
                    w = std::min(w, box - u);
                    append_gauss_panel(u, u + w, cfg.order, &xs[j], &ws[j]);
                    u += w;
                }
            } else {
                double w = cfg.panel * scale;
                if (freq[j] > 0) w = std::min(w, 1.2 * cfg.order / freq[j] * scale);
                composite_nodes(-box, box, w, cfg.order, &xs[j], &ws[j]);
            }
        }
        if (std::getenv("TQFT_QUAD_TRACE")) {
            std::fprintf(stderr, "[quad] box=%.2f scale=%.3f nodes:", box, scale);
            for (int j = 0; j < dim; ++j)
                std::fprintf(stderr, " %zu", xs[j].size());
            std::fprintf(stderr, "\n");
        }
        // rows whose ridge amplitude is negligible are skipped outright
        double skip_lg = lpeak + std::log(cfg.boundary_rel) - 4.6;
        std::vector<double> y(dim);
        std::function<Cplx(int, double)> rec = [&](int j, double wt) -> Cplx {
            Cplx total = 0;
            const auto& xj = xs[j];
            const auto& wj = ws[j];
            for (std::size_t i = 0; i < xj.size(); ++i) {
                y[j] = xj[i];
                double w = wt * wj[i];
                if (j + 1 == dim) {
                    total += w * f(y);
                    ++res.evals;
                } else {
                    if (cfg.log_f) {
                        for (int k = j + 1; k < dim; ++k) y[k] = 0.0;
                        ++res.evals;
                        if (cfg.log_f(y).real() < skip_lg) continue;
                    }
                    total += rec(j + 1, w);
                }
            }
            return total;
        };
        return rec(0, 1.0);
    };

    bool trace = std::getenv("TQFT_QUAD_TRACE") != nullptr;
    auto traced = [&](double sc) {
        auto t0 = std::chrono::steady_clock::now();
        std::size_t e0 = res.evals;
        Cplx v = run(sc);
        if (trace) {
            double dt = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
            std::fprintf(stderr,
                         "[quad] dim=%d box=%.2f scale=%.3f evals=%zu "
                         "%.1fs -> %.6g%+.6gi\n",
                         dim, box, sc, res.evals - e0, dt, v.real(), v.imag());
        }
        return v;
    };

    // panel refinement for the error estimate; gentler ratio in high
    // dimension where full doubling is too costly
    double ratio = dim >= 3 ? 0.75 : 0.5;
    double scale = 1.0;
    Cplx coarse = traced(scale);
    scale *= ratio;
    Cplx fine = traced(scale);
    double err = std::abs(fine - coarse);
    auto good = [&] {
        return err <= std::max(cfg.tol * std::abs(fine), cfg.tol_abs);
    };
    for (int round = 0; round < cfg.max_refine && !good(); ++round) {
        coarse = fine;
        scale *= ratio;
        fine = traced(scale);
        err = std::abs(fine - coarse);
    }
    if (!good() && !(err <= cfg.tol * 1e-300))
        throw ToleranceNotMet("quadrature failed to reach the requested tolerance");
    res.value = fine;
    res.error_estimate = err;
    return res;
}

QuadResult evaluate(const StateIntegral& si, QuadConfig cfg) {
    const PhiEvaluator& phi = *si.phi;
    int d = si.dimension;
    std::size_t nt = si.kernels.size();

    // dilog argument of tet t: sum_j c[t][j] (y_j + i sigma_j) -+ i(1-a1) cb
    std::vector<std::vector<double>> dcoef(nt, std::vector<double>(d));
    std::vector<double> dimag(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        double im = 0;
        for (int j = 0; j < d; ++j) {
            dcoef[t][j] = to_double(si.expand[si.tet_vars[t][3]][j]) -
                          to_double(si.expand[si.tet_vars[t][2]][j]);
            im += dcoef[t][j] * si.shifts[j];
        }
        dimag[t] = im - si.kernels[t].sign * (1.0 - si.kernels[t].alpha[0]) *
                            si.kernels[t].cb;
    }

    std::vector<std::unique_ptr<PhiLineCache>> caches(nt);
    double cached_r = 0;
    auto prepare = [&](double r) {
        if (r <= cached_r) return;
        for (std::size_t t = 0; t < nt; ++t) {
            double span = 0;
            for (int j = 0; j < d; ++j) span += std::abs(dcoef[t][j]) * r;
            caches[t] = std::make_unique<PhiLineCache>(phi, dimag[t], -span - 1,
                                                       span + 1);
        }
        cached_r = r;
    };

    std::vector<std::vector<double>> e0(nt, std::vector<double>(d));
    std::vector<Cplx> e0im(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        double im = 0;
        for (int j = 0; j < d; ++j) {
            e0[t][j] = to_double(si.expand[si.tet_vars[t][0]][j]);
            im += e0[t][j] * si.shifts[j];
        }
        e0im[t] = Cplx(0.0, im);
    }

    auto log_f = [&](const std::vector<double>& y) {
        Cplx lg = 0;
        for (std::size_t t = 0; t < nt; ++t) {
            const TetKernel& k = si.kernels[t];
            double du = 0, u0 = 0;
            for (int j = 0; j < d; ++j) {
                du += dcoef[t][j] * y[j];
                u0 += e0[t][j] * y[j];
            }
            Cplx xd(du, dimag[t] + k.sign * (1.0 - k.alpha[0]) * k.cb);
            Cplx x0 = u0 + e0im[t];
            if (k.sign > 0) {
                lg += 2.0 * kPi * kI * xd * (x0 - kI * k.alpha[2] * k.cb) +
                      kI * kPi * k.phi_T / (4.0 * k.hbar) - caches[t]->log_phi(du);
            } else {
                lg += -2.0 * kPi * kI * xd * (x0 + kI * k.alpha[2] * k.cb) -
                      kI * kPi * k.phi_T / (4.0 * k.hbar) + caches[t]->log_phi(du);
            }
        }
        return lg;
    };
    auto f = [&](const std::vector<double>& y) { return std::exp(log_f(y)); };

    cfg.prepare = prepare;
    cfg.log_f = log_f;
    if (!cfg.freq_fn) {
        cfg.freq_fn = [&](double box) { return si.freq_bounds(box); };
    }
    return integrate_nd(f, d, cfg);
}

Cplx nu(double a, double b, const QDilogParams& params) {
    double cb2 = -params.cb * params.cb;  // c_b^2, real negative
    double expo = 4.0 * kPi * a * (a + b) - kPi * (4.0 * (a - b) + 1.0) / 6.0;
    return std::exp(kI * cb2 * expo);
}

RateFit fit_volume_rate(const std::vector<std::pair<double, double>>& values) {
    std::size_t n = values.size();
    if (n < 5) throw IllConditionedFit("need at least 5 grid points");
    // columns: -1, h log h, h
    double ata[3][3] = {};
    double atb[3] = {};
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        double h = values[i].first;
        if (!(h > 0) || !(values[i].second > 0))
            throw IllConditionedFit("grid points must have positive hbar and |J|");
        double y = 2.0 * kPi * h * std::log(values[i].second);
        ys[i] = y;
        double row[3] = {-1.0, h * std::log(h), h};
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) ata[a][b] += row[a] * row[b];
            atb[a] += row[a] * y;
        }
    }
    // solve the 3x3 normal equations by Gaussian elimination
    double m[3][4];
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) m[a][b] = ata[a][b];
        m[a][3] = atb[a];
    }
    for (int c = 0; c < 3; ++c) {
        int p = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::abs(m[r][c]) > std::abs(m[p][c])) p = r;
        if (std::abs(m[p][c]) < 1e-14) throw IllConditionedFit("singular normal equations");
        std::swap(m[c], m[p]);
        for (int r = 0; r < 3; ++r) {
            if (r == c) continue;
            double fr = m[r][c] / m[c][c];
            for (int k = c; k < 4; ++k) m[r][k] -= fr * m[c][k];
        }
    }
    RateFit fit;
    fit.V = m[0][3] / m[0][0];
    fit.p = m[1][3] / m[1][1];
    fit.q = m[2][3] / m[2][2];
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double h = values[i].first;
        double pred = -fit.V + fit.p * h * std::log(h) + fit.q * h;
        fit.residuals.push_back(ys[i] - pred);
        ss += fit.residuals.back() * fit.residuals.back();
    }
    fit.rms = std::sqrt(ss / static_cast<double>(n));
    return fit;
}

}  // namespace tqft
