// End-to-end acceptance checks.  Each criterion prints a single PASS/FAIL
// line; the exit status is the number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <complex>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "tqft/angles.hpp"
#include "tqft/errors.hpp"
#include "tqft/mesh.hpp"
#include "tqft/pachner.hpp"
#include "tqft/qdilog.hpp"
#include "tqft/simplex_lp.hpp"
#include "tqft/state.hpp"
#include "tqft/wgz.hpp"

using namespace tqft;

namespace {

constexpr double kPi = 3.14159265358979323846;

int failures = 0;

void report(int idx, const char* what, bool ok, const std::string& detail) {
    std::printf("criterion %d (%s): %s  %s\n", idx, what, ok ? "PASS" : "FAIL",
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
    char buf[256];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

Triangulation fig8() {
    return build_triangulation(
        {1, -1}, {{{0, 0}, {1, 2}}, {{0, 1}, {1, 3}}, {{0, 2}, {1, 0}}, {{0, 3}, {1, 1}}});
}

Triangulation trefoil() {
    return build_triangulation(
        {1, -1}, {{{0, 0}, {1, 3}}, {{0, 1}, {1, 2}}, {{0, 2}, {1, 1}}, {{0, 3}, {1, 0}}});
}

Triangulation five2() {
    return build_triangulation({1, 1, 1},
                               {{{0, 0}, {2, 3}},
                                {{0, 1}, {2, 2}},
                                {{0, 2}, {1, 3}},
                                {{0, 3}, {1, 0}},
                                {{1, 1}, {2, 0}},
                                {{1, 2}, {2, 1}}});
}

Triangulation bipyramid() {
    return build_triangulation({1, 1, -1},
                               {{{0, 2}, {1, 3}}, {{1, 2}, {2, 2}}, {{2, 3}, {0, 3}}});
}

ShapeAssignment regular_fig8_shape() {
    ShapeAssignment s;
    s.angles = {{1.0 / 3, 1.0 / 3, 1.0 / 3}, {1.0 / 3, 1.0 / 3, 1.0 / 3}};
    return s;
}

void criterion_1() {
    auto t0 = std::chrono::steady_clock::now();
    double worst_fe = 0, worst_uni = 0, worst_sym = 0;
    for (double b : {1.0, 1.2}) {
        PhiEvaluator phi(QDilogParams::from_b(b));
        double h = phi.params().h;
        for (double step : {b, 1.0 / b}) {
            for (double re = -2.0; re <= 2.0; re += 0.5) {
                for (double im = -0.4 * h; im <= 0.4 * h; im += 0.1 * h) {
                    Cplx z(re, im);
                    Cplx lhs = phi(z - Cplx(0, step / 2));
                    Cplx rhs = (1.0 + std::exp(2.0 * kPi * step * z)) *
                               phi(z + Cplx(0, step / 2));
                    worst_fe = std::max(worst_fe, std::abs(lhs - rhs) / std::abs(lhs));
                }
            }
        }
        for (double x = -5.0; x <= 5.0; x += 0.25)
            worst_uni = std::max(worst_uni, std::abs(std::abs(phi(Cplx(x, 0))) - 1.0));
    }
    {
        PhiEvaluator p1(QDilogParams::from_b(1.3));
        PhiEvaluator p2(QDilogParams::from_b(1.0 / 1.3));
        for (double re = -2.0; re <= 2.0; re += 0.7)
            for (double im = -0.8; im <= 0.8; im += 0.4) {
                Cplx z(re, im);
                worst_sym =
                    std::max(worst_sym, std::abs(p1(z) - p2(z)) / std::abs(p1(z)));
            }
    }
    double dt = seconds_since(t0);
    bool ok = worst_fe <= 1e-10 && worst_uni <= 1e-10 && worst_sym <= 1e-11 && dt < 10;
    report(1, "quantum dilogarithm", ok,
           fmt("feq=%.2e uni=%.2e sym=%.2e (%.1fs)", worst_fe, worst_uni, worst_sym, dt));
}

void criterion_2() {
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        auto params = QDilogParams::from_hbar(0.25);
        PhiEvaluator phi(params);
        Five2Angles ang;
        ang.abc = {{{0.2, 0.15, 0.15}, {0.2, 0.1, 0.2}, {0.2, 0.25, 0.05}}};
        Cplx zr = z52_reduced(ang, params);

        auto tri = five2();
        ShapeAssignment sh;
        sh.angles = {{0.4, 0.3, 0.3}, {0.4, 0.2, 0.4}, {0.4, 0.5, 0.1}};
        auto si = assemble(tri, sh, phi);
        QuadConfig cfg;
        cfg.tol = 2e-4;
        cfg.tol_abs = 2e-5;
        cfg.boundary_rel = 3e-8;
        auto r = evaluate(si, cfg);
        double rel = std::abs(r.value - zr) / std::abs(zr);
        ok = rel <= 1e-3 && seconds_since(t0) <= 600;
        detail = fmt("rel=%.2e dim=%d evals=%zu (%.0fs)", rel, si.dimension, r.evals,
                     seconds_since(t0));
    } catch (const Error& e) {
        detail = std::string("error: ") + e.what();
    }
    report(2, "5_2 direct vs reduced", ok, detail);
}

void criterion_3() {
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        std::vector<double> grid = {0.15, 0.12, 0.10, 0.08, 0.06, 0.05, 0.04, 0.03};
        std::vector<std::pair<double, double>> v41, v52;
        for (double h : grid) {
            auto p = QDilogParams::from_hbar(h);
            PhiEvaluator phi(p);
            Chi41 c41(phi);
            v41.emplace_back(h, std::abs(c41(0.0)));
            Chi52 c52(phi);
            v52.emplace_back(h, std::abs(c52.core(0.0)));
        }
        auto f41 = fit_volume_rate(v41);
        auto f52 = fit_volume_rate(v52);
        double d41 = std::abs(f41.V - 2.0298832) / 2.0298832;
        double d52 = std::abs(f52.V - 2.8281221) / 2.8281221;
        double dt = seconds_since(t0);
        ok = d41 <= 0.02 && d52 <= 0.02 && dt <= 900;
        detail = fmt("V41=%.5f (dev %.2f%%) V52=%.5f (dev %.2f%%) (%.0fs)", f41.V,
                     100 * d41, f52.V, 100 * d52, dt);
    } catch (const Error& e) {
        detail = std::string("error: ") + e.what();
    }
    report(3, "volume rate fits", ok, detail);
}

void criterion_4() {
    std::string detail;
    bool ok = false;
    try {
        // 1000 random positive balanced sites with dyadic angles
        std::mt19937 rng(20240817);
        auto t = bipyramid();
        int done = 0;
        bool exact = true;
        while (done < 1000) {
            ShapeAssignment s;
            int a1 = 1 + int(rng() % 1022);
            int hi = 2047 - a1 - 1 > 1023 ? 1023 : 2047 - a1 - 1;
            int a2 = 1 + int(rng() % hi);
            int a3 = 2048 - a1 - a2;
            if (a3 <= 0 || a3 >= 1024) continue;
            std::array<int, 3> alpha = {a1, a2, a3};
            s.angles.resize(3);
            bool valid = true;
            for (int i = 0; i < 3 && valid; ++i) {
                int rest = 1024 - alpha[i];
                if (rest < 2) {
                    valid = false;
                    break;
                }
                int b = 1 + int(rng() % (rest - 1));
                s.angles[i] = {alpha[i] / 1024.0, b / 1024.0, (rest - b) / 1024.0};
            }
            if (!valid) continue;
            auto sites = find_32_sites(t, s);
            if (sites.size() != 1) {
                exact = false;
                break;
            }
            auto res = apply_32(t, s, sites[0]);
            for (const auto& a : res.shape.angles) {
                if (!(a[0] > 0 && a[1] > 0 && a[2] > 0) || a[0] + a[1] + a[2] != 1.0)
                    exact = false;
            }
            auto w0 = edge_weights(t, s);
            auto w1 = edge_weights(res.tri, res.shape);
            for (size_t e = 0; e < res.edge_map.size(); ++e) {
                if (res.edge_map[e] < 0) continue;
                if (w1.weights[res.edge_map[e]] != w0.weights[e]) exact = false;
            }
            if (!exact) break;
            ++done;
        }

        // round trip 2-3 then 3-2 stays on the weight fiber
        bool round_ok = true;
        {
            ShapeAssignment s;
            s.angles = {{2.0 / 3, 1.0 / 6, 1.0 / 6},
                        {2.0 / 3, 1.0 / 6, 1.0 / 6},
                        {2.0 / 3, 1.0 / 6, 1.0 / 6}};
            auto down = apply_32(t, s, find_32_sites(t, s)[0]);
            int ta = down.new_tets[0], fa = -1;
            for (int f = 0; f < 4; ++f) {
                auto p = down.tri.partner(ta, f);
                if (p && p->tet == down.new_tets[1]) fa = f;
            }
            auto up = apply_23(down.tri, down.shape, ta, fa);
            auto w = edge_weights(up.tri, up.shape);
            if (std::abs(w.weights[up.added_edge_classes[0]] - 2.0) > 1e-12)
                round_ok = false;
            auto w0 = edge_weights(down.tri, down.shape);
            for (size_t e = 0; e < up.edge_map.size(); ++e) {
                if (up.edge_map[e] < 0) continue;
                if (w.weights[up.edge_map[e]] != w0.weights[e]) round_ok = false;
            }
        }

        // |Z| is unchanged by one 2-3 move on the figure-eight complex
        auto params = QDilogParams::from_hbar(0.25);
        PhiEvaluator phi(params);
        auto t41 = fig8();
        auto s41 = regular_fig8_shape();
        QuadConfig cfg;
        cfg.tol = 2e-4;
        cfg.tol_abs = 2e-5;
        cfg.boundary_rel = 3e-8;
        auto z2 = evaluate(assemble(t41, s41, phi), cfg);
        auto up = apply_23(t41, s41, 0, 0);
        auto z3 = evaluate(assemble(up.tri, up.shape, phi), cfg);
        double rel = std::abs(std::abs(z3.value) - std::abs(z2.value)) /
                     std::abs(z2.value);
        ok = exact && round_ok && rel <= 1e-3;
        detail = fmt("sites=%d exact=%d round=%d |Z| rel=%.2e", done, int(exact),
                     int(round_ok), rel);
    } catch (const Error& e) {
        detail = std::string("error: ") + e.what();
    }
    report(4, "Pachner moves", ok, detail);
}

void criterion_5() {
    bool ok = true;
    std::string detail;
    try {
        for (auto* mk : {&trefoil, &fig8, &five2}) {
            auto t = (*mk)();
            auto hom = homology_h2_truncated(t);
            if (hom.h2_rank != 0 || !hom.h2_torsion.empty()) ok = false;
            for (const auto& l : vertex_links(t).links)
                if (!l.is_torus) ok = false;
        }
        auto b41 = balanced_space(fig8());
        auto b52 = balanced_space(five2());
        if (b41.dimension != 3 || b52.dimension != 4) ok = false;
        // two tetrahedra glued face i to face i: four sphere links, H2 != 0
        auto bad = build_triangulation(
            {1, -1}, {{{0, 0}, {1, 0}}, {{0, 1}, {1, 1}}, {{0, 2}, {1, 2}}, {{0, 3}, {1, 3}}});
        auto hom = homology_h2_truncated(bad);
        if (hom.admissible_topology) ok = false;
        bool rejected = false;
        try {
            PhiEvaluator phi(QDilogParams::from_hbar(0.25));
            ShapeAssignment s;
            s.angles = {{1.0 / 3, 1.0 / 3, 1.0 / 3}, {1.0 / 3, 1.0 / 3, 1.0 / 3}};
            assemble(bad, s, phi);
        } catch (const NotAdmissible&) {
            rejected = true;
        }
        if (!rejected) ok = false;
        detail = fmt("dims=(%d,%d) bad h2 rank=%d rejected=%d", b41.dimension,
                     b52.dimension, hom.h2_rank, int(rejected));
    } catch (const Error& e) {
        ok = false;
        detail = std::string("error: ") + e.what();
    }
    report(5, "topology gates", ok, detail);
}

void criterion_6() {
    bool ok = false;
    std::string detail;
    try {
        auto tri = five2();
        auto coeffs = edge_weight_coeffs(tri);
        std::vector<std::vector<Rat>> rows;
        auto push = [&](const std::vector<int>& c, int rhs) {
            std::vector<Rat> r(10);
            for (int j = 0; j < 9; ++j) r[j] = c[j];
            r[9] = -rhs;
            rows.push_back(r);
        };
        for (const auto& c : coeffs) push(c, 2);
        for (int t = 0; t < 3; ++t) {
            std::vector<int> c(9, 0);
            c[3 * t] = c[3 * t + 1] = c[3 * t + 2] = 1;
            push(c, 1);
        }
        int base = rational_rank(rows);
        std::vector<Rat> eq1(10), eq2(10);
        eq1[6] = 2;
        eq1[0] = -1;
        eq1[5] = -1;  // 2 a3 = a1 + c2
        eq2[7] = 1;
        eq2[2] = -1;
        eq2[4] = -1;  // b3 = c1 + b2
        auto w1 = rows;
        w1.push_back(eq1);
        auto w2 = rows;
        w2.push_back(eq2);
        bool implied = rational_rank(w1) == base && rational_rank(w2) == base;

        std::vector<std::vector<Rat>> small = {eq1, eq2};
        for (int t = 0; t < 3; ++t) {
            std::vector<Rat> r(10);
            r[3 * t] = r[3 * t + 1] = r[3 * t + 2] = 1;
            r[9] = -1;
            small.push_back(r);
        }
        int small_rank = rational_rank(small);
        bool converse = true;
        for (const auto& c : coeffs) {
            auto ext = small;
            std::vector<Rat> r(10);
            for (int j = 0; j < 9; ++j) r[j] = c[j];
            r[9] = -2;
            ext.push_back(r);
            if (rational_rank(ext) != small_rank) converse = false;
        }
        ok = implied && converse;
        detail = fmt("implied=%d converse=%d", int(implied), int(converse));
    } catch (const Error& e) {
        detail = std::string("error: ") + e.what();
    }
    report(6, "5_2 balance equations", ok, detail);
}

void criterion_7() {
    bool ok = false;
    std::string detail;
    try {
        auto gauss = [](double t) { return std::exp(Cplx(-kPi * t * t, 0.4 * t)); };
        auto g = wgz_forward(gauss, 12);
        double rt = 0;
        for (double x : {-1.3, 0.0, 0.7})
            rt = std::max(rt, std::abs(wgz_inverse(g, x) - gauss(x)));
        double mult = std::max(multiplier_check(g, 1, 0), multiplier_check(g, 0, 1));
        mult = std::max(mult, multiplier_check(g, 2, -1));

        PsiParams p;
        p.a = 0.125;
        p.c = 0.125;
        p.q = QDilogParams::from_hbar(0.25);
        auto g16 = g_section(p, 16);
        auto g24 = g_section(p, 24);
        double trunc = 0;
        for (double x : {0.15, 0.6})
            for (double y : {0.3, 0.85})
                trunc = std::max(trunc, std::abs(g16(x, y) - g24(x, y)));
        ok = rt <= 1e-10 && mult <= 1e-10 && trunc <= 1e-8;
        detail = fmt("roundtrip=%.2e multiplier=%.2e trunc=%.2e", rt, mult, trunc);
    } catch (const Error& e) {
        detail = std::string("error: ") + e.what();
    }
    report(7, "WGZ transform", ok, detail);
}

void criterion_8() {
    bool ok = false;
    std::string detail;
    try {
        auto r41 = maximize_volume(fig8());
        auto r52 = maximize_volume(five2());
        double kkt = std::max(r41.kkt_residual, r52.kkt_residual);
        double reg = 0;
        for (const auto& a : r41.shape.angles)
            for (double v : a) reg = std::max(reg, std::abs(v - 1.0 / 3));

        // central finite differences of the objective against the known
        // gradient -log|2 sin(pi alpha)| along a balanced direction
        auto bs = balanced_space(fig8());
        std::vector<double> dir(6);
        for (int j = 0; j < 6; ++j) dir[j] = to_double(bs.basis[0][j]);
        auto vol = [&](double s) {
            double v = 0;
            for (int t = 0; t < 2; ++t)
                for (int j = 0; j < 3; ++j)
                    v += lobachevsky(kPi * (r41.shape.angles[t][j] + s * dir[3 * t + j]));
            return v;
        };
        double h = 1e-5;
        double fd = (vol(h) - vol(-h)) / (2 * h);
        double an = 0;
        for (int t = 0; t < 2; ++t)
            for (int j = 0; j < 3; ++j)
                an += kPi * dir[3 * t + j] *
                      lobachevsky_deriv(kPi * r41.shape.angles[t][j]);
        double gdiff = std::abs(fd - an) / (1.0 + std::abs(an));
        ok = kkt <= 1e-8 && gdiff <= 1e-6 && reg <= 1e-8;
        detail = fmt("kkt=%.2e grad=%.2e regular=%.2e V41=%.7f V52=%.7f", kkt, gdiff,
                     reg, r41.volume, r52.volume);
    } catch (const Error& e) {
        detail = std::string("error: ") + e.what();
    }
    report(8, "volume optimizer", ok, detail);
}

}  // namespace

int main() {
    std::setbuf(stdout, nullptr);
    criterion_1();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_4();
    criterion_2();
    criterion_3();
    std::printf("%s\n", failures == 0 ? "all criteria passed" : "FAILURES present");
    return failures;
}
