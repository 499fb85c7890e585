#include "tqft/wgz.hpp"

#include <cmath>

#include "tqft/errors.hpp"
#include "tqft/state.hpp"

namespace tqft {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr Cplx kI{0.0, 1.0};

}  // namespace

Cplx multiplier(int m, int n, double x, double y) {
    double sgn = (m * n) % 2 == 0 ? 1.0 : -1.0;
    return sgn * std::exp(kI * kPi * (n * x - m * y));
}

Cplx TorusSection::value(double x, double y) const {
    double mf = std::floor(x), nf = std::floor(y);
    int m = static_cast<int>(mf), n = static_cast<int>(nf);
    return multiplier(m, n, x - mf, y - nf) * base(x - mf, y - nf);
}

TorusSection wgz_forward(std::function<Cplx(double)> f, int M, bool conjugate,
                         double tail_tol) {
    double scale = std::max({std::abs(f(0.0)), std::abs(f(0.5)), std::abs(f(-0.5))});
    double tail = 0;
    for (int k = M + 1; k <= M + 3; ++k)
        tail += std::abs(f(static_cast<double>(k))) +
                std::abs(f(static_cast<double>(-k)));
    if (tail > tail_tol * std::max(scale, 1e-30))
        throw TruncationInsufficient("summation window does not cover the tail");

    TorusSection g;
    g.truncation = M;
    g.base = [f = std::move(f), M, conjugate](double x, double y) {
        double ye = conjugate ? -y : y;
        Cplx sum = 0;
        for (int m = -M; m <= M; ++m)
            sum += f(x + m) * std::exp(2.0 * kPi * kI * static_cast<double>(m) * ye);
        return std::exp(kI * kPi * x * ye) * sum;
    };
    return g;
}

Cplx wgz_inverse(const TorusSection& g, double x, int ny) {
    if (ny < 8 || ny % 2 != 0) throw GridTooCoarse("need an even grid of at least 8");
    auto trapezoid = [&](int n) {
        Cplx sum = 0;
        for (int k = 0; k < n; ++k) {
            double y = static_cast<double>(k) / n;
            sum += g.value(x, y) * std::exp(-kI * kPi * x * y);
        }
        return sum / static_cast<double>(n);
    };
    Cplx fine = trapezoid(ny);
    Cplx coarse = trapezoid(ny / 2);
    if (std::abs(fine - coarse) > 1e-8 * std::max(1.0, std::abs(fine)))
        throw GridTooCoarse("trapezoid doubling check failed");
    return fine;
}

double multiplier_check(const TorusSection& g, int m, int n, int samples) {
    int k = 1;
    while (k * k < samples) ++k;
    double worst = 0;
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            double x = (i + 0.5) / k, y = (j + 0.5) / k;
            Cplx lhs = g.value(x + m, y + n);
            Cplx rhs = multiplier(m, n, x, y) * g.value(x, y);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return worst;
}

PsiFamily::PsiFamily(const PsiParams& p) : p_(p), phi_(p.q) {
    if (!(p.a > 0 && p.c > 0 && p.a + p.c < 0.5))
        throw BadPsiParams("need a > 0, c > 0, a + c < 1/2");
}

Cplx PsiFamily::log_psi(Cplx t) const {
    double cb = p_.q.cb, a = p_.a, c = p_.c;
    Cplx lg = -phi_.log_phi(t - 2.0 * kI * cb * (a + c));
    lg += 4.0 * kPi * cb * a * t - 4.0 * kPi * kI * cb * cb * a * (a + c);
    lg += kI * kPi * cb * cb * (4.0 * (a - c) + 1.0) / 6.0;
    return lg;
}

Cplx PsiFamily::psi(double t) const { return std::exp(log_psi(t)); }

Cplx PsiFamily::psi_tilde(double s) const {
    // downward shifts are capped by the nearest Phi zero, upward shifts by
    // the point where the right tail of psi stops decaying (rate 2 pi (2 cb c - y))
    double cb = p_.q.cb;
    double dn = std::min(0.3 * cb, 0.6 * cb * (1.0 - 2.0 * (p_.a + p_.c)));
    double up = std::min(0.3 * cb, cb * p_.c);
    double shift = s == 0.0 ? 0.0 : (s > 0 ? -dn : up);
    return psi_tilde(s, shift);
}

Cplx PsiFamily::psi_tilde(double s, double shift) const {
    double cb = p_.q.cb, a = p_.a, c = p_.c;
    long long key = llround(shift * 1e9);
    auto it = caches_.find(key);
    if (it == caches_.end()) {
        double span = 60.0 / std::min(a, c);  // beyond any truncation box
        it = caches_
                 .emplace(key, std::make_shared<PhiLineCache>(
                                   phi_, shift - 2.0 * cb * (a + c), -span, span))
                 .first;
    }
    auto cache = it->second;

    auto lg = [&, cache](double u) {
        Cplx t(u, shift);
        Cplx v = -cache->log_phi(u);
        v += 4.0 * kPi * cb * a * t - 4.0 * kPi * kI * cb * cb * a * (a + c);
        v += kI * kPi * cb * cb * (4.0 * (a - c) + 1.0) / 6.0;
        return v - 2.0 * kPi * kI * s * t;
    };
    QuadConfig cfg;
    cfg.tol = 1e-10;
    cfg.tol_abs = 1e-12;  // large |s| values are cancellation dominated
    cfg.boundary_rel = 1e-13;
    cfg.box0 = 6;
    cfg.box_max = 400;
    cfg.max_refine = 4;
    cfg.local_freq = [&](int, double u) {
        return 2.0 * kPi * (std::abs(s) + std::abs(u) + 2.0 * cb + 1.0);
    };
    auto f = [&](const std::vector<double>& y) { return std::exp(lg(y[0])); };
    return integrate_nd(f, 1, cfg).value;
}

Cplx PsiFamily::psi_tilde_prime(double s) const {
    return std::exp(-kI * kPi * s * s) * psi_tilde(s);
}

TorusSection g_section(const PsiParams& p, int M) {
    auto fam = std::make_shared<PsiFamily>(p);
    // the Fourier quadrature leaves an absolute noise floor around 1e-12,
    // so the tail test cannot resolve below that
    return wgz_forward([fam](double x) { return fam->psi_tilde_prime(x); }, M,
                       false, 1e-10);
}

}  // namespace tqft
