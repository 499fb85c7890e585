#include <algorithm>
#include <cmath>

#include "tqft/state.hpp"

namespace tqft {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr Cplx kI{0.0, 1.0};

QuadConfig chi_defaults() {
    QuadConfig cfg;
    cfg.tol = 1e-7;
    cfg.box0 = 8.0;
    cfg.box_max = 4000.0;
    cfg.boundary_rel = 1e-11;
    return cfg;
}

}  // namespace

Chi41::Chi41(const PhiEvaluator& phi, double eps)
    : config(chi_defaults()), phi_(phi) {
    // any contour R - i eps with 0 < eps < cb avoids the poles; sitting
    // well below the axis speeds up the tail decay e^{-2 pi eps |t|}
    eps_ = eps > 0 ? eps : 0.3 * phi.params().cb;
}

Cplx Chi41::operator()(double x) const {
    double cb = phi_.params().cb;
    QuadConfig cfg = config;
    cfg.prepare = [&](double r) {
        double need = r + std::abs(x) + 2;
        if (need <= span_) return;
        span_ = 1.2 * need;
        cache_ = std::make_unique<PhiLineCache>(phi_, eps_, -span_, span_);
    };
    cfg.local_freq = [&](int, double t) {
        return 2 * kPi * (std::abs(x - t) + std::abs(t) + 4 * cb) +
               4 * kPi * std::abs(x);
    };
    auto f = [&](const std::vector<double>& y) {
        double t = y[0];
        // y-contour R - i eps; log Phi(t - i eps) = -conj(log Phi(t + i eps))
        Cplx lg = cache_->log_phi(x - t) + std::conj(cache_->log_phi(t)) +
                  2.0 * kPi * kI * x * (2.0 * Cplx(t, -eps_) - x);
        return std::exp(lg);
    };
    return integrate_nd(f, 1, cfg).value;
}

Chi52::Chi52(const PhiEvaluator& phi, double im_x, double eps)
    : config(chi_defaults()), phi_(phi), im_x_(im_x) {
    double cb = phi.params().cb;
    eps_ = eps > 0 ? eps : std::min(0.3 * cb, 0.45 * (cb - std::abs(im_x)));
    if (!(eps_ > 0)) throw NonPositiveAngles("contour offset leaves the pole-free strip");
}

Cplx Chi52::core(double re_x) const {
    double cb = phi_.params().cb;
    Cplx x(re_x, im_x_);
    QuadConfig cfg = config;
    cfg.prepare = [&](double r) {
        double need = r + std::abs(re_x) + 2;
        if (need <= span_) return;
        span_ = 1.2 * need;
        cache_plus_ = std::make_shared<PhiLineCache>(phi_, im_x_ - eps_, -span_, span_);
        if (std::abs(im_x_) < 1e-15) {
            cache_minus_ = cache_plus_;
            cache_mid_ = cache_plus_;
        } else {
            cache_minus_ =
                std::make_shared<PhiLineCache>(phi_, -im_x_ - eps_, -span_, span_);
            cache_mid_ = std::make_shared<PhiLineCache>(phi_, -eps_, -span_, span_);
        }
    };
    cfg.local_freq = [&](int, double t) {
        return 2 * kPi * (std::abs(t + re_x) + std::abs(t - re_x) + 2 * std::abs(t) +
                          8 * cb);
    };
    auto f = [&](const std::vector<double>& y) {
        double t = y[0];
        Cplx z(t, -eps_);
        Cplx lg = kI * kPi * (z * z - x * x) - cache_plus_->log_phi(t + re_x) -
                  cache_minus_->log_phi(t - re_x) - cache_mid_->log_phi(t);
        return std::exp(lg);
    };
    return std::exp(-kI * kPi / 3.0) * integrate_nd(f, 1, cfg).value;
}

Cplx Chi52::operator()(double re_x, double lambda) const {
    // e^{4 pi i c_b x lambda} with c_b = i cb
    Cplx x(re_x, im_x_);
    return core(re_x) * std::exp(-4.0 * kPi * phi_.params().cb * lambda * x);
}

Cplx chi_41(double x, const QDilogParams& params) {
    PhiEvaluator phi(params);
    return Chi41(phi)(x);
}

Cplx chi_52(double x, double lambda, const QDilogParams& params) {
    PhiEvaluator phi(params);
    return Chi52(phi)(x, lambda);
}

double Five2Angles::lambda() const {
    return abc[0][0] - abc[0][2] + abc[1][1] - abc[2][0];
}

bool Five2Angles::balanced(double tol) const {
    return std::abs(2 * abc[2][0] - abc[0][0] - abc[1][2]) <= tol &&
           std::abs(abc[2][1] - abc[0][2] - abc[1][1]) <= tol;
}

Cplx z52_reduced(const Five2Angles& ang, const QDilogParams& params, QuadConfig cfg) {
    for (const auto& t : ang.abc) {
        if (!(t[0] > 0 && t[1] > 0 && t[2] > 0))
            throw NonPositiveAngles("5_2 angles must be positive");
        if (std::abs(t[0] + t[1] + t[2] - 0.5) > 1e-9)
            throw NonPositiveAngles("5_2 angle triples must sum to 1/2");
    }
    if (!ang.balanced(1e-9))
        throw NotBalanced("5_2 balance equations 2a3=a1+c2, b3=c1+b2 violated");

    double cb = params.cb;
    double lam = ang.lambda();
    double im_x = 2.0 * cb * (ang.abc[0][0] - ang.abc[2][0]);

    PhiEvaluator phi(params);
    Chi52 chi(phi, im_x);
    chi.config.tol = std::max(1e-8, 0.05 * cfg.tol);
    chi.config.boundary_rel = std::min(cfg.boundary_rel, 1e-10);
    chi.config.max_refine = std::max(cfg.max_refine, 4);
    // far out on the contour the inner integral is cancellation dominated;
    // an absolute floor tied to its central value keeps it convergent there
    chi.config.tol_abs = 1e-3 * cfg.tol * std::abs(chi.core(0.0));

    QuadConfig outer = cfg;
    // the inner floor bounds how deep the outer tail can be resolved
    outer.boundary_rel = std::max(cfg.boundary_rel, 2e-3 * cfg.tol);
    outer.local_freq = [&](int, double s) {
        return 2 * kPi * (3 * std::abs(s) + 8 * cb + 2 * std::abs(lam) * cb) * 1.3;
    };
    auto f = [&](const std::vector<double>& y) { return chi(y[0], lam); };
    QuadResult res = integrate_nd(f, 1, outer);

    // the sign of this exponent is fixed by matching the direct state
    // integral at generic balanced angles
    double cb2 = cb * cb;
    Cplx pref = nu(ang.abc[0][2], ang.abc[0][1], params) *
                nu(ang.abc[1][1], ang.abc[1][0], params) *
                nu(ang.abc[2][2], ang.abc[2][1], params) *
                std::exp(kI * kPi * cb2 * (1 - 2 * ang.abc[0][0]) *
                         (1 - 2 * ang.abc[1][2]));
    return pref * res.value;
}

}  // namespace tqft
