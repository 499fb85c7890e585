#include "tqft/qdilog.hpp"

#include <algorithm>
#include <cmath>

#include "tqft/quadrature.hpp"

namespace tqft {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr Cplx kI{0.0, 1.0};

// log(1 + e^u) without overflow; throws when the argument sits on top of
// a zero of 1 + e^u (a pole or zero of Phi).
Cplx log1p_exp(Cplx u) {
    Cplx base = 0;
    if (u.real() > 0) {
        base = u;
        u = -u;
    }
    Cplx d = 1.0 + std::exp(u);
    if (std::abs(d) < 1e-8) throw PoleProximity("argument too close to a pole or zero of Phi_b");
    return base + std::log(d);
}

}  // namespace

QDilogParams QDilogParams::from_b(double b) {
    if (!(b > 0) || !std::isfinite(b)) throw NonPositiveB("b must be a positive real number");
    QDilogParams p;
    p.b = std::max(b, 1.0 / b);
    double q = b + 1.0 / b;
    p.hbar = 1.0 / (q * q);
    p.cb = 0.5 * q;
    p.h = p.cb;
    return p;
}

QDilogParams QDilogParams::from_hbar(double hbar) {
    if (!(hbar > 0) || !(hbar <= 0.25)) throw NonPositiveB("hbar must lie in (0, 1/4]");
    double q = 1.0 / std::sqrt(hbar);
    double b = 0.5 * (q + std::sqrt(q * q - 4.0));
    return from_b(b);
}

PhiEvaluator::PhiEvaluator(const QDilogParams& params) : params_(params) {
    double b = params_.b;  // >= 1
    step_ = 1.0 / b;
    inv_const_ = kI * kPi * (b * b + 1.0 / (b * b)) / 12.0;

    // Integrand decays like e^{-b|w|} for z in the strip; the semicircle
    // radius stays below the nearest denominator zero at |w| = pi/b.
    double r = std::min(0.5, 1.5 / b);
    double tail = 42.0 / b;
    auto denom = [b](Cplx w) { return 4.0 * std::sinh(w * b) * std::sinh(w / b) * w; };

    // real segments, panel width chosen so the e^{-2izw} oscillation is
    // resolved for |Re z| up to ~40
    std::vector<double> xs;
    std::vector<double> ws;
    composite_nodes(r, tail, 0.2, 16, &xs, &ws);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        nodes_.push_back(Cplx(xs[i], 0.0));
        nodes_.push_back(Cplx(-xs[i], 0.0));
        coef_.push_back(ws[i] / denom(Cplx(xs[i], 0.0)));
        coef_.push_back(ws[i] / denom(Cplx(-xs[i], 0.0)));
    }

    // upper semicircle from pi to 0, w = r e^{i theta}, dw = i w dtheta
    xs.clear();
    ws.clear();
    composite_nodes(0.0, kPi, kPi / 12.0, 12, &xs, &ws);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        Cplx w = r * std::exp(kI * xs[i]);
        nodes_.push_back(w);
        coef_.push_back(-ws[i] * kI * w / denom(w));
    }
}

Cplx PhiEvaluator::log_phi_strip(Cplx z) const {
    Cplx acc = 0;
    for (std::size_t j = 0; j < nodes_.size(); ++j)
        acc += coef_[j] * std::exp(-2.0 * kI * z * nodes_[j]);
    return acc;
}

PhiEvaluator::Reduction PhiEvaluator::reduce(Cplx z) const {
    Reduction r;
    r.extra = 0;
    double half = 0.5 * step_ + 1e-12;
    Cplx is(0.0, step_);
    while (z.imag() > half) {
        z -= is;
        r.extra -= log1p_exp(2.0 * kPi * step_ * (z + 0.5 * is));
    }
    while (z.imag() < -half) {
        z += is;
        r.extra += log1p_exp(2.0 * kPi * step_ * (z - 0.5 * is));
    }
    if (z.real() > 0) {
        // Phi(z) Phi(-z) = exp(i pi z^2 + i pi (b^2 + b^-2)/12)
        r.extra += kI * kPi * z * z + inv_const_;
        r.sign = -1;
        z = -z;
    }
    r.z_reduced = z;
    return r;
}

Cplx PhiEvaluator::log_phi(Cplx z) const {
    Reduction r = reduce(z);
    return r.extra + r.sign * log_phi_strip(r.z_reduced);
}

Cplx PhiEvaluator::operator()(Cplx z) const { return std::exp(log_phi(z)); }

PhiLineCache::PhiLineCache(const PhiEvaluator& phi, double im_offset, double x_lo, double x_hi)
    : phi_(phi), im_offset_(im_offset) {
    PhiEvaluator::Reduction sample = phi_.reduce(Cplx(std::min(x_lo, -1.0), im_offset));
    grid_im_ = std::abs(sample.z_reduced.imag());

    double span = std::max(std::abs(x_lo), std::abs(x_hi)) + 1.0;
    dx_ = 2e-3;
    std::size_t n = static_cast<std::size_t>(std::ceil(span / dx_)) + 4;
    u_min_ = -dx_ * static_cast<double>(n - 1);
    values_.assign(n, 0.0);

    // fill by recurrence: one complex multiply per node per grid point
    const auto& nodes = phi_.nodes_;
    const auto& coef = phi_.coef_;
    std::size_t m = nodes.size();
    std::vector<Cplx> cur(m), ratio(m);
    Cplx z0(0.0, grid_im_);
    for (std::size_t j = 0; j < m; ++j) {
        cur[j] = coef[j] * std::exp(-2.0 * kI * z0 * nodes[j]);
        ratio[j] = std::exp(2.0 * kI * dx_ * nodes[j]);
    }
    for (std::size_t k = 0; k < n; ++k) {
        Cplx acc = 0;
        for (std::size_t j = 0; j < m; ++j) acc += cur[j];
        values_[n - 1 - k] = acc;  // u = -k*dx_
        for (std::size_t j = 0; j < m; ++j) cur[j] *= ratio[j];
    }

    // resolve the divisor factors once per grid point along the actual line,
    // then unwrap 2 pi jumps so the lookup is a plain cubic interpolation
    // (exp of the result is unaffected by the unwrapping)
    x_min_ = x_lo - 2.0 * dx_;
    std::size_t nl = static_cast<std::size_t>(std::ceil((x_hi - x_min_) / dx_)) + 4;
    line_.resize(nl);
    for (std::size_t k = 0; k < nl; ++k)
        line_[k] = eval_reduced(x_min_ + dx_ * static_cast<double>(k));
    for (std::size_t k = 1; k < nl; ++k) {
        Cplx pred = k >= 2 ? 2.0 * line_[k - 1] - line_[k - 2] : line_[k - 1];
        double adj = std::round((pred.imag() - line_[k].imag()) / (2.0 * kPi));
        line_[k] += Cplx(0.0, 2.0 * kPi * adj);
    }
}

Cplx PhiLineCache::log_phi(double x) const {
    double t = (x - x_min_) / dx_;
    std::ptrdiff_t i0 = static_cast<std::ptrdiff_t>(std::floor(t)) - 1;
    if (i0 < 0 || i0 + 3 >= static_cast<std::ptrdiff_t>(line_.size())) return eval_reduced(x);
    double s = t - static_cast<double>(i0);
    double c0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
    double c1 = s * (s - 2.0) * (s - 3.0) / 2.0;
    double c2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
    double c3 = s * (s - 1.0) * (s - 2.0) / 6.0;
    return c0 * line_[i0] + c1 * line_[i0 + 1] + c2 * line_[i0 + 2] + c3 * line_[i0 + 3];
}

Cplx PhiLineCache::eval_reduced(double x) const {
    PhiEvaluator::Reduction r = phi_.reduce(Cplx(x, im_offset_));
    double u = r.z_reduced.real();
    double t = (u - u_min_) / dx_;
    std::ptrdiff_t i0 = static_cast<std::ptrdiff_t>(std::floor(t)) - 1;
    Cplx strip;
    if (i0 < 0 || i0 + 3 >= static_cast<std::ptrdiff_t>(values_.size())) {
        strip = phi_.log_phi_strip(r.z_reduced);
    } else {
        double s = t - static_cast<double>(i0);
        double c0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
        double c1 = s * (s - 2.0) * (s - 3.0) / 2.0;
        double c2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
        double c3 = s * (s - 1.0) * (s - 2.0) / 6.0;
        strip = c0 * values_[i0] + c1 * values_[i0 + 1] + c2 * values_[i0 + 2] +
                c3 * values_[i0 + 3];
        if (r.z_reduced.imag() < -1e-15) strip = -std::conj(strip);
    }
    return r.extra + r.sign * strip;
}

}  // namespace tqft
