#pragma once

#include <functional>
#include <map>
#include <memory>

#include "tqft/qdilog.hpp"

namespace tqft {

// multiplier of the line bundle L over the 2-torus:
// value(x+m, y+n) = multiplier(m, n, x, y) * value(x, y)
Cplx multiplier(int m, int n, double x, double y);

// smooth section of L represented by its restriction to the fundamental
// domain [0,1)^2 and extended everywhere through the multiplier
struct TorusSection {
    std::function<Cplx(double, double)> base;
    int truncation = 20;

    Cplx value(double x, double y) const;
    Cplx operator()(double x, double y) const { return value(x, y); }
};

// Wf(x,y) = e^{pi i xy} sum_{|m|<=M} f(x+m) e^{2 pi i m y}; with `conjugate`
// the dual-variant section Wf(x,-y) is produced instead
TorusSection wgz_forward(std::function<Cplx(double)> f, int M = 20,
                         bool conjugate = false, double tail_tol = 1e-14);

// (W^{-1} g)(x) = int_0^1 g(x,y) e^{-pi i xy} dy by the trapezoid rule,
// spectrally accurate for smooth sections
Cplx wgz_inverse(const TorusSection& g, double x, int ny = 256);

// max over a deterministic sample grid of
// |g(x+m, y+n) - multiplier(m,n,x,y) g(x,y)|
double multiplier_check(const TorusSection& g, int m, int n, int samples = 64);

struct PsiParams {
    double a = 0.125;
    double c = 0.125;
    QDilogParams q;
};

// the psi_{a,c} family and its Fourier data feeding the g_{a,c} sections
class PsiFamily {
  public:
    explicit PsiFamily(const PsiParams& p);

    Cplx psi(double t) const;
    Cplx psi_tilde(double s) const;                // automatic contour shift
    Cplx psi_tilde(double s, double shift) const;  // explicit Im t of the contour
    Cplx psi_tilde_prime(double s) const;

    const PsiParams& params() const { return p_; }

  private:
    Cplx log_psi(Cplx t) const;

    PsiParams p_;
    PhiEvaluator phi_;
    mutable std::map<long long, std::shared_ptr<PhiLineCache>> caches_;
};

// g_{a,c} = W(psi'~_{a,c})
TorusSection g_section(const PsiParams& p, int M = 20);

}  // namespace tqft
