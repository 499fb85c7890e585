#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "tqft/errors.hpp"

namespace tqft {

using Cplx = std::complex<double>;

// Coupling constants of the theory.  b enters only through
// hbar = (b + 1/b)^-2; c_b = i/(2 sqrt(hbar)) is purely imaginary and
// cb below stores its (positive) imaginary part.
struct QDilogParams {
    double b = 1.0;     // normalized to >= 1 (b <-> 1/b symmetry)
    double hbar = 0.25;
    double cb = 1.0;    // Im c_b = (b + 1/b)/2
    double h = 1.0;     // pole-free strip half-width, equals cb

    static QDilogParams from_b(double b);
    static QDilogParams from_hbar(double hbar);
};

// Faddeev's quantum dilogarithm Phi_b(z), evaluated from the contour
// integral
//   log Phi_b(z) = int_C exp(-2 i z w) / (4 sinh(w b) sinh(w/b) w) dw
// (C = real axis with an upper semicircle around 0) inside a safe strip,
// and extended to the plane by the shift functional equations.
class PhiEvaluator {
  public:
    explicit PhiEvaluator(const QDilogParams& params);

    const QDilogParams& params() const { return params_; }

    Cplx operator()(Cplx z) const;
    Cplx log_phi(Cplx z) const;

    // log Phi on the safe strip |Im z| <= strip_im(); the pure quadrature
    // path with no functional-equation factors.
    Cplx log_phi_strip(Cplx z) const;
    double strip_im() const { return 0.5 * step_ + 1e-12; }

    // Decomposition log Phi(z) = extra + sign * log_phi_strip(z_reduced),
    // with Re z_reduced <= 0 and |Im z_reduced| <= strip_im().  `extra`
    // collects the log divisor factors of the shift equations plus, when
    // the inversion relation is used, the i pi z^2 term; sign is -1 in
    // the inverted case.
    struct Reduction {
        Cplx z_reduced;
        Cplx extra = 0;
        double sign = 1;
    };
    Reduction reduce(Cplx z) const;

  private:
    friend class PhiLineCache;

    QDilogParams params_;
    double step_;  // min(b, 1/b): functional-equation shift size
    Cplx inv_const_;
    std::vector<Cplx> nodes_;
    std::vector<Cplx> coef_;  // quadrature weight / denominator, dw included
};

// Uniform-grid cache of log_phi_strip along a horizontal line, for
// quadrature inner loops.  Values off the safe strip are handled by
// caching along the reduced line and applying the divisor factors
// exactly per call.
class PhiLineCache {
  public:
    // line z = x + i*im_offset, x in [x_lo, x_hi]
    PhiLineCache(const PhiEvaluator& phi, double im_offset, double x_lo, double x_hi);

    Cplx log_phi(double x) const;
    Cplx phi(double x) const { return std::exp(log_phi(x)); }

  private:
    Cplx eval_reduced(double x) const;

    const PhiEvaluator& phi_;
    double im_offset_ = 0;
    double grid_im_ = 0;  // |Im| of the reduced line the grid lives on
    double dx_ = 0;
    double u_min_ = 0;
    double x_min_ = 0;
    std::vector<Cplx> values_;  // log_phi_strip on u + i*grid_im_, u <= 0
    std::vector<Cplx> line_;    // unwrapped log_phi on x + i*im_offset
};

}  // namespace tqft
