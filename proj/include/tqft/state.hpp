#pragma once

#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "tqft/angles.hpp"
#include "tqft/mesh.hpp"
#include "tqft/qdilog.hpp"
#include "tqft/rational.hpp"

namespace tqft {

// Partition kernel of one shaped tetrahedron: a delta factor delta(x0-x1+x2)
// times the weight exp'd in kernel_log_weight.  Angles in units of pi.
struct TetKernel {
    double sign = 1;
    std::array<double, 3> alpha{};
    double hbar = 0.25;
    double cb = 1.0;  // 1/(2 sqrt(hbar))
    double phi_T = 0.0;
};

TetKernel tet_kernel(double sign, const std::array<double, 3>& alpha,
                     const QDilogParams& params);

// log of the kernel with the delta factor stripped; analytic in the face
// variables, agreeing with the conjugate kernel at real arguments for
// negative tetrahedra.
Cplx kernel_log_weight(const TetKernel& k, const PhiEvaluator& phi,
                       const std::array<Cplx, 4>& x);

Cplx apply_level(Cplx z, double level, double hbar);

struct QuadConfig {
    double tol = 1e-6;          // relative error target
    double tol_abs = 0.0;       // absolute floor; rescues cancellation-dominated values
    int order = 16;             // Gauss-Legendre order per panel
    double panel = 0.5;         // maximum panel width
    double box0 = 4.0;          // initial box half-width
    double box_max = 120.0;
    double boundary_rel = 1e-14;  // boundary/peak magnitude cutoff
    double min_decay = 0.02;      // required decay exponent at the probe
    int max_refine = 2;
    std::vector<double> freq;   // per-axis phase-derivative bounds (optional)
    std::function<std::vector<double>(double)> freq_fn;  // bounds as fn of box
    // pointwise bound |d(phase)/du| at coordinate u of `axis`; when set it
    // overrides freq/freq_fn and panels are sized locally
    std::function<double(int, double)> local_freq;
    // log of the integrand; when set, panel densities are calibrated by
    // sampled phase gradients and negligible rows are skipped
    std::function<Cplx(const std::vector<double>&)> log_f;
    std::function<void(double)> prepare;  // called before sampling radius r
};

struct QuadResult {
    Cplx value{};
    double error_estimate = 0.0;
    double box = 0.0;
    std::size_t evals = 0;
};

// Tensor-product Gauss-Legendre over an adaptively grown box, with a
// decay probe along axes and diagonals; error estimate by panel halving.
QuadResult integrate_nd(const std::function<Cplx(const std::vector<double>&)>& f,
                        int dim, const QuadConfig& cfg);

// Delta-eliminated state integral of a closed shaped triangulation.
struct StateIntegral {
    int dimension = 0;
    std::size_t n_vars = 0;
    std::size_t n_deltas = 0;
    std::vector<int> face_of_var;          // face class id per variable
    std::vector<std::size_t> free_vars;    // variable indices kept
    std::vector<std::vector<Rat>> expand;  // n_vars x dimension: x = E y
    std::vector<double> shifts;            // contour Im shift per free var
    std::vector<TetKernel> kernels;
    std::vector<std::array<std::size_t, 4>> tet_vars;
    const PhiEvaluator* phi = nullptr;

    // integrand on the shifted contour, y real of length `dimension`
    Cplx log_integrand(const std::vector<double>& y) const;
    // per-axis bound on |d(phase)/dy_j| over the box |y|_inf <= box
    std::vector<double> freq_bounds(double box) const;
};

StateIntegral assemble(const Triangulation& tri, const ShapeAssignment& shape,
                       const PhiEvaluator& phi);

// Quadrature evaluation of an assembled integral (dilog factors served
// from line caches built for the truncation box).
QuadResult evaluate(const StateIntegral& si, QuadConfig cfg = {});

// nu_{a,b} prefactor; unit modulus for real a, b.
Cplx nu(double a, double b, const QDilogParams& params);

// chi functions of the 4_1 and 5_2 knots.  The evaluator classes share
// dilog line caches across calls; the free functions are one-shot.
class Chi41 {
  public:
    explicit Chi41(const PhiEvaluator& phi, double eps = -1);
    Cplx operator()(double x) const;

    QuadConfig config;  // inner quadrature knobs

  private:
    const PhiEvaluator& phi_;
    double eps_;
    mutable double span_ = 0;
    mutable std::unique_ptr<PhiLineCache> cache_;
};

class Chi52 {
  public:
    // evaluates at x = re_x + i*im_x for the fixed im_x given here
    explicit Chi52(const PhiEvaluator& phi, double im_x = 0.0, double eps = -1);
    Cplx core(double re_x) const;
    Cplx operator()(double re_x, double lambda) const;

    QuadConfig config;

  private:
    const PhiEvaluator& phi_;
    double im_x_;
    double eps_;
    mutable double span_ = 0;
    mutable std::shared_ptr<PhiLineCache> cache_plus_, cache_minus_, cache_mid_;
};

Cplx chi_41(double x, const QDilogParams& params);
Cplx chi_52(double x, double lambda, const QDilogParams& params);

// 5_2 reduction data: angle triples (a_i, b_i, c_i) summing to 1/2 each.
struct Five2Angles {
    std::array<std::array<double, 3>, 3> abc{};

    double lambda() const;  // a1 - c1 + b2 - a3
    bool balanced(double tol = 1e-12) const;
};

// nu-prefactored one-dimensional form of Z(5_2)
Cplx z52_reduced(const Five2Angles& ang, const QDilogParams& params,
                 QuadConfig cfg = {});

struct RateFit {
    double V = 0.0, p = 0.0, q = 0.0;
    double rms = 0.0;
    std::vector<double> residuals;
};

// least squares of y = -V + p h log h + q h against y = 2 pi h log|J|
RateFit fit_volume_rate(const std::vector<std::pair<double, double>>& values);

}  // namespace tqft
