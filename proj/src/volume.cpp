#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "tqft/angles.hpp"

namespace tqft {

namespace {

constexpr double kPi = std::numbers::pi;

double total_volume(const Eigen::VectorXd& x) {
    double v = 0;
    for (int i = 0; i < x.size(); ++i) v += lobachevsky(kPi * x[i]);
    return v;
}

}  // namespace

VolumeResult maximize_volume(const Triangulation& tri) {
    const int n = tri.num_tets();
    ShapeAssignment start = solve_shape(tri);  // throws Infeasible if empty
    BalancedSpace bs = balanced_space(tri);

    Eigen::VectorXd x0(3 * n);
    for (int t = 0; t < n; ++t)
        for (int j = 0; j < 3; ++j) x0[3 * t + j] = start.angles[t][j];

    // orthonormal basis of the direction space
    Eigen::MatrixXd B(3 * n, bs.dimension);
    for (int k = 0; k < bs.dimension; ++k)
        for (int i = 0; i < 3 * n; ++i) B(i, k) = to_double(bs.basis[k][i]);
    if (bs.dimension > 0) {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(B);
        B = qr.householderQ() * Eigen::MatrixXd::Identity(3 * n, bs.dimension);
    }

    Eigen::VectorXd x = x0;
    VolumeResult res;
    const int max_iter = 500;
    double gnorm = 0;
    int it = 0;
    for (; it < max_iter; ++it) {
        Eigen::VectorXd g(3 * n), h(3 * n);
        for (int i = 0; i < 3 * n; ++i) {
            g[i] = kPi * lobachevsky_deriv(kPi * x[i]);
            h[i] = -kPi * kPi / std::tan(kPi * x[i]);
        }
        if (bs.dimension == 0) {
            gnorm = 0;
            break;
        }
        Eigen::VectorXd gr = B.transpose() * g;
        gnorm = gr.norm();
        if (gnorm <= 1e-11) break;
        Eigen::MatrixXd Hr = B.transpose() * h.asDiagonal() * B;
        Eigen::VectorXd step;
        Eigen::LLT<Eigen::MatrixXd> llt(-Hr);
        if (llt.info() == Eigen::Success)
            step = llt.solve(gr);
        else
            step = gr;  // fall back to plain ascent off the concave region
        // backtracking line search keeping all angles positive
        double f0 = total_volume(x);
        double alpha = 1.0;
        for (int ls = 0; ls < 60; ++ls) {
            Eigen::VectorXd xn = x + alpha * (B * step);
            bool pos = true;
            for (int i = 0; i < 3 * n; ++i) pos = pos && xn[i] > 1e-12 && xn[i] < 1.0;
            if (pos && total_volume(xn) >= f0 + 1e-4 * alpha * gr.dot(step) - 1e-15) {
                x = xn;
                break;
            }
            alpha *= 0.5;
        }
    }

    res.shape.angles.resize(n);
    for (int t = 0; t < n; ++t)
        for (int j = 0; j < 3; ++j) res.shape.angles[t][j] = x[3 * t + j];
    res.volume = total_volume(x);
    res.kkt_residual = gnorm;
    res.iterations = it;
    return res;
}

}  // namespace tqft
