#include <cmath>
#include <numbers>
#include <vector>

#include "tqft/angles.hpp"

namespace tqft {

namespace {

constexpr double kPi = std::numbers::pi;

// zeta(2), zeta(4), ... by direct summation (rapidly convergent)
const std::vector<double>& zeta_even() {
    static const std::vector<double> z = [] {
        std::vector<double> out;
        for (int n = 1; n <= 64; ++n) {
            double s = 1.0;
            for (int k = 2; k <= 40; ++k) {
                double term = std::pow(static_cast<double>(k), -2.0 * n);
                s += term;
                if (term < 1e-18) break;
            }
            out.push_back(s);
        }
        return out;
    }();
    return z;
}

}  // namespace

// L(theta) = theta - theta log(2 theta) + sum_n zeta(2n) theta^(2n+1) / (n (2n+1) pi^(2n))
// on (0, pi/2]; extended by oddness and pi-periodicity.
double lobachevsky(double theta) {
    double t = std::remainder(theta, kPi);  // t in (-pi/2, pi/2]
    if (t == 0.0) return 0.0;
    double sign = 1.0;
    if (t < 0) {
        t = -t;
        sign = -1.0;
    }
    const auto& z = zeta_even();
    double sum = t * (1.0 - std::log(2.0 * t));
    double ratio = (t / kPi) * (t / kPi);
    double pw = ratio;
    for (size_t n = 1; n <= z.size(); ++n) {
        double term = z[n - 1] * pw * t / (n * (2 * n + 1));
        sum += term;
        if (term < 1e-17 * (1.0 + std::abs(sum))) break;
        pw *= ratio;
    }
    return sign * sum;
}

double lobachevsky_deriv(double theta) {
    double s = std::abs(2.0 * std::sin(theta));
    return -std::log(s);
}

}  // namespace tqft
