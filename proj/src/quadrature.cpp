#include "tqft/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace tqft {

const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton iteration from the Chebyshev-like initial guess
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[n - 1 - i] = x;
        rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

void composite_nodes(double a, double b, double panel, int order,
                     std::vector<double>* nodes, std::vector<double>* weights) {
    int np = std::max(1, static_cast<int>(std::ceil((b - a) / panel)));
    double w = (b - a) / np;
    for (int p = 0; p < np; ++p)
        append_gauss_panel(a + p * w, a + (p + 1) * w, order, nodes, weights);
}

void append_gauss_panel(double a, double b, int order,
                        std::vector<double>* nodes, std::vector<double>* weights) {
    const GaussRule& rule = gauss_legendre(order);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int k = 0; k < order; ++k) {
        nodes->push_back(mid + half * rule.nodes[k]);
        weights->push_back(half * rule.weights[k]);
    }
}

std::complex<double> integrate_line(const std::function<std::complex<double>(double)>& f,
                                    double a, double b, double panel, int order) {
    std::vector<double> nodes, weights;
    composite_nodes(a, b, panel, order, &nodes, &weights);
    std::complex<double> acc = 0;
    for (size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
    return acc;
}

}  // namespace tqft
