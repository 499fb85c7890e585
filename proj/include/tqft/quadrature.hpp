#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace tqft {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

const GaussRule& gauss_legendre(int n);

// Composite Gauss-Legendre nodes covering [a, b] with panels of width
// <= panel and `order` points per panel; appends (node, weight) pairs.
void composite_nodes(double a, double b, double panel, int order,
                     std::vector<double>* nodes, std::vector<double>* weights);

// Single Gauss-Legendre panel on [a, b]; appends (node, weight) pairs.
void append_gauss_panel(double a, double b, int order,
                        std::vector<double>* nodes, std::vector<double>* weights);

// Integrate a complex-valued function over [a, b] with composite GL panels.
std::complex<double> integrate_line(const std::function<std::complex<double>(double)>& f,
                                    double a, double b, double panel, int order);

}  // namespace tqft
