#pragma once

#include <array>
#include <map>
#include <optional>
#include <vector>

#include "tqft/mesh.hpp"
#include "tqft/rational.hpp"

namespace tqft {

// Per-tetrahedron dihedral-angle triples in units of pi.  Slot j is the
// angle at edge (0,j) of the ordered tetrahedron (equal on the opposite
// edge); the triple sums to 1.
struct ShapeAssignment {
    std::vector<std::array<double, 3>> angles;
    double level = 0.0;

    bool positive() const;
    bool sums_ok(double tol = 1e-12) const;
};

struct EdgeWeightVector {
    std::vector<double> weights;  // indexed by edge class, units of pi
};

// weight(e) = sum of incident angles with multiplicity
EdgeWeightVector edge_weights(const Triangulation& tri, const ShapeAssignment& shape);

// Integer coefficient matrix of the edge-weight map: row e, column 3*t+j.
std::vector<std::vector<int>> edge_weight_coeffs(const Triangulation& tri);

bool edge_class_internal(const Triangulation& tri, int edge_class);

// Angle of `shape` at the (unordered) edge {u,v} of tetrahedron t.
double angle_at_edge(const ShapeAssignment& shape, int t, int u, int v);

// Default balance targets: weight 2 for every internal edge class not in
// Gamma.  An explicit map overrides/extends the default.
std::map<int, Rat> balance_targets(const Triangulation& tri);

struct BalancedSpace {
    std::vector<Rat> basepoint;               // one exact solution, 3n coords
    std::vector<std::vector<Rat>> basis;      // exact basis of the direction space
    int dimension = 0;
};

// Affine parametrization of the generalized shape structures with the
// prescribed edge weights (exact rational arithmetic).
BalancedSpace balanced_space(const Triangulation& tri, const std::map<int, Rat>& targets);
inline BalancedSpace balanced_space(const Triangulation& tri) {
    return balanced_space(tri, balance_targets(tri));
}

// Strictly positive solution maximizing the minimal angle slack.
ShapeAssignment solve_shape(const Triangulation& tri, const std::map<int, Rat>& targets);
inline ShapeAssignment solve_shape(const Triangulation& tri) {
    return solve_shape(tri, balance_targets(tri));
}

// Lobachevsky function  L(theta) = 1/2 sum_{n>=1} sin(2 n theta)/n^2
// (radians; absolute error <= 1e-14) and its derivative -log|2 sin theta|.
double lobachevsky(double theta);
double lobachevsky_deriv(double theta);

struct VolumeResult {
    ShapeAssignment shape;
    double volume = 0.0;
    double kkt_residual = 0.0;
    int iterations = 0;
};

// Maximize  V(alpha) = sum_T sum_j L(pi alpha_j)  over the fully balanced
// polytope; V is strictly concave there, so the maximizer is unique.
VolumeResult maximize_volume(const Triangulation& tri);

}  // namespace tqft
