#include "tqft/angles.hpp"

#include <cmath>

#include "tqft/simplex_lp.hpp"

namespace tqft {

bool ShapeAssignment::positive() const {
    for (const auto& a : angles)
        for (double x : a)
            if (!(x > 0)) return false;
    return true;
}

bool ShapeAssignment::sums_ok(double tol) const {
    for (const auto& a : angles)
        if (std::abs(a[0] + a[1] + a[2] - 1.0) > tol) return false;
    return true;
}

double angle_at_edge(const ShapeAssignment& shape, int t, int u, int v) {
    return shape.angles[t][kEdgeAngleSlot[edge_index(u, v)]];
}

std::vector<std::vector<int>> edge_weight_coeffs(const Triangulation& tri) {
    const auto& cc = tri.cells();
    std::vector<std::vector<int>> C(cc.num_edge_classes(),
                                    std::vector<int>(3 * tri.num_tets(), 0));
    for (int c = 0; c < cc.num_edge_classes(); ++c)
        for (auto [t, e] : cc.edge_members[c]) ++C[c][3 * t + kEdgeAngleSlot[e]];
    return C;
}

EdgeWeightVector edge_weights(const Triangulation& tri, const ShapeAssignment& shape) {
    if (static_cast<int>(shape.angles.size()) != tri.num_tets())
        throw DimensionMismatch("shape does not match triangulation");
    auto C = edge_weight_coeffs(tri);
    EdgeWeightVector w;
    w.weights.assign(C.size(), 0.0);
    for (size_t e = 0; e < C.size(); ++e)
        for (size_t k = 0; k < C[e].size(); ++k)
            w.weights[e] += C[e][k] * shape.angles[k / 3][k % 3];
    return w;
}

bool edge_class_internal(const Triangulation& tri, int edge_class) {
    for (auto [t, e] : tri.cells().edge_members[edge_class]) {
        int u = kEdgeVerts[e][0], v = kEdgeVerts[e][1];
        for (int f = 0; f < 4; ++f)
            if (f != u && f != v && !tri.partner(t, f)) return false;
    }
    return true;
}

std::map<int, Rat> balance_targets(const Triangulation& tri) {
    std::map<int, Rat> targets;
    for (int c = 0; c < tri.cells().num_edge_classes(); ++c)
        if (edge_class_internal(tri, c) && !tri.gamma().count(c)) targets[c] = 2;
    return targets;
}

namespace {

// rows: per-tet angle sums = 1, then one row per target edge
void weight_system(const Triangulation& tri, const std::map<int, Rat>& targets,
                   std::vector<std::vector<Rat>>* A, std::vector<Rat>* b) {
    const int n = tri.num_tets();
    auto C = edge_weight_coeffs(tri);
    for (int t = 0; t < n; ++t) {
        std::vector<Rat> row(3 * n, 0);
        row[3 * t] = row[3 * t + 1] = row[3 * t + 2] = 1;
        A->push_back(std::move(row));
        b->push_back(1);
    }
    for (const auto& [e, w] : targets) {
        std::vector<Rat> row(3 * n, 0);
        for (int k = 0; k < 3 * n; ++k) row[k] = C[e][k];
        A->push_back(std::move(row));
        b->push_back(w);
    }
}

}  // namespace

BalancedSpace balanced_space(const Triangulation& tri, const std::map<int, Rat>& targets) {
    std::vector<std::vector<Rat>> A;
    std::vector<Rat> b;
    weight_system(tri, targets, &A, &b);
    BalancedSpace bs;
    if (!rational_solve(A, b, &bs.basepoint))
        throw EmptyAffineSpace("weight equations are inconsistent");
    rational_rank(std::move(A), &bs.basis);
    bs.dimension = static_cast<int>(bs.basis.size());
    return bs;
}

ShapeAssignment solve_shape(const Triangulation& tri, const std::map<int, Rat>& targets) {
    const int n = tri.num_tets();
    // variables: alpha (3n), slack t (1), surplus s (3n);  alpha - t - s = 0
    const int nv = 6 * n + 1;
    std::vector<std::vector<Rat>> A;
    std::vector<Rat> b;
    weight_system(tri, targets, &A, &b);
    for (auto& row : A) row.resize(nv, 0);
    for (int k = 0; k < 3 * n; ++k) {
        std::vector<Rat> row(nv, 0);
        row[k] = 1;
        row[3 * n] = -1;
        row[3 * n + 1 + k] = -1;
        A.push_back(std::move(row));
        b.push_back(0);
    }
    std::vector<Rat> c(nv, 0);
    c[3 * n] = 1;  // maximize the minimal slack
    auto lp = solve_lp_max(c, A, b);
    if (!lp.feasible || lp.objective <= 0) {
        std::string msg = lp.feasible ? "no strictly positive solution"
                                      : "weight equations infeasible over nonnegative angles";
        throw Infeasible(msg);
    }
    ShapeAssignment shape;
    shape.angles.resize(n);
    for (int t = 0; t < n; ++t)
        for (int j = 0; j < 3; ++j) shape.angles[t][j] = to_double(lp.x[3 * t + j]);
    return shape;
}

}  // namespace tqft
