#pragma once

#include <array>
#include <vector>

#include "tqft/angles.hpp"
#include "tqft/mesh.hpp"

namespace tqft {

// Local corner labels of the bipyramid: P, Q are the apexes (endpoints of
// the central edge), A, B, C the equatorial vertices.  In the three-tet
// picture t1 = PQAB, t2 = PQBC, t3 = PQCA around the edge PQ; in the
// two-tet picture t4 = PABC and t5 = QABC share the face ABC.
enum Corner { kP = 0, kQ = 1, kA = 2, kB = 3, kC = 4 };

struct MoveSite32 {
    int edge_class = -1;
    std::array<int, 3> tets{};  // t1, t2, t3
    // (alpha_i, beta_i, gamma_i): alpha at PQ, beta at P-prev, gamma at
    // P-next, where (prev, next) runs (A,B), (B,C), (C,A)
    std::array<std::array<double, 3>, 3> abg{};
    // local vertex index of each corner in each tet, -1 if absent
    std::array<std::array<int, 5>, 3> corner{};
};

struct MoveResult {
    Triangulation tri;
    ShapeAssignment shape;
    std::vector<int> new_tets;              // indices into tri
    std::vector<int> edge_map;              // old edge class -> new, -1 if removed
    std::vector<int> removed_edge_classes;  // old ids
    std::vector<int> added_edge_classes;    // new ids
};

// Balanced internal valence-3 edges outside Gamma with three distinct
// incident tetrahedra.
std::vector<MoveSite32> find_32_sites(const Triangulation& tri,
                                      const ShapeAssignment& shape);

// Replace the three tetrahedra around the site edge by two; the induced
// weights of all surviving edges are unchanged.
MoveResult apply_32(const Triangulation& tri, const ShapeAssignment& shape,
                    const MoveSite32& site);

// Inverse move at an interior face: replace the two tetrahedra sharing
// face `face` of tetrahedron `tet` by three around a new balanced edge.
// Among the affine family of positive solutions picks the one maximizing
// the minimal angle (all positive solutions are gauge equivalent).
MoveResult apply_23(const Triangulation& tri, const ShapeAssignment& shape,
                    int tet, int face);

}  // namespace tqft
