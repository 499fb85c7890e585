#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tqft/errors.hpp"

namespace tqft {

// Vertex pairs of the six edges of a tetrahedron, and the opposite-edge
// pairing.  Edges 0..5 are {01,02,03,12,13,23}; opposite pairs carry equal
// dihedral angles, giving the angle-slot index 0..2.
inline constexpr std::array<std::array<int, 2>, 6> kEdgeVerts = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
inline constexpr std::array<int, 6> kEdgeAngleSlot = {0, 1, 2, 2, 1, 0};

int edge_index(int u, int v);  // u != v, order irrelevant

struct Tetrahedron {
    int id = 0;
    int sign = +1;  // orientation of the ordered vertex embedding
};

struct FaceSlot {
    int tet = 0;
    int face = 0;  // 0..3, the face opposite vertex `face`
    friend auto operator<=>(const FaceSlot&, const FaceSlot&) = default;
};

// The unique order-preserving vertex bijection induced by gluing face `f`
// of one tetrahedron to face `g` of another: k-th vertex of f (ascending)
// maps to k-th vertex of g.  Returns image[v] for v a vertex of face f,
// -1 elsewhere.
std::array<int, 4> face_vertex_map(int f, int g);
std::array<int, 3> face_vertices(int f);  // ascending

struct CellClasses {
    // Edge classes partition the 6*n tetrahedron-edges.
    std::vector<int> edge_class_of;  // index t*6+e -> class id
    std::vector<std::vector<std::pair<int, int>>> edge_members;  // (tet, edge)
    std::vector<int> edge_valence;
    // Vertex classes partition the 4*n corners.
    std::vector<int> vertex_class_of;  // index t*4+v -> class id
    std::vector<std::vector<std::pair<int, int>>> vertex_members;

    int num_edge_classes() const { return static_cast<int>(edge_members.size()); }
    int num_vertex_classes() const { return static_cast<int>(vertex_members.size()); }
};

struct LinkComponent {
    int vertex_class = 0;
    int chi = 0;
    int boundary_components = 0;
    bool orientable = false;
    int betti1 = 0;
    bool is_torus = false;  // closed orientable with chi == 0
};

struct LinkReport {
    std::vector<LinkComponent> links;
};

struct HomologyReport {
    int h2_rank = 0;
    std::vector<long long> h2_torsion;  // invariant factors > 1
    bool admissible_topology = false;   // H2 == 0
    // cell counts of the truncated complex, for Euler-characteristic checks
    int n0 = 0, n1 = 0, n2 = 0, n3 = 0;
    int h0_rank = 0, h1_rank = 0, h3_rank = 0;
};

class Triangulation {
  public:
    Triangulation() = default;

    const std::vector<Tetrahedron>& tets() const { return tets_; }
    int num_tets() const { return static_cast<int>(tets_.size()); }
    const std::vector<std::pair<FaceSlot, FaceSlot>>& gluings() const { return gluings_; }
    const std::optional<FaceSlot>& partner(int tet, int face) const {
        return glued_[tet][face];
    }
    const std::set<int>& gamma() const { return gamma_; }
    const CellClasses& cells() const { return cells_; }

    bool is_closed() const;
    std::vector<FaceSlot> boundary_slots() const;

    // Face classes: interior faces (glued pairs) share one class.
    int face_class(int tet, int face) const { return face_class_of_[tet * 4 + face]; }
    int num_face_classes() const { return num_face_classes_; }
    bool face_class_interior(int c) const { return face_class_interior_[c]; }

    friend Triangulation build_triangulation(const std::vector<int>&,
                                             const std::vector<std::pair<FaceSlot, FaceSlot>>&,
                                             const std::set<int>&);

  private:
    std::vector<Tetrahedron> tets_;
    std::vector<std::array<std::optional<FaceSlot>, 4>> glued_;
    std::vector<std::pair<FaceSlot, FaceSlot>> gluings_;
    std::set<int> gamma_;
    CellClasses cells_;
    std::vector<int> face_class_of_;
    std::vector<bool> face_class_interior_;
    int num_face_classes_ = 0;
};

Triangulation build_triangulation(const std::vector<int>& signs,
                                  const std::vector<std::pair<FaceSlot, FaceSlot>>& gluings,
                                  const std::set<int>& gamma = {});

CellClasses cell_classes(const Triangulation& tri);

// Boundary split into positively and negatively signed slots;
// sign of face i of tetrahedron T is (-1)^i * sign(T).
std::pair<std::vector<FaceSlot>, std::vector<FaceSlot>> boundary_split(const Triangulation& tri);

LinkReport vertex_links(const Triangulation& tri);

// H2 of the truncated complex (tetrahedron corners cut, realizing
// X minus the open vertex stars) over the integers.
HomologyReport homology_h2_truncated(const Triangulation& tri);

// Triangulation file format, see README.
struct ParsedFile {
    Triangulation tri;
    // optional per-tet angle triples in units of pi (empty if absent)
    std::vector<std::array<double, 3>> angles;
};

ParsedFile parse_triangulation(const std::string& text);
std::string serialize_triangulation(const Triangulation& tri,
                                    const std::vector<std::array<double, 3>>& angles = {});

}  // namespace tqft
