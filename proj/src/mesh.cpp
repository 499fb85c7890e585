#include "tqft/mesh.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace tqft {

int edge_index(int u, int v) {
    if (u > v) std::swap(u, v);
    for (int e = 0; e < 6; ++e)
        if (kEdgeVerts[e][0] == u && kEdgeVerts[e][1] == v) return e;
    throw InvalidIndex("bad edge vertex pair");
}

std::array<int, 3> face_vertices(int f) {
    std::array<int, 3> out{};
    int k = 0;
    for (int v = 0; v < 4; ++v)
        if (v != f) out[k++] = v;
    return out;
}

std::array<int, 4> face_vertex_map(int f, int g) {
    std::array<int, 4> img{-1, -1, -1, -1};
    auto fv = face_vertices(f);
    auto gv = face_vertices(g);
    for (int k = 0; k < 3; ++k) img[fv[k]] = gv[k];
    return img;
}

namespace {

class UnionFind {
  public:
    explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    int find(int x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

  private:
    std::vector<int> parent_;
};

// Deterministic class ids: classes numbered by their lexicographically
// smallest member.
std::vector<int> canonical_ids(UnionFind& uf, int n, int* num_classes) {
    std::vector<int> id(n, -1);
    int next = 0;
    for (int i = 0; i < n; ++i) {
        int r = uf.find(i);
        if (id[r] < 0) id[r] = next++;
        id[i] = id[r];
    }
    *num_classes = next;
    return id;
}

}  // namespace

Triangulation build_triangulation(const std::vector<int>& signs,
                                  const std::vector<std::pair<FaceSlot, FaceSlot>>& gluings,
                                  const std::set<int>& gamma) {
    Triangulation tri;
    const int n = static_cast<int>(signs.size());
    for (int i = 0; i < n; ++i) {
        if (signs[i] != 1 && signs[i] != -1) throw InvalidIndex("sign must be +1 or -1");
        tri.tets_.push_back({i, signs[i]});
    }
    tri.glued_.assign(n, {});
    for (auto [a, b] : gluings) {
        for (const FaceSlot& s : {a, b}) {
            if (s.tet < 0 || s.tet >= n) throw InvalidIndex("tetrahedron index out of range");
            if (s.face < 0 || s.face > 3) throw InvalidIndex("face index out of range");
        }
        if (a == b) throw SelfPairedFace("face glued to itself");
        if (tri.glued_[a.tet][a.face] || tri.glued_[b.tet][b.face])
            throw DuplicateSlot("face slot glued twice");
        tri.glued_[a.tet][a.face] = b;
        tri.glued_[b.tet][b.face] = a;
        tri.gluings_.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(tri.gluings_.begin(), tri.gluings_.end());

    // face classes
    tri.face_class_of_.assign(4 * n, -1);
    int next = 0;
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f) {
            if (tri.face_class_of_[t * 4 + f] >= 0) continue;
            tri.face_class_of_[t * 4 + f] = next;
            bool interior = false;
            if (auto p = tri.glued_[t][f]) {
                tri.face_class_of_[p->tet * 4 + p->face] = next;
                interior = true;
            }
            tri.face_class_interior_.push_back(interior);
            ++next;
        }
    tri.num_face_classes_ = next;

    tri.cells_ = cell_classes(tri);
    for (int e : gamma) {
        if (e < 0 || e >= tri.cells_.num_edge_classes())
            throw InvalidIndex("gamma edge class out of range");
        tri.gamma_.insert(e);
    }
    return tri;
}

bool Triangulation::is_closed() const {
    for (const auto& g : glued_)
        for (const auto& p : g)
            if (!p) return false;
    return true;
}

std::vector<FaceSlot> Triangulation::boundary_slots() const {
    std::vector<FaceSlot> out;
    for (int t = 0; t < num_tets(); ++t)
        for (int f = 0; f < 4; ++f)
            if (!glued_[t][f]) out.push_back({t, f});
    return out;
}

CellClasses cell_classes(const Triangulation& tri) {
    const int n = tri.num_tets();
    UnionFind edges(6 * n), verts(4 * n);
    for (const auto& [a, b] : tri.gluings()) {
        auto img = face_vertex_map(a.face, b.face);
        auto fv = face_vertices(a.face);
        for (int k = 0; k < 3; ++k) {
            verts.unite(a.tet * 4 + fv[k], b.tet * 4 + img[fv[k]]);
            for (int l = k + 1; l < 3; ++l)
                edges.unite(a.tet * 6 + edge_index(fv[k], fv[l]),
                            b.tet * 6 + edge_index(img[fv[k]], img[fv[l]]));
        }
    }
    CellClasses cc;
    int ne = 0, nv = 0;
    cc.edge_class_of = canonical_ids(edges, 6 * n, &ne);
    cc.vertex_class_of = canonical_ids(verts, 4 * n, &nv);
    cc.edge_members.resize(ne);
    cc.vertex_members.resize(nv);
    cc.edge_valence.assign(ne, 0);
    for (int t = 0; t < n; ++t) {
        for (int e = 0; e < 6; ++e) {
            int c = cc.edge_class_of[t * 6 + e];
            cc.edge_members[c].emplace_back(t, e);
            ++cc.edge_valence[c];
        }
        for (int v = 0; v < 4; ++v) cc.vertex_members[cc.vertex_class_of[t * 4 + v]].emplace_back(t, v);
    }
    return cc;
}

std::pair<std::vector<FaceSlot>, std::vector<FaceSlot>> boundary_split(const Triangulation& tri) {
    std::vector<FaceSlot> plus, minus;
    for (auto s : tri.boundary_slots()) {
        int sign = ((s.face % 2 == 0) ? 1 : -1) * tri.tets()[s.tet].sign;
        (sign > 0 ? plus : minus).push_back(s);
    }
    return {plus, minus};
}

// The link of a vertex class is the surface assembled from corner
// triangles.  The corner triangle of (t,v) has vertices indexed by the
// edges of t at v, sides indexed by the faces of t containing v, and is
// glued to neighbouring corners through the face gluings.
LinkReport vertex_links(const Triangulation& tri) {
    const int n = tri.num_tets();
    // link vertices: cut points (t, v, u), u != v  -> index t*16 + v*4 + u
    // link edges (short edges): (t, v, f), f != v  -> index t*16 + v*4 + f
    UnionFind lv(16 * n), le(16 * n);
    for (const auto& [a, b] : tri.gluings()) {
        auto img = face_vertex_map(a.face, b.face);
        auto fv = face_vertices(a.face);
        for (int k = 0; k < 3; ++k) {
            int v = fv[k], w = img[v];
            le.unite(a.tet * 16 + v * 4 + a.face, b.tet * 16 + w * 4 + b.face);
            for (int l = 0; l < 3; ++l)
                if (l != k)
                    lv.unite(a.tet * 16 + v * 4 + fv[l], b.tet * 16 + w * 4 + img[fv[l]]);
        }
    }
    // each short edge belongs to 1 (boundary) or 2 corner triangles
    std::vector<std::vector<std::pair<int, int>>> edge_tris;  // class -> (t, v)
    int nle = 0;
    std::vector<int> le_id(16 * n, -1);
    {
        int next = 0;
        for (int t = 0; t < n; ++t)
            for (int v = 0; v < 4; ++v)
                for (int f = 0; f < 4; ++f) {
                    if (f == v) continue;
                    int i = t * 16 + v * 4 + f;
                    int r = le.find(i);
                    if (le_id[r] < 0) {
                        le_id[r] = next++;
                        edge_tris.emplace_back();
                    }
                    le_id[i] = le_id[r];
                    edge_tris[le_id[i]].emplace_back(t, v);
                }
        nle = next;
    }
    for (const auto& et : edge_tris)
        if (et.size() > 2) throw NonManifoldLink("short edge incident to >2 corner triangles");

    const auto& cc = tri.cells();
    LinkReport report;
    for (int vc = 0; vc < cc.num_vertex_classes(); ++vc) {
        // gather cells of this component
        std::set<int> vset, eset;
        int faces = 0, bedges = 0;
        for (auto [t, v] : cc.vertex_members[vc]) {
            ++faces;
            for (int f = 0; f < 4; ++f) {
                if (f == v) continue;
                int ec = le_id[t * 16 + v * 4 + f];
                eset.insert(ec);
                int r = lv.find(t * 16 + v * 4 + f);
                vset.insert(r);
            }
        }
        for (int ec : eset)
            if (edge_tris[ec].size() == 1) ++bedges;
        // vertex classes of the link: count distinct roots among cut points
        std::set<int> vroots;
        for (auto [t, v] : cc.vertex_members[vc])
            for (int u = 0; u < 4; ++u)
                if (u != v) vroots.insert(lv.find(t * 16 + v * 4 + u));

        LinkComponent comp;
        comp.vertex_class = vc;
        int V = static_cast<int>(vroots.size());
        int E = static_cast<int>(eset.size());
        int F = faces;
        comp.chi = V - E + F;
        // boundary components: count via cut-point adjacency along boundary
        // short edges (each boundary edge contributes its two endpoints)
        comp.boundary_components = 0;
        if (bedges > 0) {
            // boundary graph: every boundary vertex has exactly two incident
            // boundary edges on a surface with boundary; the number of
            // components equals boundary vertices count per cycle.  Use a
            // union-find over boundary edge endpoints.
            UnionFind buf(16 * n);
            std::set<int> bverts;
            for (int ec : eset) {
                if (edge_tris[ec].size() != 1) continue;
                auto [t, v] = edge_tris[ec][0];
                // recover which face f this class came from
                for (int f = 0; f < 4; ++f) {
                    if (f == v || le_id[t * 16 + v * 4 + f] != ec) continue;
                    auto fvv = face_vertices(f);
                    int p = -1, q = -1;
                    for (int x : fvv)
                        if (x != v) (p < 0 ? p : q) = x;
                    int ep = lv.find(t * 16 + v * 4 + p);
                    int eq = lv.find(t * 16 + v * 4 + q);
                    buf.unite(ep, eq);
                    bverts.insert(ep);
                    bverts.insert(eq);
                    break;
                }
            }
            std::set<int> comps;
            for (int x : bverts) comps.insert(buf.find(x));
            comp.boundary_components = static_cast<int>(comps.size());
        }
        // Orientability: orient each corner triangle by the cyclic order of
        // its vertex labels (w1,w2,w3) = the tetrahedron vertices other than
        // v, ascending.  Side f (the two face-f vertices besides v, ascending
        // {p,q}) inherits direction +1 (p->q) for {w1,w2}, {w2,w3} and -1 for
        // {w1,w3}.  The identifications preserve ascending order, so the
        // surface is orientable iff there is a flip assignment x with
        // x1*d1 = -x2*d2 across every interior short edge.
        comp.orientable = true;
        {
            auto side_dir = [](int v, int f) {
                auto fvv = face_vertices(f);
                int p = -1, q = -1;
                for (int x : fvv)
                    if (x != v) (p < 0 ? p : q) = x;
                std::array<int, 3> w{};
                int k = 0;
                for (int x = 0; x < 4; ++x)
                    if (x != v) w[k++] = x;
                // {p,q} equals {w[0],w[1]}, {w[1],w[2]} or {w[0],w[2]}
                return (p == w[0] && q == w[2]) ? -1 : 1;
            };
            std::map<std::pair<int, int>, int> flip;
            std::vector<std::pair<int, int>> stack;
            for (auto seed : cc.vertex_members[vc]) {
                if (flip.count(seed)) continue;
                flip[seed] = 1;
                stack.push_back(seed);
                while (!stack.empty()) {
                    auto [t, v] = stack.back();
                    stack.pop_back();
                    for (int f = 0; f < 4; ++f) {
                        if (f == v) continue;
                        int ec = le_id[t * 16 + v * 4 + f];
                        for (auto nb : edge_tris[ec]) {
                            if (nb == std::make_pair(t, v)) continue;
                            int fn = -1;  // side of nb on this edge class
                            for (int g = 0; g < 4; ++g)
                                if (g != nb.second &&
                                    le_id[nb.first * 16 + nb.second * 4 + g] == ec)
                                    fn = g;
                            int want = -flip[{t, v}] * side_dir(v, f) * side_dir(nb.second, fn);
                            auto it = flip.find(nb);
                            if (it == flip.end()) {
                                flip[nb] = want;
                                stack.push_back(nb);
                            } else if (it->second != want) {
                                comp.orientable = false;
                            }
                        }
                    }
                }
            }
        }
        if (bedges == 0)
            comp.betti1 = comp.orientable ? 2 - comp.chi : 1 - comp.chi;
        else
            comp.betti1 = 1 - comp.chi;
        if (comp.betti1 < 0) comp.betti1 = 0;
        comp.is_torus = bedges == 0 && comp.orientable && comp.chi == 0;
        report.links.push_back(comp);
    }
    return report;
}

}  // namespace tqft
