#include "tqft/pachner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "tqft/simplex_lp.hpp"

namespace tqft {

namespace {

// parity of a 4-sequence of distinct values as a permutation of its sorted
// order: +1 even, -1 odd
int parity4(const std::array<int, 4>& seq) {
    int p = 1;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (seq[i] > seq[j]) p = -p;
    return p;
}

int slot_of(int u, int v) { return kEdgeAngleSlot[edge_index(u, v)]; }

// trace the star of an internal valence-3 edge; corner[i][label] filled for
// the labels present in tet i
struct SiteTrace {
    std::array<int, 3> tets;
    std::array<std::array<int, 5>, 3> corner;
};

std::optional<SiteTrace> trace_site(const Triangulation& tri, int edge_class) {
    const auto& members = tri.cells().edge_members[edge_class];
    if (members.size() != 3) return std::nullopt;

    auto start = *std::min_element(members.begin(), members.end());
    int t1 = start.first;
    auto [u, v] = kEdgeVerts[start.second];
    std::array<int, 2> other{};
    for (int w = 0, k = 0; w < 4; ++w)
        if (w != u && w != v) other[k++] = w;

    SiteTrace s;
    for (auto& c : s.corner) c.fill(-1);
    s.tets[0] = t1;
    s.corner[0][kP] = u;
    s.corner[0][kQ] = v;
    s.corner[0][kA] = other[0];
    s.corner[0][kB] = other[1];

    // cross the face opposite A into t2
    auto g1 = tri.partner(t1, other[0]);
    if (!g1) return std::nullopt;
    auto m1 = face_vertex_map(other[0], g1->face);
    s.tets[1] = g1->tet;
    s.corner[1][kP] = m1[u];
    s.corner[1][kQ] = m1[v];
    s.corner[1][kB] = m1[other[1]];
    s.corner[1][kC] = g1->face;

    // cross the face opposite B into t3
    auto g2 = tri.partner(s.tets[1], s.corner[1][kB]);
    if (!g2) return std::nullopt;
    auto m2 = face_vertex_map(s.corner[1][kB], g2->face);
    s.tets[2] = g2->tet;
    s.corner[2][kP] = m2[s.corner[1][kP]];
    s.corner[2][kQ] = m2[s.corner[1][kQ]];
    s.corner[2][kC] = m2[s.corner[1][kC]];
    s.corner[2][kA] = g2->face;

    // the cycle must close back onto t1 across the face opposite C
    auto g3 = tri.partner(s.tets[2], s.corner[2][kC]);
    if (!g3 || g3->tet != t1 || g3->face != other[1]) return std::nullopt;
    auto m3 = face_vertex_map(s.corner[2][kC], g3->face);
    if (m3[s.corner[2][kP]] != u || m3[s.corner[2][kQ]] != v ||
        m3[s.corner[2][kA]] != other[0])
        return std::nullopt;

    if (s.tets[0] == s.tets[1] || s.tets[1] == s.tets[2] || s.tets[0] == s.tets[2])
        return std::nullopt;
    return s;
}

constexpr std::array<int, 3> kPrev = {kA, kB, kC};
constexpr std::array<int, 3> kNext = {kB, kC, kA};

std::array<std::array<double, 3>, 3> site_angles(const ShapeAssignment& shape,
                                                 const SiteTrace& s) {
    std::array<std::array<double, 3>, 3> abg;
    for (int i = 0; i < 3; ++i) {
        const auto& a = shape.angles[s.tets[i]];
        int p = s.corner[i][kP];
        abg[i][0] = a[slot_of(p, s.corner[i][kQ])];
        abg[i][1] = a[slot_of(p, s.corner[i][kPrev[i]])];
        abg[i][2] = a[slot_of(p, s.corner[i][kNext[i]])];
    }
    return abg;
}

// order A, B, C by the pairwise relations each tet's vertex order imposes
std::array<int, 3> order_abc(const std::array<std::array<int, 5>, 3>& corner) {
    bool ab = corner[0][kA] < corner[0][kB];
    bool bc = corner[1][kB] < corner[1][kC];
    bool ca = corner[2][kC] < corner[2][kA];
    if (ab == bc && bc == ca)
        throw InvalidSite("equatorial vertex orders form a cycle");
    std::array<int, 3> seq = {kA, kB, kC};
    auto before = [&](int x, int y) {
        if ((x == kA && y == kB) || (x == kB && y == kA)) return x == kA ? ab : !ab;
        if ((x == kB && y == kC) || (x == kC && y == kB)) return x == kB ? bc : !bc;
        return x == kC ? ca : !ca;
    };
    std::sort(seq.begin(), seq.end(), before);
    return seq;
}

// insert an apex into the equatorial order subject to the relations from
// the tets containing it; positions run 0..3 in the returned label list
std::array<int, 4> insert_apex(const std::array<int, 3>& abc, int apex,
                               const std::vector<std::pair<int, bool>>& rel) {
    // rel: (equatorial label, apex-before-label)
    int lo = 0, hi = 3;
    for (auto [lab, before] : rel) {
        int pos = static_cast<int>(std::find(abc.begin(), abc.end(), lab) - abc.begin());
        if (before) hi = std::min(hi, pos);
        else lo = std::max(lo, pos + 1);
    }
    if (lo > hi) throw InvalidSite("apex order conflicts with the equatorial order");
    std::array<int, 4> out{};
    for (int i = 0, k = 0; i <= 3; ++i) {
        if (i == lo) out[i] = apex;
        else out[i] = abc[k++];
    }
    return out;
}

std::array<int, 5> positions_of(const std::array<int, 4>& labels) {
    std::array<int, 5> pos;
    pos.fill(-1);
    for (int i = 0; i < 4; ++i) pos[labels[i]] = i;
    return pos;
}

struct Rebuild {
    std::vector<int> signs;
    std::vector<std::pair<FaceSlot, FaceSlot>> gluings;
    std::vector<int> old_to_new;  // kept old tet -> new index, -1 removed
};

Rat rat_of(double x) { return static_cast<Rat>(x); }

}  // namespace

std::vector<MoveSite32> find_32_sites(const Triangulation& tri,
                                       const ShapeAssignment& shape) {
    std::vector<MoveSite32> out;
    for (int c = 0; c < tri.cells().num_edge_classes(); ++c) {
        if (tri.gamma().count(c)) continue;
        auto s = trace_site(tri, c);
        if (!s) continue;
        auto abg = site_angles(shape, *s);
        if (std::abs(abg[0][0] + abg[1][0] + abg[2][0] - 2.0) > 1e-9) continue;
        MoveSite32 site;
        site.edge_class = c;
        site.tets = s->tets;
        site.corner = s->corner;
        site.abg = abg;
        out.push_back(site);
    }
    return out;
}

MoveResult apply_32(const Triangulation& tri, const ShapeAssignment& shape,
                    const MoveSite32& site) {
    auto traced = trace_site(tri, site.edge_class);
    if (!traced || traced->tets != site.tets || traced->corner != site.corner)
        throw InvalidSite("site does not match the triangulation");
    if (tri.gamma().count(site.edge_class))
        throw InvalidSite("site edge is marked in Gamma");
    const auto& corner = site.corner;
    auto abg = site_angles(shape, *traced);
    if (std::abs(abg[0][0] + abg[1][0] + abg[2][0] - 2.0) > 1e-9)
        throw InvalidSite("site edge is not balanced");

    // orientation of the bipyramid read off each tet; all three must agree
    int eps = 0;
    for (int i = 0; i < 3; ++i) {
        std::array<int, 4> model = {corner[i][kP], corner[i][kQ],
                                    corner[i][kPrev[i]], corner[i][kNext[i]]};
        int e = tri.tets()[site.tets[i]].sign * parity4(model);
        if (i == 0) eps = e;
        else if (e != eps) throw InvalidSite("site is not coherently oriented");
    }

    auto abc = order_abc(corner);
    auto apex_rel = [&](int apex) {
        std::vector<std::pair<int, bool>> rel;
        for (int i = 0; i < 3; ++i)
            for (int lab : {kA, kB, kC})
                if (corner[i][lab] >= 0 && corner[i][apex] >= 0)
                    rel.emplace_back(lab, corner[i][apex] < corner[i][lab]);
        return rel;
    };
    auto pos4 = positions_of(insert_apex(abc, kP, apex_rel(kP)));
    auto pos5 = positions_of(insert_apex(abc, kQ, apex_rel(kQ)));

    int n = tri.num_tets();
    Rebuild rb;
    rb.old_to_new.assign(n, -1);
    int idx = 0;
    for (int t = 0; t < n; ++t) {
        if (t == site.tets[0] || t == site.tets[1] || t == site.tets[2]) continue;
        rb.old_to_new[t] = idx++;
        rb.signs.push_back(tri.tets()[t].sign);
    }
    int t4 = idx, t5 = idx + 1;
    rb.signs.push_back(-eps * parity4({pos4[kP], pos4[kB], pos4[kA], pos4[kC]}));
    rb.signs.push_back(eps * parity4({pos5[kQ], pos5[kB], pos5[kA], pos5[kC]}));

    // faces opposite Q in t_i land on t4, faces opposite P on t5; the
    // equatorial label absent from t_i names the new face
    std::array<int, 3> missing = {kC, kA, kB};
    auto map_slot = [&](const FaceSlot& fs) -> FaceSlot {
        for (int i = 0; i < 3; ++i) {
            if (fs.tet != site.tets[i]) continue;
            if (fs.face == corner[i][kQ]) return {t4, pos4[missing[i]]};
            if (fs.face == corner[i][kP]) return {t5, pos5[missing[i]]};
            throw InvalidSite("internal site face glued outside the site");
        }
        return {rb.old_to_new[fs.tet], fs.face};
    };
    auto is_internal = [&](const FaceSlot& fs) {
        for (int i = 0; i < 3; ++i)
            if (fs.tet == site.tets[i] && fs.face != corner[i][kP] &&
                fs.face != corner[i][kQ])
                return true;
        return false;
    };
    for (const auto& [a, b] : tri.gluings()) {
        if (is_internal(a) || is_internal(b)) continue;
        rb.gluings.emplace_back(map_slot(a), map_slot(b));
    }
    rb.gluings.push_back({FaceSlot{t4, pos4[kP]}, FaceSlot{t5, pos5[kQ]}});

    MoveResult res;
    res.tri = build_triangulation(rb.signs, rb.gluings);
    res.new_tets = {t4, t5};

    // angle triples of the new pair, entered by slot
    std::array<double, 3> ang4{}, ang5{};
    ang4[slot_of(pos4[kP], pos4[kB])] = abg[1][1] + abg[0][2];
    ang4[slot_of(pos4[kP], pos4[kA])] = abg[0][1] + abg[2][2];
    ang4[slot_of(pos4[kP], pos4[kC])] = abg[2][1] + abg[1][2];
    ang5[slot_of(pos5[kQ], pos5[kB])] = abg[0][1] + abg[1][2];
    ang5[slot_of(pos5[kQ], pos5[kA])] = abg[2][1] + abg[0][2];
    ang5[slot_of(pos5[kQ], pos5[kC])] = abg[1][1] + abg[2][2];
    res.shape.level = shape.level;
    res.shape.angles.resize(n - 1);
    for (int t = 0; t < n; ++t)
        if (rb.old_to_new[t] >= 0) res.shape.angles[rb.old_to_new[t]] = shape.angles[t];
    res.shape.angles[t4] = ang4;
    res.shape.angles[t5] = ang5;

    // surviving local edges by corner labels
    auto new_member = [&](int l1, int l2) -> std::pair<int, int> {
        if (l1 == kQ || l2 == kQ)
            return {t5, edge_index(pos5[l1], pos5[l2])};
        return {t4, edge_index(pos4[l1], pos4[l2])};
    };
    const auto& old_cells = tri.cells();
    const auto& new_cells = res.tri.cells();
    res.edge_map.assign(old_cells.num_edge_classes(), -1);
    for (int c = 0; c < old_cells.num_edge_classes(); ++c) {
        if (c == site.edge_class) continue;
        std::pair<int, int> nm{-1, -1};
        for (auto [t, e] : old_cells.edge_members[c]) {
            if (rb.old_to_new[t] >= 0) {
                nm = {rb.old_to_new[t], e};
                break;
            }
        }
        if (nm.first < 0) {
            auto [t, e] = old_cells.edge_members[c].front();
            int i = static_cast<int>(std::find(site.tets.begin(), site.tets.end(), t) -
                                     site.tets.begin());
            auto [u, v] = kEdgeVerts[e];
            int l1 = -1, l2 = -1;
            for (int lab = 0; lab < 5; ++lab) {
                if (corner[i][lab] == u) l1 = lab;
                if (corner[i][lab] == v) l2 = lab;
            }
            nm = new_member(l1, l2);
        }
        res.edge_map[c] = new_cells.edge_class_of[nm.first * 6 + nm.second];
    }
    res.removed_edge_classes = {site.edge_class};

    if (!tri.gamma().empty()) {
        std::set<int> gamma;
        for (int c : tri.gamma()) gamma.insert(res.edge_map[c]);
        res.tri = build_triangulation(rb.signs, rb.gluings, gamma);
    }
    return res;
}

MoveResult apply_23(const Triangulation& tri, const ShapeAssignment& shape,
                    int tet, int face) {
    if (tet < 0 || tet >= tri.num_tets() || face < 0 || face > 3)
        throw InvalidSite("face slot out of range");
    auto g = tri.partner(tet, face);
    if (!g) throw InvalidSite("face is not glued");
    int tb = g->tet, fb = g->face;
    if (tb == tet) throw InvalidSite("face is glued to its own tetrahedron");
    int shared = 0;
    for (int f = 0; f < 4; ++f) {
        auto p = tri.partner(tet, f);
        if (p && p->tet == tb) ++shared;
    }
    if (shared != 1)
        throw InvalidSite("tetrahedra share more than one face");

    // t4 = tet with apex P opposite the shared face, t5 = partner with Q
    auto fv = face_vertices(face);
    auto m = face_vertex_map(face, fb);
    std::array<std::array<int, 5>, 2> corner;
    for (auto& c : corner) c.fill(-1);
    corner[0][kP] = face;
    corner[1][kQ] = fb;
    for (int k = 0; k < 3; ++k) {
        corner[0][kA + k] = fv[k];
        corner[1][kA + k] = m[fv[k]];
    }

    int eps = -tri.tets()[tet].sign *
              parity4({corner[0][kP], corner[0][kB], corner[0][kA], corner[0][kC]});
    int eps5 = tri.tets()[tb].sign *
               parity4({corner[1][kQ], corner[1][kB], corner[1][kA], corner[1][kC]});
    if (eps != eps5) throw InvalidSite("face pairing is not coherently oriented");

    // target angles (alpha_j, beta_j, gamma_j) for j = 4, 5
    std::array<double, 3> t4ang, t5ang;
    {
        const auto& a4 = shape.angles[tet];
        const auto& a5 = shape.angles[tb];
        int p = corner[0][kP], q = corner[1][kQ];
        t4ang = {a4[slot_of(p, corner[0][kB])], a4[slot_of(p, corner[0][kA])],
                 a4[slot_of(p, corner[0][kC])]};
        t5ang = {a5[slot_of(q, corner[1][kB])], a5[slot_of(q, corner[1][kA])],
                 a5[slot_of(q, corner[1][kC])]};
    }

    // max s subject to the angle map, unit sums, angles >= s; variables
    // x = (abg1, abg2, abg3, s, slacks)
    {
        std::vector<std::vector<Rat>> A;
        std::vector<Rat> b;
        auto eq = [&](std::initializer_list<std::pair<int, int>> terms, double rhs) {
            std::vector<Rat> row(19, Rat(0));
            for (auto [j, c] : terms) row[j] = c;
            A.push_back(std::move(row));
            b.push_back(rat_of(rhs));
        };
        // indices: tet i angle k -> 3i+k (k: 0 alpha, 1 beta, 2 gamma)
        eq({{4, 1}, {2, 1}}, t4ang[0]);   // b2+g1 = a4
        eq({{1, 1}, {8, 1}}, t4ang[1]);   // b1+g3 = b4
        eq({{7, 1}, {5, 1}}, t4ang[2]);   // b3+g2 = g4
        eq({{1, 1}, {5, 1}}, t5ang[0]);   // b1+g2 = a5
        eq({{7, 1}, {2, 1}}, t5ang[1]);   // b3+g1 = b5
        eq({{4, 1}, {8, 1}}, t5ang[2]);   // b2+g3 = g5
        for (int i = 0; i < 3; ++i)
            eq({{3 * i, 1}, {3 * i + 1, 1}, {3 * i + 2, 1}}, 1.0);
        for (int j = 0; j < 9; ++j) {
            std::vector<Rat> row(19, Rat(0));
            row[j] = 1;
            row[9] = -1;
            row[10 + j] = -1;  // x_j - s - slack = 0
            A.push_back(std::move(row));
            b.push_back(Rat(0));
        }
        std::vector<Rat> c(19, Rat(0));
        c[9] = 1;
        LPResult lp = solve_lp_max(c, A, b);
        if (!lp.feasible)
            throw InfeasiblePositivity("angle map has no nonnegative solution");
        if (!(lp.objective > 0))
            throw InfeasiblePositivity("angle map has no positive solution");
        std::array<std::array<double, 3>, 3> abg;
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k) abg[i][k] = to_double(lp.x[3 * i + k]);

        // global vertex order: equatorial A < B < C as induced by the face,
        // apexes inserted by their relations in each source tet
        std::array<int, 3> abc = {kA, kB, kC};
        auto rels = [&](int side, int apex) {
            std::vector<std::pair<int, bool>> rel;
            for (int lab : {kA, kB, kC})
                rel.emplace_back(lab, corner[side][apex] < corner[side][lab]);
            return rel;
        };
        auto ordP = insert_apex(abc, kP, rels(0, kP));
        auto ordQ = insert_apex(abc, kQ, rels(1, kQ));

        // the three new orders: equatorial rank from abc, apex rank from
        // its interval position (odd keys interleave between even ones)
        auto rank = [&](int lab, const std::array<int, 4>& withP,
                        const std::array<int, 4>& withQ) {
            if (lab == kP)
                return 2 * static_cast<int>(std::find(withP.begin(), withP.end(), kP) -
                                            withP.begin()) -
                       1;
            if (lab == kQ)
                return 2 * static_cast<int>(std::find(withQ.begin(), withQ.end(), kQ) -
                                            withQ.begin()) -
                       1;
            return 2 * static_cast<int>(std::find(abc.begin(), abc.end(), lab) -
                                        abc.begin());
        };
        auto order_tet = [&](std::array<int, 4> labs) {
            std::sort(labs.begin(), labs.end(), [&](int x, int y) {
                int rx = rank(x, ordP, ordQ), ry = rank(y, ordP, ordQ);
                if (rx != ry) return rx < ry;
                return x < y;  // P before Q when their keys tie
            });
            return positions_of(labs);
        };
        auto pos1 = order_tet({kP, kQ, kA, kB});
        auto pos2 = order_tet({kP, kQ, kB, kC});
        auto pos3 = order_tet({kP, kQ, kC, kA});

        int n = tri.num_tets();
        Rebuild rb;
        rb.old_to_new.assign(n, -1);
        int idx = 0;
        for (int t = 0; t < n; ++t) {
            if (t == tet || t == tb) continue;
            rb.old_to_new[t] = idx++;
            rb.signs.push_back(tri.tets()[t].sign);
        }
        int n1 = idx, n2 = idx + 1, n3 = idx + 2;
        std::array<std::array<int, 5>, 3> pos = {pos1, pos2, pos3};
        std::array<int, 3> nt = {n1, n2, n3};
        for (int i = 0; i < 3; ++i)
            rb.signs.push_back(eps * parity4({pos[i][kP], pos[i][kQ],
                                              pos[i][kPrev[i]], pos[i][kNext[i]]}));

        // external faces: opposite Q of t_i covers a face of t4, opposite P
        // covers a face of t5; labels absent from t_i pick the old face
        auto map_slot = [&](const FaceSlot& fs) -> FaceSlot {
            if (fs.tet == tet) {
                for (int lab : {kA, kB, kC}) {
                    if (corner[0][lab] != fs.face) continue;
                    int i = lab == kA ? 1 : (lab == kB ? 2 : 0);
                    return {nt[i], pos[i][kQ]};
                }
                throw InvalidSite("shared face cannot carry an outside gluing");
            }
            if (fs.tet == tb) {
                for (int lab : {kA, kB, kC}) {
                    if (corner[1][lab] != fs.face) continue;
                    int i = lab == kA ? 1 : (lab == kB ? 2 : 0);
                    return {nt[i], pos[i][kP]};
                }
                throw InvalidSite("shared face cannot carry an outside gluing");
            }
            return {rb.old_to_new[fs.tet], fs.face};
        };
        for (const auto& [a, bsl] : tri.gluings()) {
            bool a_shared = (a.tet == tet && a.face == face) || (a.tet == tb && a.face == fb);
            bool b_shared = (bsl.tet == tet && bsl.face == face) ||
                            (bsl.tet == tb && bsl.face == fb);
            if (a_shared && b_shared) continue;
            if (a_shared || b_shared)
                throw InvalidSite("shared face gluing is inconsistent");
            rb.gluings.emplace_back(map_slot(a), map_slot(bsl));
        }
        rb.gluings.push_back({FaceSlot{n1, pos1[kA]}, FaceSlot{n2, pos2[kC]}});
        rb.gluings.push_back({FaceSlot{n2, pos2[kB]}, FaceSlot{n3, pos3[kA]}});
        rb.gluings.push_back({FaceSlot{n3, pos3[kC]}, FaceSlot{n1, pos1[kB]}});

        MoveResult res;
        res.tri = build_triangulation(rb.signs, rb.gluings);
        res.new_tets = {n1, n2, n3};
        res.shape.level = shape.level;
        res.shape.angles.resize(n + 1);
        for (int t = 0; t < n; ++t)
            if (rb.old_to_new[t] >= 0)
                res.shape.angles[rb.old_to_new[t]] = shape.angles[t];
        for (int i = 0; i < 3; ++i) {
            std::array<double, 3> ang{};
            int p = pos[i][kP];
            ang[slot_of(p, pos[i][kQ])] = abg[i][0];
            ang[slot_of(p, pos[i][kPrev[i]])] = abg[i][1];
            ang[slot_of(p, pos[i][kNext[i]])] = abg[i][2];
            res.shape.angles[nt[i]] = ang;
        }

        auto new_member = [&](int l1, int l2) -> std::pair<int, int> {
            auto in_tet = [&](int i, int l) {
                return pos[i][l] >= 0;
            };
            for (int i = 0; i < 3; ++i)
                if (in_tet(i, l1) && in_tet(i, l2))
                    return {nt[i], edge_index(pos[i][l1], pos[i][l2])};
            throw InvalidSite("edge labels not found in any new tetrahedron");
        };
        const auto& old_cells = tri.cells();
        const auto& new_cells = res.tri.cells();
        res.edge_map.assign(old_cells.num_edge_classes(), -1);
        for (int c = 0; c < old_cells.num_edge_classes(); ++c) {
            std::pair<int, int> nm{-1, -1};
            for (auto [t, e] : old_cells.edge_members[c]) {
                if (rb.old_to_new[t] >= 0) {
                    nm = {rb.old_to_new[t], e};
                    break;
                }
            }
            if (nm.first < 0) {
                auto [t, e] = old_cells.edge_members[c].front();
                int side = t == tet ? 0 : 1;
                auto [u, v] = kEdgeVerts[e];
                int l1 = -1, l2 = -1;
                for (int lab = 0; lab < 5; ++lab) {
                    if (corner[side][lab] == u) l1 = lab;
                    if (corner[side][lab] == v) l2 = lab;
                }
                nm = new_member(l1, l2);
            }
            res.edge_map[c] = new_cells.edge_class_of[nm.first * 6 + nm.second];
        }
        res.added_edge_classes = {
            new_cells.edge_class_of[n1 * 6 + edge_index(pos1[kP], pos1[kQ])]};

        if (!tri.gamma().empty()) {
            std::set<int> gamma;
            for (int c : tri.gamma()) gamma.insert(res.edge_map[c]);
            res.tri = build_triangulation(rb.signs, rb.gluings, gamma);
        }
        return res;
    }
}

}  // namespace tqft
