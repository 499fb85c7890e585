#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "tqft/errors.hpp"
#include "tqft/mesh.hpp"

using namespace tqft;

namespace {

std::string slurp(const std::string& name) {
    std::ifstream f(std::string(TQFT_DATA_DIR) + "/" + name);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Triangulation fig8() {
    return build_triangulation(
        {1, -1}, {{{0, 0}, {1, 2}}, {{0, 1}, {1, 3}}, {{0, 2}, {1, 0}}, {{0, 3}, {1, 1}}});
}

}  // namespace

TEST_CASE("edge index table") {
    CHECK(edge_index(0, 1) == 0);
    CHECK(edge_index(2, 3) == 5);
    CHECK(edge_index(3, 1) == 4);
    for (int e = 0; e < 6; ++e) {
        CHECK(kEdgeAngleSlot[e] == kEdgeAngleSlot[5 - e]);
    }
}

TEST_CASE("face vertex maps are order preserving") {
    for (int f = 0; f < 4; ++f) {
        auto vs = face_vertices(f);
        CHECK(vs[0] < vs[1]);
        CHECK(vs[1] < vs[2]);
        for (int g = 0; g < 4; ++g) {
            auto m = face_vertex_map(f, g);
            auto ws = face_vertices(g);
            for (int i = 0; i < 3; ++i) CHECK(m[vs[i]] == ws[i]);
        }
    }
}

TEST_CASE("figure eight cell classes") {
    auto t = fig8();
    CHECK(t.is_closed());
    CHECK(t.cells().edge_members.size() == 2);
    CHECK(t.cells().edge_members[0].size() + t.cells().edge_members[1].size() == 12);
    auto links = vertex_links(t);
    REQUIRE(links.links.size() == 1);
    CHECK(links.links[0].is_torus);
    auto hom = homology_h2_truncated(t);
    CHECK(hom.h2_rank == 0);
    CHECK(hom.h2_torsion.empty());
    CHECK(hom.admissible_topology);
}

TEST_CASE("trefoil file topology") {
    auto pf = parse_triangulation(slurp("trefoil.tri"));
    CHECK(pf.tri.cells().edge_members.size() == 2);
    std::vector<size_t> val;
    for (const auto& m : pf.tri.cells().edge_members) val.push_back(m.size());
    std::sort(val.begin(), val.end());
    CHECK(val[0] == 2);
    CHECK(val[1] == 10);
    auto links = vertex_links(pf.tri);
    REQUIRE(links.links.size() == 1);
    CHECK(links.links[0].is_torus);
    CHECK(homology_h2_truncated(pf.tri).admissible_topology);
}

TEST_CASE("five2 file topology") {
    auto pf = parse_triangulation(slurp("five2.tri"));
    CHECK(pf.tri.tets().size() == 3);
    CHECK(pf.tri.cells().edge_members.size() == 3);
    auto links = vertex_links(pf.tri);
    REQUIRE(links.links.size() == 1);
    CHECK(links.links[0].is_torus);
    CHECK(homology_h2_truncated(pf.tri).admissible_topology);
    REQUIRE(pf.angles.size() == 3);
    CHECK(pf.angles[2][1] == doctest::Approx(0.5));
}

TEST_CASE("matched order gluing is rejected by homology") {
    auto pf = parse_triangulation(slurp("nonadmissible.tri"));
    auto hom = homology_h2_truncated(pf.tri);
    CHECK(hom.h2_rank == 3);
    CHECK_FALSE(hom.admissible_topology);
    auto links = vertex_links(pf.tri);
    for (const auto& l : links.links) CHECK_FALSE(l.is_torus);
}

TEST_CASE("boundary split signs") {
    auto t = build_triangulation({1, 1, -1},
                                 {{{0, 2}, {1, 3}}, {{1, 2}, {2, 2}}, {{2, 3}, {0, 3}}});
    CHECK_FALSE(t.is_closed());
    auto [pos, neg] = boundary_split(t);
    CHECK(pos.size() + neg.size() == 6);
    for (const auto& s : pos)
        CHECK((s.face % 2 == 0 ? 1 : -1) * t.tets()[s.tet].sign == 1);
}

TEST_CASE("gluing validation") {
    CHECK_THROWS_AS(build_triangulation({1}, {{{0, 0}, {0, 0}}}), SelfPairedFace);
    CHECK_THROWS_AS(build_triangulation(
                        {1, 1}, {{{0, 0}, {1, 0}}, {{0, 0}, {1, 1}}}),
                    DuplicateSlot);
    CHECK_THROWS_AS(build_triangulation({1}, {{{0, 0}, {2, 1}}}), InvalidIndex);
}

TEST_CASE("parse errors carry line numbers") {
    CHECK_THROWS_AS(parse_triangulation("tqft-tri v1\ntets two\n"), SyntaxError);
    try {
        parse_triangulation("tqft-tri v1\ntets 1\nsigns +1\nglue 0 0 0\n");
        FAIL("expected throw");
    } catch (const SyntaxError& e) {
        CHECK(e.line == 4);
    }
    CHECK_THROWS_AS(parse_triangulation("nonsense\n"), SyntaxError);
}

TEST_CASE("codec round trip on corpus files") {
    for (const char* name :
         {"fig8.tri", "five2.tri", "trefoil.tri", "bipyramid.tri", "nonadmissible.tri"}) {
        auto pf = parse_triangulation(slurp(name));
        auto text = serialize_triangulation(pf.tri, pf.angles);
        auto pf2 = parse_triangulation(text);
        CHECK(pf2.tri.tets().size() == pf.tri.tets().size());
        CHECK(pf2.tri.gluings().size() == pf.tri.gluings().size());
        REQUIRE(pf2.angles.size() == pf.angles.size());
        for (size_t t = 0; t < pf.angles.size(); ++t)
            for (int j = 0; j < 3; ++j)
                CHECK(pf2.angles[t][j] == doctest::Approx(pf.angles[t][j]).epsilon(1e-15));
        CHECK(serialize_triangulation(pf2.tri, pf2.angles) == text);
        for (size_t t = 0; t < pf.tri.tets().size(); ++t)
            CHECK(pf2.tri.tets()[t].sign == pf.tri.tets()[t].sign);
    }
}

TEST_CASE("codec round trip on random gluings") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 1 + int(rng() % 3);
        std::vector<int> signs(n);
        for (auto& s : signs) s = rng() % 2 ? 1 : -1;
        std::vector<std::pair<FaceSlot, FaceSlot>> gl;
        std::vector<FaceSlot> free;
        for (int t = 0; t < n; ++t)
            for (int f = 0; f < 4; ++f) free.push_back({t, f});
        std::shuffle(free.begin(), free.end(), rng);
        while (free.size() >= 2) {
            FaceSlot a = free.back();
            free.pop_back();
            FaceSlot b = free.back();
            if (a.tet == b.tet && a.face == b.face) break;
            free.pop_back();
            if (rng() % 2) gl.push_back({a, b});
        }
        Triangulation t;
        try {
            t = build_triangulation(signs, gl);
        } catch (const Error&) {
            continue;
        }
        auto text = serialize_triangulation(t);
        auto pf = parse_triangulation(text);
        CHECK(serialize_triangulation(pf.tri) == text);
        CHECK(pf.tri.cells().edge_members.size() == t.cells().edge_members.size());
    }
}
