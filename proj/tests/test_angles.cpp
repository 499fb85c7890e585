#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "tqft/angles.hpp"
#include "tqft/errors.hpp"
#include "tqft/mesh.hpp"
#include "tqft/simplex_lp.hpp"

using namespace tqft;

namespace {

Triangulation fig8() {
    return build_triangulation(
        {1, -1}, {{{0, 0}, {1, 2}}, {{0, 1}, {1, 3}}, {{0, 2}, {1, 0}}, {{0, 3}, {1, 1}}});
}

Triangulation five2() {
    return build_triangulation({1, 1, 1}, {{{0, 0}, {2, 3}},
                                           {{0, 1}, {2, 2}},
                                           {{0, 2}, {1, 3}},
                                           {{0, 3}, {1, 0}},
                                           {{1, 1}, {2, 0}},
                                           {{1, 2}, {2, 1}}});
}

}  // namespace

TEST_CASE("edge weights of the regular figure eight shape") {
    auto t = fig8();
    ShapeAssignment s;
    s.angles = {{1.0 / 3, 1.0 / 3, 1.0 / 3}, {1.0 / 3, 1.0 / 3, 1.0 / 3}};
    auto w = edge_weights(t, s);
    REQUIRE(w.weights.size() == 2);
    CHECK(w.weights[0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(w.weights[1] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("weight coefficient rows sum to edge valence") {
    for (auto* tri : {new Triangulation(fig8()), new Triangulation(five2())}) {
        auto c = edge_weight_coeffs(*tri);
        const auto& cells = tri->cells();
        for (size_t e = 0; e < c.size(); ++e) {
            int total = 0;
            for (int v : c[e]) total += v;
            CHECK(total == (int)cells.edge_members[e].size());
        }
        delete tri;
    }
}

TEST_CASE("balanced space dimensions") {
    CHECK(balanced_space(fig8()).dimension == 3);
    CHECK(balanced_space(five2()).dimension == 4);
}

TEST_CASE("five2 balance equations reduce to the closed form") {
    // with (a_i, b_i, c_i) the slot angles of tetrahedron i and the sums
    // a_i+b_i+c_i = 1 imposed, balance of all three edges is equivalent to
    // 2 a_3 = a_1 + c_2 and b_3 = c_1 + b_2 (indices here 1-based)
    auto tri = five2();
    auto coeffs = edge_weight_coeffs(tri);
    REQUIRE(coeffs.size() == 3);

    std::vector<std::vector<Rat>> rows;  // homogeneous system in (x, 1)
    auto push = [&](const std::vector<int>& c, int rhs) {
        std::vector<Rat> r(10);
        for (int j = 0; j < 9; ++j) r[j] = c[j];
        r[9] = -rhs;
        rows.push_back(r);
    };
    for (const auto& c : coeffs) push(c, 2);
    for (int t = 0; t < 3; ++t) {
        std::vector<int> c(9, 0);
        c[3 * t] = c[3 * t + 1] = c[3 * t + 2] = 1;
        push(c, 1);
    }
    int base = rational_rank(rows);

    // 2 a_3 - a_1 - c_2 = 0
    std::vector<Rat> eq1(10);
    eq1[6] = 2;
    eq1[0] = -1;
    eq1[5] = -1;
    // b_3 - c_1 - b_2 = 0
    std::vector<Rat> eq2(10);
    eq2[7] = 1;
    eq2[2] = -1;
    eq2[4] = -1;

    auto with1 = rows;
    with1.push_back(eq1);
    auto with2 = rows;
    with2.push_back(eq2);
    CHECK(rational_rank(with1) == base);
    CHECK(rational_rank(with2) == base);

    // conversely the two equations plus the unit sums imply all balances:
    // the third balance row is redundant given the first two
    std::vector<std::vector<Rat>> small;
    auto push_s = [&](const std::vector<Rat>& r) { small.push_back(r); };
    push_s(eq1);
    push_s(eq2);
    for (int t = 0; t < 3; ++t) {
        std::vector<Rat> r(10);
        r[3 * t] = r[3 * t + 1] = r[3 * t + 2] = 1;
        r[9] = -1;
        small.push_back(r);
    }
    int small_rank = rational_rank(small);
    for (const auto& c : coeffs) {
        auto ext = small;
        std::vector<Rat> r(10);
        for (int j = 0; j < 9; ++j) r[j] = c[j];
        r[9] = -2;
        ext.push_back(r);
        CHECK(rational_rank(ext) == small_rank);
    }
    CHECK(base == small_rank);
}

TEST_CASE("solve_shape returns a positive balanced structure") {
    for (auto tri : {fig8(), five2()}) {
        auto s = solve_shape(tri);
        CHECK(s.positive());
        CHECK(s.sums_ok());
        auto w = edge_weights(tri, s);
        for (double v : w.weights) CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
    }
}

TEST_CASE("lobachevsky values") {
    CHECK(lobachevsky(0.0) == doctest::Approx(0.0));
    CHECK(lobachevsky(M_PI / 2) == doctest::Approx(0.0).epsilon(1e-14));
    // maximum at pi/6
    CHECK(lobachevsky(M_PI / 6) == doctest::Approx(0.5074708032).epsilon(1e-9));
    CHECK(lobachevsky(M_PI / 3) == doctest::Approx(0.3383138688).epsilon(1e-9));
    // odd and pi-periodic
    CHECK(lobachevsky(-0.4) == doctest::Approx(-lobachevsky(0.4)).epsilon(1e-13));
    CHECK(lobachevsky(0.4 + M_PI) == doctest::Approx(lobachevsky(0.4)).epsilon(1e-12));
    CHECK(lobachevsky_deriv(0.7) == doctest::Approx(-std::log(2 * std::sin(0.7))).epsilon(1e-12));
}

TEST_CASE("volume maximization figure eight") {
    auto r = maximize_volume(fig8());
    CHECK(r.volume == doctest::Approx(2.029883212819).epsilon(1e-9));
    CHECK(r.kkt_residual <= 1e-8);
    for (const auto& a : r.shape.angles)
        for (int j = 0; j < 3; ++j) CHECK(std::abs(a[j] - 1.0 / 3) <= 1e-8);
}

TEST_CASE("volume maximization five2") {
    auto r = maximize_volume(five2());
    CHECK(r.volume == doctest::Approx(2.8281220883).epsilon(1e-7));
    CHECK(r.kkt_residual <= 1e-8);
}
