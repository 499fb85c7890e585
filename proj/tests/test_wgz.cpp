#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>

#include "doctest.h"
#include "tqft/errors.hpp"
#include "tqft/wgz.hpp"

using namespace tqft;

namespace {

constexpr double kPi = 3.14159265358979323846;

Cplx gauss(double t) { return std::exp(Cplx(-kPi * t * t, 0.4 * t)); }

}  // namespace

TEST_CASE("multiplier cocycle identity") {
    for (int m = -2; m <= 2; ++m)
        for (int n = -2; n <= 2; ++n)
            for (double x : {0.1, 0.7})
                for (double y : {0.3, 0.9}) {
                    // multiplier(m+m', n+n') factors through intermediate shifts
                    Cplx lhs = multiplier(m + 1, n, x, y);
                    Cplx rhs = multiplier(1, 0, x + m, y + n) * multiplier(m, n, x, y);
                    CHECK(std::abs(lhs - rhs) <= 1e-14);
                }
}

TEST_CASE("forward transform is quasi periodic") {
    auto g = wgz_forward(gauss, 12);
    CHECK(multiplier_check(g, 1, 0) <= 1e-10);
    CHECK(multiplier_check(g, 0, 1) <= 1e-10);
    CHECK(multiplier_check(g, 2, -1) <= 1e-10);
    CHECK(multiplier_check(g, -1, 3) <= 1e-10);
}

TEST_CASE("round trip on gaussians") {
    auto g = wgz_forward(gauss, 12);
    for (double x : {0.0, 0.2, 0.55, 0.83, 1.7, -0.4}) {
        Cplx back = wgz_inverse(g, x);
        CHECK(std::abs(back - gauss(x)) <= 1e-10);
    }
    auto gc = wgz_forward(gauss, 12, true);
    CHECK(multiplier_check(gc, 1, 1) <= 1e-10);
}

TEST_CASE("insufficient truncation is detected") {
    auto wide = [](double t) { return Cplx(std::exp(-0.01 * t * t)); };
    CHECK_THROWS_AS(wgz_forward(wide, 4), TruncationInsufficient);
}

TEST_CASE("coarse inverse grids are detected") {
    auto g = wgz_forward([](double t) { return Cplx(std::exp(-kPi * t * t / 25.0)); }, 40);
    CHECK_THROWS_AS(wgz_inverse(g, 0.3, 4), GridTooCoarse);
}

TEST_CASE("psi parameter validation") {
    PsiParams bad;
    bad.a = 0.3;
    bad.c = 0.3;  // a + c >= 1/2
    bad.q = QDilogParams::from_hbar(0.25);
    CHECK_THROWS_AS(PsiFamily{bad}, BadPsiParams);
    bad.a = -0.1;
    bad.c = 0.1;
    CHECK_THROWS_AS(PsiFamily{bad}, BadPsiParams);
}

TEST_CASE("psi frozen values") {
    PsiParams p;
    p.a = 0.125;
    p.c = 0.125;
    p.q = QDilogParams::from_hbar(0.25);
    PsiFamily fam(p);
    Cplx v = fam.psi(0.0);
    CHECK(v.real() == doctest::Approx(0.683012701892).epsilon(1e-10));
    CHECK(v.imag() == doctest::Approx(0.183012701892).epsilon(1e-10));
    // decays on both sides
    CHECK(std::abs(fam.psi(6.0)) <= 1e-4);
    CHECK(std::abs(fam.psi(-6.0)) <= 1e-4);
}

TEST_CASE("psi tilde is contour independent") {
    PsiParams p;
    p.a = 0.125;
    p.c = 0.125;
    p.q = QDilogParams::from_hbar(0.25);
    PsiFamily fam(p);
    Cplx v = fam.psi_tilde(0.7);
    CHECK(v.real() == doctest::Approx(0.0895429411818).epsilon(1e-8));
    CHECK(v.imag() == doctest::Approx(0.0673973987655).epsilon(1e-8));
    Cplx w = fam.psi_tilde(0.7, -0.11);
    CHECK(std::abs(v - w) <= 1e-9);
    Cplx u = fam.psi_tilde(0.7, 0.07);
    CHECK(std::abs(v - u) <= 1e-9);
    // the prime variant only changes the phase
    CHECK(std::abs(std::abs(fam.psi_tilde_prime(0.7)) - std::abs(v)) <= 1e-12);
}
