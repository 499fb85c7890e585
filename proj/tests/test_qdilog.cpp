#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>

#include "doctest.h"
#include "tqft/errors.hpp"
#include "tqft/qdilog.hpp"

using namespace tqft;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("parameter map") {
    auto p1 = QDilogParams::from_b(1.0);
    CHECK(p1.hbar == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(p1.cb == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p1.h == doctest::Approx(1.0).epsilon(1e-15));

    auto p2 = QDilogParams::from_b(2.0);
    CHECK(p2.hbar == doctest::Approx(4.0 / 25.0).epsilon(1e-15));
    CHECK(p2.h == doctest::Approx(1.25).epsilon(1e-15));

    auto ph = QDilogParams::from_b(0.5);
    CHECK(ph.b == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(ph.hbar == doctest::Approx(p2.hbar).epsilon(1e-15));

    CHECK_THROWS_AS(QDilogParams::from_b(0.0), NonPositiveB);
    CHECK_THROWS_AS(QDilogParams::from_b(-1.0), NonPositiveB);
}

TEST_CASE("functional equation at the origin") {
    PhiEvaluator phi(QDilogParams::from_b(1.0));
    // Phi(-i/2) / Phi(i/2) = 1 + e^0 = 2
    Cplx r = phi(Cplx(0, -0.5)) / phi(Cplx(0, 0.5));
    CHECK(std::abs(r - 2.0) <= 1e-11);
}

TEST_CASE("functional equations on a grid") {
    for (double b : {1.0, 1.2}) {
        PhiEvaluator phi(QDilogParams::from_b(b));
        double h = phi.params().h;
        for (double step : {b, 1.0 / b}) {
            for (double re = -2.0; re <= 2.0; re += 0.5) {
                for (double im = -0.4 * h; im <= 0.4 * h; im += 0.1 * h) {
                    Cplx z(re, im);
                    Cplx lhs = phi(z - Cplx(0, step / 2));
                    Cplx rhs = (1.0 + std::exp(2.0 * kPi * step * z)) *
                               phi(z + Cplx(0, step / 2));
                    CHECK(std::abs(lhs - rhs) / std::abs(lhs) <= 1e-10);
                }
            }
        }
    }
}

TEST_CASE("unitarity on the real line") {
    for (double b : {1.0, 1.2}) {
        PhiEvaluator phi(QDilogParams::from_b(b));
        for (double x = -5.0; x <= 5.0; x += 0.25) {
            CHECK(std::abs(std::abs(phi(Cplx(x, 0))) - 1.0) <= 1e-10);
        }
    }
}

TEST_CASE("b and 1/b give the same function") {
    PhiEvaluator p1(QDilogParams::from_b(1.3));
    PhiEvaluator p2(QDilogParams::from_b(1.0 / 1.3));
    for (double re = -2.0; re <= 2.0; re += 0.7) {
        for (double im = -0.8; im <= 0.8; im += 0.4) {
            Cplx z(re, im);
            CHECK(std::abs(p1(z) - p2(z)) <= 1e-11 * std::abs(p1(z)));
        }
    }
}

TEST_CASE("inversion relation") {
    for (double b : {1.0, 1.4}) {
        auto p = QDilogParams::from_b(b);
        PhiEvaluator phi(p);
        Cplx cst = std::exp(Cplx(0, kPi * (b * b + 1.0 / (b * b)) / 12.0));
        for (Cplx z : {Cplx(0.4, 0.2), Cplx(-1.1, -0.5), Cplx(2.0, 0.9)}) {
            Cplx lhs = phi(z) * phi(-z);
            Cplx rhs = cst * std::exp(Cplx(0, kPi) * z * z);
            CHECK(std::abs(lhs - rhs) / std::abs(rhs) <= 1e-10);
        }
    }
}

TEST_CASE("complex conjugation symmetry") {
    PhiEvaluator phi(QDilogParams::from_b(1.1));
    for (Cplx z : {Cplx(0.3, 0.4), Cplx(-0.9, 0.25), Cplx(1.7, -0.6)}) {
        Cplx a = phi.log_phi(std::conj(z));
        Cplx b = -std::conj(phi.log_phi(z));
        CHECK(std::abs(a - b) <= 1e-11 * (1.0 + std::abs(a)));
    }
}

TEST_CASE("frozen point value") {
    PhiEvaluator phi(QDilogParams::from_b(1.0));
    Cplx v = phi(Cplx(0.3, 0.1));
    CHECK(v.real() == doctest::Approx(0.6091696839025551).epsilon(1e-11));
    CHECK(v.imag() == doctest::Approx(0.5206429447997967).epsilon(1e-11));
}

TEST_CASE("pole proximity is detected") {
    auto p = QDilogParams::from_b(1.0);
    PhiEvaluator phi(p);
    // poles of Phi_b at z = c_b + i m b + i n / b sit on the positive
    // imaginary axis for b = 1
    CHECK_THROWS_AS(phi(Cplx(0.0, p.cb)), PoleProximity);
}

TEST_CASE("line cache matches direct evaluation") {
    PhiEvaluator phi(QDilogParams::from_b(1.0));
    for (double im : {0.25, -0.4, 1.6}) {
        PhiLineCache cache(phi, im, -8.0, 8.0);
        for (double x = -7.9; x < 8.0; x += 0.437) {
            // log values may differ by 2 pi i (the cache unwraps along the line)
            Cplx a = std::exp(cache.log_phi(x));
            Cplx b = std::exp(phi.log_phi(Cplx(x, im)));
            CHECK(std::abs(a - b) <= 1e-10 * std::abs(b));
        }
    }
}
