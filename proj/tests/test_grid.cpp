#include <doctest.h>

#include <cmath>
#include <numbers>

#include "yamabe/grid.hpp"
#include "yamabe/spectral.hpp"

using namespace yamabe;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("manifold constants") {
    ManifoldSpec s4(4, 1.0, 64);
    CHECK(s4.conformal_exponent() == doctest::Approx(4.0));
    CHECK(s4.scalar_curvature() == doctest::Approx(6.0));
    CHECK(s4.sphere_volume() == doctest::Approx(2.0 * kPi * kPi).epsilon(1e-14));

    // N+2 = 4(n-1)/(n-2) and N-2 = 4/(n-2) as rationals, to a few ulp
    for (int n : {3, 4, 5, 6, 9}) {
        ManifoldSpec s(n, 1.0, 8);
        double N = s.conformal_exponent();
        CHECK(N + 2.0 == doctest::Approx(4.0 * (n - 1) / (n - 2)).epsilon(4e-16));
        CHECK(N - 2.0 == doctest::Approx(4.0 / (n - 2)).epsilon(4e-16));
    }

    CHECK_THROWS_AS(ManifoldSpec(2, 1.0, 64), ContractViolation);
    CHECK_THROWS_AS(ManifoldSpec(4, -1.0, 64), ContractViolation);
    CHECK_THROWS_AS(ManifoldSpec(4, 1.0, 7), ContractViolation);
    CHECK_NOTHROW(ManifoldSpec(4, 1.0, 10).validate());
}

TEST_CASE("spectral differentiation is exact on resolved modes") {
    for (int m : {64, 100}) {  // power of two and general even size
        ManifoldSpec spec(4, 2.5, m);
        const double w0 = 2.0 * kPi / spec.T;
        for (int k : {1, 3, m / 2 - 1}) {
            GridFn f(spec);
            for (int j = 0; j < m; ++j) f[j] = std::cos(w0 * k * spec.node(j));
            GridFn fpp = second_derivative(f);
            double worst = 0.0;
            for (int j = 0; j < m; ++j)
                worst = std::max(worst,
                                 std::fabs(fpp[j] + w0 * w0 * k * k * f[j]));
            CHECK(worst < 1e-10 * w0 * w0 * k * k);
        }
    }
}

TEST_CASE("periodic quadrature is exact on trigonometric polynomials") {
    ManifoldSpec spec(4, 3.0, 64);
    const double w0 = 2.0 * kPi / spec.T;
    GridFn f(spec);
    for (int j = 0; j < spec.m; ++j) {
        double t = spec.node(j);
        f[j] = 2.0 + std::cos(w0 * t) - 0.5 * std::sin(7.0 * w0 * t) +
               0.25 * std::cos(31.0 * w0 * t);
    }
    // all oscillatory terms integrate to zero; only the constant survives
    CHECK(circle_integral(f) == doctest::Approx(2.0 * spec.T).epsilon(1e-12));
}

TEST_CASE("analyze/synthesize round trip") {
    modes::Rng rng(41);
    for (int m : {16, 64}) {
        ManifoldSpec spec(5, 1.7, m);
        GridFn f(spec);
        for (int j = 0; j < m; ++j) f[j] = rng.next_normal();
        GridFn g = synthesize(spec, analyze(f));
        for (int j = 0; j < m; ++j) CHECK(g[j] == doctest::Approx(f[j]).epsilon(1e-12));
    }
}

TEST_CASE("first derivative of a product of modes") {
    ManifoldSpec spec(4, 2.0 * kPi, 128);
    GridFn f(spec);
    for (int j = 0; j < spec.m; ++j) {
        double t = spec.node(j);
        f[j] = std::sin(3.0 * t) * std::cos(2.0 * t);
    }
    GridFn fp = first_derivative(f);
    double worst = 0.0;
    for (int j = 0; j < spec.m; ++j) {
        double t = spec.node(j);
        double exact = 3.0 * std::cos(3.0 * t) * std::cos(2.0 * t) -
                       2.0 * std::sin(3.0 * t) * std::sin(2.0 * t);
        worst = std::max(worst, std::fabs(fp[j] - exact));
    }
    CHECK(worst < 1e-10);
}
