#include <doctest.h>

#include <cmath>
#include <numbers>

#include "yamabe/geometry.hpp"
#include "yamabe/grid.hpp"
#include "yamabe/kernels.hpp"

using namespace yamabe;

namespace {
constexpr double kPi = std::numbers::pi;

GridFn cosine(const ManifoldSpec& spec, double base, double amp, int k) {
    GridFn u(spec);
    const double w0 = 2.0 * kPi / spec.T;
    for (int j = 0; j < spec.m; ++j)
        u[j] = base + amp * std::cos(w0 * k * spec.node(j));
    return u;
}
}  // namespace

TEST_CASE("volume of simple factors") {
    {  // unit factor, n=4, T=1: omega_3 * 1 = 2 pi^2
        ManifoldSpec spec(4, 1.0, 64);
        CHECK(geom::volume(GridFn(spec, 1.0)) ==
              doctest::Approx(2.0 * kPi * kPi).epsilon(1e-13));
    }
    {  // constant 0.5, n=4: omega_3 * T * 0.0625
        ManifoldSpec spec(4, 2.0, 64);
        CHECK(geom::volume(GridFn(spec, 0.5)) ==
              doctest::Approx(2.0 * kPi * kPi * 2.0 * 0.0625).epsilon(1e-13));
    }
    {  // smooth factor vs high-resolution quadrature oracle
        ManifoldSpec spec(4, 2.0 * kPi, 64);
        GridFn u = cosine(spec, 1.0, 0.1, 1);
        ManifoldSpec fine(4, 2.0 * kPi, 4096);
        GridFn uf = cosine(fine, 1.0, 0.1, 1);
        CHECK(geom::volume(u) ==
              doctest::Approx(geom::volume(uf)).epsilon(1e-10));
    }
}

TEST_CASE("conformal scalar curvature") {
    {  // identity factor: R_inf everywhere
        ManifoldSpec spec(5, 2.0, 64);
        GridFn R = geom::conformal_scalar_curvature(GridFn(spec, 1.0));
        for (int j = 0; j < spec.m; ++j)
            CHECK(R[j] == doctest::Approx(12.0).epsilon(1e-12));
    }
    {  // constant factor c: R_inf c^{2-N}
        ManifoldSpec spec(4, 2.0, 64);
        GridFn R = geom::conformal_scalar_curvature(GridFn(spec, 0.7));
        for (int j = 0; j < spec.m; ++j)
            CHECK(R[j] == doctest::Approx(6.0 * std::pow(0.7, -2.0)).epsilon(1e-12));
    }
    {  // sphere-patch factor on a long cylinder: R = n(n-1) in the interior.
        // The u^{1-N} factor amplifies absolute spectral noise by u^{-3}, so
        // the checkable window is where u is not yet exponentially small.
        ManifoldSpec spec(4, 40.0, 1024);
        GridFn u(spec);
        for (int j = 0; j < spec.m; ++j)
            u[j] = 1.0 / std::cosh(spec.node(j) - 20.0);
        GridFn R = geom::conformal_scalar_curvature(u);
        double worst4 = 0.0, worst8 = 0.0;
        for (int j = 0; j < spec.m; ++j) {
            double d = std::fabs(spec.node(j) - 20.0);
            if (d < 4.0) worst4 = std::max(worst4, std::fabs(R[j] - 12.0));
            if (d < 8.0) worst8 = std::max(worst8, std::fabs(R[j] - 12.0));
        }
        CHECK(worst4 < 1e-6);
        CHECK(worst8 < 1e-2 * 12.0);  // still within 1% further out
    }
}

TEST_CASE("yamabe energy") {
    {  // closed form at the product metric: R_inf * Vol^{2/n}
        ManifoldSpec spec(4, critical_circumference(4), 64);
        double expected = 6.0 * std::sqrt(spec.reference_volume());
        CHECK(geom::yamabe_energy(GridFn(spec, 1.0)) ==
              doctest::Approx(expected).epsilon(1e-13));
        CHECK(expected == doctest::Approx(56.19).epsilon(1e-4));
    }
    {  // scale invariance
        ManifoldSpec spec(4, 3.0, 64);
        GridFn u = cosine(spec, 1.0, 0.07, 2);
        GridFn u2(spec);
        kern::scale(2.0, u.v, u2.v);
        CHECK(geom::yamabe_energy(u2) ==
              doctest::Approx(geom::yamabe_energy(u)).epsilon(1e-12));
        GridFn u3(spec);
        kern::scale(17.3, u.v, u3.v);
        CHECK(geom::yamabe_energy(u3) ==
              doctest::Approx(geom::yamabe_energy(u)).epsilon(1e-12));
    }
    {  // the degenerate product is the minimum in its class
        ManifoldSpec spec(4, critical_circumference(4), 64);
        GridFn u = cosine(spec, 1.0, 0.05, 1);
        CHECK(geom::yamabe_energy(u) > geom::yamabe_energy(GridFn(spec, 1.0)));
    }
}

TEST_CASE("average scalar curvature") {
    ManifoldSpec spec(4, critical_circumference(4), 64);
    CHECK(geom::average_scalar(GridFn(spec, 1.0)) == doctest::Approx(6.0).epsilon(1e-13));
    CHECK(geom::average_scalar(GridFn(spec, 0.5)) ==
          doctest::Approx(6.0 * std::pow(0.5, -2.0)).epsilon(1e-13));
    // r equals the energy at absolute unit volume
    GridFn u = geom::normalize_volume(cosine(spec, 1.0, 0.05, 1));
    CHECK(std::fabs(geom::average_scalar(u) - geom::yamabe_energy(u)) < 1e-10);
}

TEST_CASE("gradient at critical points and the two formula routes") {
    ManifoldSpec spec(4, 3.0, 64);
    {  // any constant is scalar-flat for the constrained gradient
        GridFn g = geom::gradient_raw(GridFn(spec, 0.83));
        CHECK(norm_c0(g) < 1e-12);
    }
    {  // unit-volume contract enforced
        CHECK_THROWS_AS(geom::dy_gradient(GridFn(spec, 1.0)), ContractViolation);
        CHECK_NOTHROW(geom::dy_gradient(geom::normalize_volume(GridFn(spec, 1.0))));
    }
    {  // gradient equals 2 (R - r) u^{N-1} computed through the curvature
        ManifoldSpec wide(4, 40.0, 512);
        GridFn u(wide);
        for (int j = 0; j < wide.m; ++j)
            u[j] = 0.2 + 1.0 / std::cosh(wide.node(j) - 20.0);
        u = geom::normalize_volume(u);
        GridFn g = geom::dy_gradient(u);
        GridFn R = geom::conformal_scalar_curvature(u);
        double r = geom::average_scalar(u);
        const double N = wide.conformal_exponent();
        double worst = 0.0;
        for (int j = 0; j < wide.m; ++j) {
            double alt = 2.0 * (R[j] - r) * std::pow(u[j], N - 1.0);
            worst = std::max(worst, std::fabs(alt - g[j]));
        }
        CHECK(worst < 1e-10 * norm_c0(g));
    }
}

TEST_CASE("volume normalization") {
    ManifoldSpec spec(4, 1.0, 64);
    {  // closed form for the unit factor
        GridFn c = geom::normalize_volume(GridFn(spec, 1.0));
        double expected = std::pow(2.0 * kPi * kPi, -0.25);
        for (int j = 0; j < spec.m; ++j)
            CHECK(c[j] == doctest::Approx(expected).epsilon(1e-13));
    }
    {  // idempotence
        GridFn u = cosine(spec, 1.0, 0.1, 3);
        GridFn n1 = geom::normalize_volume(u);
        GridFn n2 = geom::normalize_volume(n1);
        CHECK(std::fabs(geom::volume(n1) - 1.0) < 1e-12);
        CHECK(kern::sup_abs_diff(n1.v, n2.v) < 1e-14);
    }
    {  // reference normalization hits the class of the unit factor
        GridFn u = cosine(spec, 2.0, 0.3, 2);
        GridFn r = geom::normalize_to_reference(u);
        CHECK(geom::volume(r) ==
              doctest::Approx(spec.reference_volume()).epsilon(1e-12));
    }
}
