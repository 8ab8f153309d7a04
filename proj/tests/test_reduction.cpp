#include <doctest.h>

#include <cmath>

#include "yamabe/geometry.hpp"
#include "yamabe/grid.hpp"
#include "yamabe/reduction.hpp"

using namespace yamabe;
using namespace yamabe::reduce;

namespace {
ManifoldSpec critical_spec(int m = 64) {
    return ManifoldSpec(4, critical_circumference(4), m);
}
}  // namespace

TEST_CASE("kernel basis construction") {
    {
        KernelBasis kb = build_kernel_basis(critical_spec(), Sector::even);
        REQUIRE(kb.dim() == 1);
        CHECK(kb.freqs[0] == 1);
        CHECK(norm_l2(kb.basis[0]) == doctest::Approx(1.0).epsilon(1e-12));
    }
    {
        KernelBasis kb = build_kernel_basis(critical_spec(), Sector::full);
        REQUIRE(kb.dim() == 2);
        CHECK(norm_l2(kb.basis[1]) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::fabs(inner(kb.basis[0], kb.basis[1])) < 1e-12);
    }
    {  // non-degenerate geometry has no kernel
        KernelBasis kb = build_kernel_basis(ManifoldSpec(4, 3.0, 64), Sector::even);
        CHECK(kb.dim() == 0);
    }
}

TEST_CASE("reduction solve: base point and correction scaling") {
    LsSolver solver(critical_spec());
    {
        ReducedSample s0 = solver.solve_phi({0.0});
        CHECK(norm_c0(s0.phi) < 1e-12);
        CHECK(s0.F_value == doctest::Approx(solver.F_at_zero()).epsilon(1e-13));
    }
    {  // ||Phi(v)|| = O(||v||^2): ratio stable on a geometric sweep
        double prev_ratio = 0.0;
        for (double s : {0.02, 0.04, 0.08}) {
            ReducedSample smp = solver.solve_phi({s});
            double ratio = norm_l2(smp.phi) / (s * s);
            if (prev_ratio != 0.0)
                CHECK(ratio == doctest::Approx(prev_ratio).epsilon(0.15));
            prev_ratio = ratio;
        }
    }
    {  // orthogonality and volume pinning
        ReducedSample smp = solver.solve_phi({0.05});
        CHECK(std::fabs(inner(smp.phi, solver.kernel().basis[0])) < 1e-9);
        CHECK(geom::volume(smp.psi) ==
              doctest::Approx(solver.spec().reference_volume()).epsilon(1e-9));
        CHECK(smp.newton_residual < solver.newton_tol());
    }
    CHECK_THROWS_AS(solver.solve_phi({0.5}), ContractViolation);  // smallness cap
}

TEST_CASE("reduced gradient: projection identity vs finite differences") {
    LsSolver solver(critical_spec());
    ReducedSample smp = solver.solve_phi({0.05});
    double df = solver.reduced_dF(smp)[0];
    double eps = 1e-3;
    double fd2 = (solver.reduced_F({0.05 + eps}) - solver.reduced_F({0.05 - eps})) /
                 (2.0 * eps);
    double eps2 = 5e-4;
    double fd1 = (solver.reduced_F({0.05 + eps2}) - solver.reduced_F({0.05 - eps2})) /
                 (2.0 * eps2);
    // second-order central differences: error drops by ~4 when eps halves
    double e_big = std::fabs(fd2 - df), e_small = std::fabs(fd1 - df);
    CHECK(e_small < 0.5 * e_big);
    CHECK(df == doctest::Approx(fd1).epsilon(1e-4));
}

TEST_CASE("first two derivative orders of F vanish") {
    LsSolver solver(critical_spec());
    double df0 = solver.reduced_dF(solver.solve_phi({0.0}))[0];
    CHECK(std::fabs(df0) < 1e-10);
    // second difference scales out: D2(s)/s^2 -> 0 quadratically
    double d2a = solver.reduced_F({0.04}) - 2 * solver.F_at_zero() +
                 solver.reduced_F({-0.04});
    double d2b = solver.reduced_F({0.02}) - 2 * solver.F_at_zero() +
                 solver.reduced_F({-0.02});
    CHECK(std::fabs(d2b) < 0.1 * std::fabs(d2a));  // quartic: factor 16
}

TEST_CASE("order fit on the degenerate product") {
    LsSolver solver(critical_spec());
    OrderFit fit = fit_order(solver);
    CHECK(!fit.integrable_within_tolerance);
    CHECK(fit.p == 4);
    CHECK(fit.p_hat == doctest::Approx(4.0).epsilon(0.02));
    CHECK(fit.as_condition);
    CHECK(fit.F_p_hat_v > 0.0);
    CHECK(fit.even_defect < 10.0 * solver.f_noise_estimate());
    for (double d : fit.sampled_dF) CHECK(d > 0.0);
}

TEST_CASE("full-sector reduction is rotation invariant") {
    LsSolver solver(critical_spec(), Sector::full);
    REQUIRE(solver.kernel().dim() == 2);
    double s = 0.05;
    double f0 = solver.reduced_F({s, 0.0});
    double f45 = solver.reduced_F({s * std::sqrt(0.5), s * std::sqrt(0.5)});
    double f90 = solver.reduced_F({0.0, s});
    CHECK(f0 == doctest::Approx(f45).epsilon(1e-10));
    CHECK(f0 == doctest::Approx(f90).epsilon(1e-10));
}

TEST_CASE("cubic forms: scaling, symmetry, and the two vanishing routes") {
    ManifoldSpec spec = critical_spec();
    const double w0 = 2.0 * std::acos(-1.0) / spec.T;
    GridFn a(spec), b(spec), c(spec);
    for (int j = 0; j < spec.m; ++j) {
        a[j] = std::cos(w0 * spec.node(j));
        b[j] = std::cos(2.0 * w0 * spec.node(j));
        c[j] = std::cos(3.0 * w0 * spec.node(j));
    }
    // cubic homogeneity of the closed form
    GridFn a2(spec);
    for (int j = 0; j < spec.m; ++j) a2[j] = 2.0 * a[j];
    CHECK(cubic_closed(a2, a2, a2) == doctest::Approx(8.0 * cubic_closed(a, a, a)));
    // symmetry in the arguments
    CHECK(cubic_closed(a, b, c) == doctest::Approx(cubic_closed(c, a, b)).epsilon(1e-14));
    // non-resonant triple vanishes, resonant does not
    CHECK(std::fabs(cubic_closed(a, a, c)) < 1e-10);
    CHECK(std::fabs(cubic_closed(a, b, c)) > 1.0);  // 1+2=3 resonance
    // the kernel direction through the reduction
    LsSolver solver(spec);
    CHECK(std::fabs(cubic_fd_reduced(solver, {1.0}, 0.05)) < 1e-5);
}

TEST_CASE("gradient-inequality sampling api") {
    LsSolver solver(critical_spec());
    LojasiewiczReport rep = lojasiewicz_check(solver, 0.25, 0.1, 40);
    CHECK(rep.samples.size() > 20);
    CHECK(rep.max_ratio > 0.0);
    CHECK(rep.max_ratio < 1e6);
    // with the matched exponent the ratio is flat in s
    CHECK(std::fabs(rep.loglog_slope) < 0.2);
}
