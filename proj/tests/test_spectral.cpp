#include <doctest.h>

#include <cmath>
#include <numbers>

#include "yamabe/geometry.hpp"
#include "yamabe/grid.hpp"
#include "yamabe/spectral.hpp"

using namespace yamabe;
using namespace yamabe::modes;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("sphere harmonic multiplicities") {
    // S^3: dimension of degree-l harmonics is (l+1)^2
    for (int l = 0; l <= 5; ++l) CHECK(sphere_multiplicity(4, l) == (l + 1) * (l + 1));
    // S^2: 2l + 1
    for (int l = 0; l <= 5; ++l) CHECK(sphere_multiplicity(3, l) == 2 * l + 1);
}

TEST_CASE("product spectrum arithmetic") {
    ManifoldSpec spec(4, critical_circumference(4), 64);
    auto modes = laplace_spectrum(spec, 12.0);
    REQUIRE(!modes.empty());
    CHECK(modes[0].k == 0);
    CHECK(modes[0].l == 0);
    CHECK(modes[0].lam == 0.0);
    CHECK(modes[0].mult == 1);
    // the circle mode at the critical circumference sits exactly at n-2
    bool found = false;
    for (const EigenMode& m : modes)
        if (m.k == 1 && m.l == 0) {
            found = true;
            CHECK(m.lam == doctest::Approx(2.0).epsilon(1e-14));
            CHECK(m.mult == 2);
        }
    CHECK(found);
    // first sphere modes: lam contribution l(l+2) = 3 with multiplicity 4
    for (const EigenMode& m : modes)
        if (m.k == 0 && m.l == 1) {
            CHECK(m.lam == doctest::Approx(3.0));
            CHECK(m.mult == 4);
        }
}

TEST_CASE("kernel dimension across circumferences") {
    {  // critical circumference: two circle modes, one in the even sector
        ManifoldSpec spec(4, critical_circumference(4), 64);
        KernelInfo k = kernel_dimension(spec);
        CHECK(k.dim == 2);
        CHECK(k.even_dim == 1);
    }
    {  // off-critical: none
        ManifoldSpec spec(4, 3.0, 64);
        CHECK(kernel_dimension(spec).dim == 0);
    }
    {  // doubled circumference: the k = 2 mode is degenerate
        ManifoldSpec spec(4, 2.0 * critical_circumference(4), 64);
        KernelInfo k = kernel_dimension(spec);
        CHECK(k.dim == 2);
        REQUIRE(!k.modes.empty());
        CHECK(k.modes[0].k == 2);
    }
}

TEST_CASE("linearized spectrum and decay-rate prediction") {
    {
        ManifoldSpec spec(4, 3.0, 64);
        LinearizedSpectrum ls = linearized_spectrum(spec, 8);
        CHECK(!ls.degenerate);
        double w = 2.0 * kPi / 3.0;
        CHECK(ls.predicted_rate == doctest::Approx(3.0 * (w * w - 2.0)).epsilon(1e-12));
        CHECK(ls.predicted_rate == doctest::Approx(7.1595).epsilon(1e-4));
    }
    {
        ManifoldSpec spec(4, critical_circumference(4), 64);
        LinearizedSpectrum ls = linearized_spectrum(spec, 8);
        CHECK(ls.degenerate);
        // constant mode has mu = R_inf > 0
        bool const_up = false;
        for (const EigenMode& m : ls.modes)
            if (m.k == 0 && m.l == 0)
                const_up = label_of(m.mu) == SpectralLabel::up &&
                           m.mu == doctest::Approx(6.0);
        CHECK(const_up);
    }
}

TEST_CASE("discrete operator check against the mode table") {
    // applying (n-1) d^2/dt^2 + R_inf to a circle mode on the grid reproduces
    // mu times the mode
    ManifoldSpec spec(4, 2.7, 128);
    const double w0 = 2.0 * kPi / spec.T;
    for (int k : {1, 2, 5}) {
        GridFn f(spec);
        for (int j = 0; j < spec.m; ++j) f[j] = std::cos(w0 * k * spec.node(j));
        GridFn fpp = second_derivative(f);
        double mu = spec.scalar_curvature() - (spec.n - 1) * (w0 * k) * (w0 * k);
        double worst = 0.0;
        for (int j = 0; j < spec.m; ++j) {
            double op = (spec.n - 1) * fpp[j] + spec.scalar_curvature() * f[j];
            worst = std::max(worst, std::fabs(op - mu * f[j]));
        }
        CHECK(worst < 1e-10 * std::max(1.0, std::fabs(mu)));
    }
}

TEST_CASE("seeded rng: determinism and shard independence") {
    Rng a(42), b(42), c(43);
    for (int i = 0; i < 100; ++i) {
        auto x = a.next_u64();
        CHECK(x == b.next_u64());
    }
    bool differs = false;
    Rng a2(42);
    for (int i = 0; i < 10; ++i)
        if (a2.next_u64() != c.next_u64()) differs = true;
    CHECK(differs);

    Rng s0 = Rng::shard(7, 0), s1 = Rng::shard(7, 1);
    bool shard_differs = false;
    for (int i = 0; i < 10; ++i)
        if (s0.next_u64() != s1.next_u64()) shard_differs = true;
    CHECK(shard_differs);

    // normals have roughly unit variance (sanity, fixed seed)
    Rng g(99);
    double s = 0, ss = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        double x = g.next_normal();
        s += x;
        ss += x * x;
    }
    CHECK(std::fabs(s / n) < 0.02);
    CHECK(ss / n == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("monte carlo estimates: controls and convergence") {
    const std::uint64_t seed = 2024;
    MonteCarloEstimate h3 = cpn_cubic_integral(2, 200000, seed);
    CHECK(std::fabs(h3.value) > 3.0 * h3.std_error);
    // exact first moment of h^3 over the sphere: 12 E[x1 x2 x3] * area with
    // (x_i) Dirichlet(1,..,1) over 3 complex coordinates -> 12/60 * area
    double exact = 12.0 / 60.0 * sphere_area(5);
    CHECK(h3.value == doctest::Approx(exact).epsilon(0.05));

    MonteCarloEstimate mean_h = cpn_mean_of_h(2, 200000, seed + 5);
    CHECK(std::fabs(mean_h.value) <= 3.0 * mean_h.std_error);

    MonteCarloEstimate anti = cpn_cubic_antisymmetric_control(2, 200000, seed + 6);
    CHECK(std::fabs(anti.value) <= 3.0 * anti.std_error);

    // 1/sqrt(samples) scaling: quadrupling the samples halves the std error
    MonteCarloEstimate small = cpn_cubic_integral(2, 100000, seed + 7);
    MonteCarloEstimate big = cpn_cubic_integral(2, 400000, seed + 8);
    CHECK(small.std_error / big.std_error == doctest::Approx(2.0).epsilon(0.2));

    CHECK_THROWS_AS(cpn_cubic_integral(1, 100000, seed), ContractViolation);
    CHECK_THROWS_AS(cpn_cubic_integral(2, 100, seed), ContractViolation);
}

TEST_CASE("spectrum csv shape") {
    ManifoldSpec spec(4, 3.0, 64);
    std::string csv = spectrum_csv(laplace_spectrum(spec, 10.0));
    CHECK(csv.rfind("k,l,lam,mu,mult,label\n", 0) == 0);
    CHECK(csv.find("zero") == std::string::npos);  // non-degenerate geometry
}
