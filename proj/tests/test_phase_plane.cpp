#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "yamabe/phase_plane.hpp"

using namespace yamabe;
using namespace yamabe::phase;

TEST_CASE("derived constants of the reduced problem") {
    OdeParams p4(4);
    CHECK(p4.u0() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(p4.T0() == doctest::Approx(2.0 * std::acos(-1.0) / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(p4.u0() > 0.0);
    CHECK(p4.u0() < 1.0);
    OdeParams p3(3);
    CHECK(p3.u0() == doctest::Approx(std::pow(1.0 / 3.0, 0.25)).epsilon(1e-15));
}

TEST_CASE("vector field values and signs") {
    OdeParams par(4);
    auto at_eq = vector_field({par.u0(), 0.0}, par);
    CHECK(std::fabs(at_eq[0]) < 1e-15);
    CHECK(std::fabs(at_eq[1]) < 1e-14);
    auto at_one = vector_field({1.0, 0.0}, par);
    CHECK(at_one[0] == 0.0);
    CHECK(at_one[1] == doctest::Approx(-1.0).epsilon(1e-15));
    // second component negative above u0, positive below
    CHECK(vector_field({par.u0() + 0.1, 0.0}, par)[1] < 0.0);
    CHECK(vector_field({par.u0() - 0.1, 0.0}, par)[1] > 0.0);
    CHECK_THROWS_AS(vector_field({-1.0, 0.0}, par), ContractViolation);
}

TEST_CASE("hamiltonian values") {
    for (int n : {3, 4, 5, 7}) {
        OdeParams par(n);
        CHECK(hamiltonian({1.0, 0.0}, par) == doctest::Approx(0.0).epsilon(1e-15));
    }
    OdeParams p4(4);
    CHECK(hamiltonian({p4.u0(), 0.0}, p4) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(potential(p4.u0(), p4) == doctest::Approx(-0.25).epsilon(1e-14));
}

TEST_CASE("orbit properties: conservation, reversal, confinement, nesting") {
    OdeParams par(4);
    Orbit orb = integrate_orbit({0.9, 0.0}, par, 50.0, 1e-11);
    CHECK(orb.h_drift < 1e-9);

    // time-reversal symmetry u(t) = u(-t): forward and backward states agree
    double tau = period(0.9, par);
    PhasePoint fwd = advance({0.9, 0.0}, par, 0.3 * tau, 1e-12);
    PhasePoint bwd = advance({0.9, 0.0}, par, tau - 0.3 * tau, 1e-12);
    CHECK(fwd.u == doctest::Approx(bwd.u).epsilon(1e-9));
    CHECK(fwd.v == doctest::Approx(-bwd.v).epsilon(1e-8));

    // orbits stay inside the homoclinic region (0 < u < 1, H < 0)
    for (const PhasePoint& p : orb.y) {
        CHECK(p.u > 0.0);
        CHECK(p.u < 1.0);
    }

    // nesting by max radius from the center
    auto max_radius = [&](double alpha) {
        Orbit o = integrate_orbit({alpha, 0.0}, par, 15.0, 1e-11, 0.01);
        double r = 0.0;
        for (const PhasePoint& p : o.y)
            r = std::max(r, std::hypot(p.u - par.u0(), p.v));
        return r;
    };
    CHECK(max_radius(0.80) < max_radius(0.90));
    CHECK(max_radius(0.90) < max_radius(0.97));

    // homoclinic start stays on the zero level and sinks toward the origin
    Orbit hom = integrate_orbit({1.0, 0.0}, par, 15.0, 1e-12);
    CHECK(hom.h_drift < 1e-9);
    CHECK(hom.last_valid.u < 1e-4);

    // the equilibrium is stationary
    PhasePoint eq = advance({par.u0(), 0.0}, par, 5.0, 1e-12);
    CHECK(eq.u == doctest::Approx(par.u0()).epsilon(1e-12));
    CHECK(std::fabs(eq.v) < 1e-12);
}

TEST_CASE("cross-integrator oracle: adaptive vs fixed-step RK4") {
    OdeParams par(4);
    PhasePoint adaptive = advance({0.9, 0.0}, par, 5.0, 1e-12);
    // independent fixed-step classical RK4
    double u = 0.9, v = 0.0;
    const int steps = 200000;
    const double h = 5.0 / steps;
    auto f = [&](double uu, double vv, double& du, double& dv) {
        du = vv;
        dv = ((par.n - 2.0) * (par.n - 2.0) * uu -
              par.n * (par.n - 2.0) * std::pow(uu, par.exponent())) /
             4.0;
    };
    for (int i = 0; i < steps; ++i) {
        double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
        f(u, v, k1u, k1v);
        f(u + 0.5 * h * k1u, v + 0.5 * h * k1v, k2u, k2v);
        f(u + 0.5 * h * k2u, v + 0.5 * h * k2v, k3u, k3v);
        f(u + h * k3u, v + h * k3v, k4u, k4v);
        u += h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
        v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    }
    CHECK(adaptive.u == doctest::Approx(u).epsilon(1e-8));
    CHECK(adaptive.v == doctest::Approx(v).epsilon(1e-8));
}

TEST_CASE("explicit solutions solve the factor equation") {
    for (int n : {3, 4, 5, 6}) {
        OdeParams par(n);
        CHECK(explicit_solution_residual(par, ExplicitSolution::constant) < 1e-12);
        CHECK(explicit_solution_residual(par, ExplicitSolution::spherical) < 1e-10);
    }
    // finite-difference cross-check of the closed-form second derivative
    OdeParams p4(4);
    auto u1 = [](double t) { return 1.0 / std::cosh(t); };
    double t0 = 0.7, h = 1e-5;
    double upp_fd = (u1(t0 + h) - 2.0 * u1(t0) + u1(t0 - h)) / (h * h);
    double res = 4.0 * upp_fd - 4.0 * u1(t0) + 8.0 * std::pow(u1(t0), 3.0);
    CHECK(std::fabs(res) < 1e-5);
}

TEST_CASE("period function: values, limits, domain") {
    OdeParams par(4);
    CHECK_THROWS_AS(period(0.5, par), ContractViolation);
    CHECK_THROWS_AS(period(1.1, par), ContractViolation);

    // near the center the period approaches T0
    CHECK(period(par.u0() + 1e-4, par) == doctest::Approx(par.T0()).epsilon(1e-3));
    CHECK(period_limit_at_u0(par) == doctest::Approx(par.T0()).epsilon(1e-6));

    // divergence trend toward the homoclinic end
    double t4 = period_quadrature(beta_of_alpha(1.0 - 1e-4, par), par);
    double t6 = period_quadrature(beta_of_alpha(1.0 - 1e-6, par), par);
    double t8 = period_quadrature(beta_of_alpha(1.0 - 1e-8, par), par);
    CHECK(t4 < t6);
    CHECK(t6 < t8);
    CHECK(t8 > 4.5 * par.T0());
    // regression anchor for the measured near-homoclinic period
    CHECK(t8 == doctest::Approx(20.5001).epsilon(1e-4));
}

TEST_CASE("turning points and the height parametrization") {
    OdeParams par(4);
    double beta = 0.5 * beta_max(par);
    TurningPoints tp = turning_points(beta, par);
    CHECK(tp.z_minus > 0.0);
    CHECK(tp.z_minus < par.u0());
    CHECK(tp.z_plus > par.u0());
    CHECK(tp.z_plus < 1.0);
    // the bijection alpha = z_plus(beta(alpha))
    double alpha = 0.85;
    TurningPoints tp2 = turning_points(beta_of_alpha(alpha, par), par);
    CHECK(tp2.z_plus == doctest::Approx(alpha).epsilon(1e-12));
    CHECK_THROWS_AS(turning_points(beta_max(par) * 1.01, par), ContractViolation);
}

TEST_CASE("width convexity diagnostics") {
    for (int n : {3, 4, 5, 6, 7, 8}) {
        ConvexityReport rep = width_convexity_report(OdeParams(n), 30);
        CHECK(rep.A < 0.0);
        CHECK(rep.min_second_diff >= -1e-6);
        CHECK(rep.tau_increasing);
    }
}

TEST_CASE("constant-scalar-curvature branch enumeration") {
    OdeParams par(4);
    const double T0 = par.T0();
    CHECK(csc_enumerate(T0, par).empty());          // only the constant branch
    auto one = csc_enumerate(1.5 * T0, par);        // a single k = 1 branch
    REQUIRE(one.size() == 1);
    CHECK(one[0].k == 1);
    CHECK(one[0].tau == doctest::Approx(1.5 * T0).epsilon(1e-9));
    // confirm by flowing the found amplitude through the event-detected period
    CHECK(period(one[0].alpha, par) == doctest::Approx(1.5 * T0).epsilon(1e-7));

    auto two = csc_enumerate(2.5 * T0, par);        // k = 1 and k = 2
    REQUIRE(two.size() == 2);
    CHECK(two[0].k == 1);
    CHECK(two[1].k == 2);
    CHECK(two[0].tau == doctest::Approx(2.5 * T0).epsilon(1e-9));
    CHECK(two[1].tau == doctest::Approx(1.25 * T0).epsilon(1e-9));
    CHECK_THROWS_AS(csc_enumerate(-1.0, par), ContractViolation);
}
