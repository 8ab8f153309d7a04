#include "yamabe/accept.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>

#include "yamabe/flow.hpp"
#include "yamabe/geometry.hpp"
#include "yamabe/grid.hpp"
#include "yamabe/kernels.hpp"
#include "yamabe/numerics.hpp"
#include "yamabe/phase_plane.hpp"
#include "yamabe/reduction.hpp"
#include "yamabe/slow_flow.hpp"
#include "yamabe/spectral.hpp"

namespace yamabe::accept {

namespace {

constexpr double kPi = std::numbers::pi;

struct Check {
    std::vector<std::string> details;
    bool ok = true;

    void expect(bool cond, const std::string& what) {
        ok = ok && cond;
        details.push_back(std::string(cond ? "  ok   " : "  FAIL ") + what);
    }
    template <typename... Args>
    void expectf(bool cond, const char* fmt, Args... args) {
        char buf[320];
        std::snprintf(buf, sizeof buf, fmt, args...);
        expect(cond, buf);
    }
};

GridFn cos_perturbation(const ManifoldSpec& spec, double amplitude, int freq) {
    GridFn u(spec);
    const double w0 = 2.0 * kPi / spec.T;
    for (int j = 0; j < spec.m; ++j)
        u[j] = 1.0 + amplitude * std::cos(w0 * freq * spec.node(j));
    return geom::normalize_to_reference(u);
}

// Shared flow runs (criteria 11, 12, 15 look at the same trajectories).
const flow::FlowRun& exp_regime_run() {
    static flow::FlowRun cached = [] {
        ManifoldSpec spec(4, 3.0, 64);
        flow::FlowConfig cfg;
        cfg.spec = spec;
        cfg.u0 = cos_perturbation(spec, 0.05, 1);
        cfg.t_end = 4.5;
        cfg.tol = 1e-10;
        cfg.dt_max = 0.2;
        cfg.sample_ratio = 1.03;
        cfg.store_snapshots = false;
        return flow::run(cfg);
    }();
    return cached;
}

const flow::FlowRun& poly_regime_run(int m) {
    static flow::FlowRun cached64 = [] {
        ManifoldSpec spec(4, critical_circumference(4), 64);
        flow::FlowConfig cfg;
        cfg.spec = spec;
        cfg.u0 = cos_perturbation(spec, 0.12, 1);
        cfg.t_end = 1e5;
        cfg.tol = 1e-6;
        cfg.relative_tol = true;
        cfg.dt_max = 20.0;
        cfg.sample_ratio = 1.05;
        cfg.store_snapshots = false;
        return flow::run(cfg);
    }();
    static flow::FlowRun cached128 = [] {
        ManifoldSpec spec(4, critical_circumference(4), 128);
        flow::FlowConfig cfg;
        cfg.spec = spec;
        cfg.u0 = cos_perturbation(spec, 0.12, 1);
        cfg.t_end = 1e5;
        cfg.tol = 1e-6;
        cfg.relative_tol = true;
        cfg.dt_max = 20.0;
        cfg.sample_ratio = 1.05;
        cfg.store_snapshots = false;
        return flow::run(cfg);
    }();
    return m == 128 ? cached128 : cached64;
}

const reduce::OrderFit& order_fit(int m) {
    static reduce::OrderFit f64 = [] {
        reduce::LsSolver solver(ManifoldSpec(4, critical_circumference(4), 64));
        return reduce::fit_order(solver);
    }();
    static reduce::OrderFit f128 = [] {
        reduce::LsSolver solver(ManifoldSpec(4, critical_circumference(4), 128));
        return reduce::fit_order(solver);
    }();
    return m == 128 ? f128 : f64;
}

// ---- criteria ----------------------------------------------------------

Check c01_explicit_solutions() {
    Check c;
    for (int n : {3, 4, 5, 6}) {
        phase::OdeParams par(n);
        double rc = phase::explicit_solution_residual(par, phase::ExplicitSolution::constant);
        double rs = phase::explicit_solution_residual(par, phase::ExplicitSolution::spherical);
        c.expectf(rc < 1e-9, "n=%d constant residual %.2e < 1e-9", n, rc);
        c.expectf(rs < 1e-9, "n=%d spherical residual %.2e < 1e-9", n, rs);
    }
    return c;
}

Check c02_hamiltonian_conservation() {
    Check c;
    for (int n : {3, 4, 5}) {
        phase::OdeParams par(n);
        double u0 = par.u0();
        double worst = 0.0;
        for (int i = 1; i <= 10; ++i) {
            double alpha = u0 + (1.0 - u0) * i / 11.0;
            phase::Orbit orb = phase::integrate_orbit({alpha, 0.0}, par, 50.0, 1e-11);
            worst = std::max(worst, orb.h_drift);
        }
        c.expectf(worst < 1e-8, "n=%d worst relative H drift %.2e < 1e-8 (10 orbits, t=50)",
                  n, worst);
    }
    return c;
}

Check c03_period_limits() {
    Check c;
    for (int n : {3, 4, 5}) {
        phase::OdeParams par(n);
        double lim = phase::period_limit_at_u0(par);
        double err = std::fabs(lim - par.T0());
        c.expectf(err < 1e-3, "n=%d extrapolated tau(u0+) err %.2e < 1e-3", n, err);
        double tau = phase::period_quadrature(phase::beta_of_alpha(1.0 - 1e-8, par), par);
        c.expectf(tau > 5.0 * par.T0(), "n=%d tau(1-1e-8) = %.4f = %.3f*T0 > 5*T0", n,
                  tau, tau / par.T0());
    }
    return c;
}

Check c04_period_monotonicity() {
    Check c;
    {
        phase::OdeParams par(4);
        phase::PeriodTable tab = phase::build_period_table(par, 50);
        bool increasing = true;
        for (size_t i = 1; i < tab.tau.size(); ++i)
            if (!(tab.tau[i] > tab.tau[i - 1])) increasing = false;
        c.expect(increasing, "n=4 tau strictly increasing on 50-point alpha grid");
        phase::ConvexityReport rep = phase::width_convexity_report(par, 50);
        c.expectf(rep.min_second_diff >= -1e-6,
                  "n=4 width second differences min %.2e >= -1e-6", rep.min_second_diff);
    }
    for (int n = 3; n <= 8; ++n) {
        phase::ConvexityReport rep = phase::width_convexity_report(phase::OdeParams(n), 12);
        c.expectf(rep.A < 0.0, "n=%d  A = %.4f < 0", n, rep.A);
    }
    for (int n : {3, 4, 5}) {
        phase::ConvexityReport rep = phase::width_convexity_report(phase::OdeParams(n), 25);
        c.expectf(rep.tau_increasing, "n=%d tau strictly increasing on induced grid", n);
    }
    return c;
}

Check c05_cross_oracle_period() {
    Check c;
    for (int n : {3, 4}) {
        phase::OdeParams par(n);
        double u0 = par.u0();
        double worst = 0.0;
        for (int i = 1; i <= 20; ++i) {
            double alpha = u0 + (1.0 - u0) * i / 21.5;
            double t_event = phase::period(alpha, par, 1e-12);
            double t_quad = phase::period_quadrature(phase::beta_of_alpha(alpha, par), par);
            worst = std::max(worst, std::fabs(t_event - t_quad) / t_quad);
        }
        c.expectf(worst < 1e-6, "n=%d worst relative disagreement %.2e < 1e-6 (20 points)",
                  n, worst);
    }
    return c;
}

Check c06_gradient_correctness(std::uint64_t seed) {
    Check c;
    ManifoldSpec spec(4, 3.0, 64);
    const double w0 = 2.0 * kPi / spec.T;
    modes::Rng rng(seed);
    // a fixed smooth unit-volume base point
    GridFn base(spec);
    for (int j = 0; j < spec.m; ++j)
        base[j] = 1.0 + 0.05 * std::cos(w0 * spec.node(j)) +
                  0.02 * std::sin(2.0 * w0 * spec.node(j));
    GridFn u = geom::normalize_volume(base);
    GridFn grad = geom::dy_gradient(u);
    const double N = spec.conformal_exponent();
    std::vector<double> uNm1;
    pow_elts(u.v, N - 1.0, uNm1);
    GridFn normal(spec, uNm1);

    for (int trial = 0; trial < 5; ++trial) {
        GridFn v(spec, 0.0);
        for (int k = 1; k <= 4; ++k) {
            double a = rng.next_normal() * 0.5, b = rng.next_normal() * 0.5;
            for (int j = 0; j < spec.m; ++j)
                v[j] += a * std::cos(w0 * k * spec.node(j)) +
                        b * std::sin(w0 * k * spec.node(j));
        }
        // make v tangent to the volume constraint
        double proj = inner(v, normal) / inner(normal, normal);
        for (int j = 0; j < spec.m; ++j) v[j] -= proj * normal[j];
        double pairing = inner(grad, v);
        std::vector<double> le, lerr;
        double prev = 1e300;
        for (double eps : {1e-2, 1e-3, 1e-4, 1e-5}) {
            GridFn up(spec), um(spec);
            kern::axpby(1.0, u.v, eps, v.v, up.v);
            kern::axpby(1.0, u.v, -eps, v.v, um.v);
            double fd = (geom::yamabe_energy(up) - geom::yamabe_energy(um)) / (2 * eps);
            double err = std::fabs(fd - pairing);
            if (err < prev && err > 0) {
                le.push_back(std::log(eps));
                lerr.push_back(std::log(err));
                prev = err;
            } else {
                break;  // roundoff floor reached
            }
        }
        bool enough = le.size() >= 3;
        double slope = enough ? num::fit_line(le, lerr).slope : 0.0;
        c.expectf(enough && slope > 1.6 && slope < 2.5,
                  "trial %d central-difference convergence order %.2f in [1.6, 2.5]",
                  trial, slope);
    }
    return c;
}

Check c07_ls_reduction() {
    Check c;
    for (int n : {4, 5}) {
        ManifoldSpec spec(n, critical_circumference(n), 64);
        reduce::LsSolver solver(spec);
        double noise = solver.f_noise_estimate();
        reduce::ReducedSample s0 = solver.solve_phi({0.0});
        reduce::ReducedSample s1 = solver.solve_phi({0.05});
        c.expectf(s1.newton_residual < 1e-11, "n=%d Newton residual %.2e < 1e-11", n,
                  s1.newton_residual);
        double orth = 0.0;
        for (const GridFn& e : solver.kernel().basis)
            orth = std::max(orth, std::fabs(inner(s1.phi, e)));
        c.expectf(orth < 1e-9, "n=%d |<Phi, ker>| = %.2e < 1e-9", n, orth);
        double df0 = 0.0;
        for (double g : solver.reduced_dF(s0)) df0 = std::max(df0, std::fabs(g));
        c.expectf(df0 < 1e-9, "n=%d |DF(0)| = %.2e < 1e-9", n, df0);
        // second difference along the kernel at small s: below 10x noise
        double s = 0.002;
        double d2 = solver.reduced_F({s}) - 2.0 * solver.F_at_zero() +
                    solver.reduced_F({-s});
        c.expectf(std::fabs(d2) < 10.0 * noise,
                  "n=%d kernel second difference |%.2e| < 10x noise (%.2e)", n,
                  std::fabs(d2), 10.0 * noise);
    }
    return c;
}

Check c08_cubic_form() {
    Check c;
    ManifoldSpec spec(4, critical_circumference(4), 64);
    const double w0 = 2.0 * kPi / spec.T;
    auto mode = [&](int k, bool sine) {
        GridFn f(spec);
        for (int j = 0; j < spec.m; ++j)
            f[j] = sine ? std::sin(w0 * k * spec.node(j)) : std::cos(w0 * k * spec.node(j));
        return f;
    };
    struct Triple {
        int ka, kb, kc;
        bool sa, sb, sc;
    };
    // frequency-resonant mean-zero triples with nonzero closed form
    for (const Triple& tr : {Triple{1, 1, 2, false, false, false},
                             Triple{2, 3, 5, false, false, false},
                             Triple{1, 1, 2, false, true, true}}) {
        GridFn a = mode(tr.ka, tr.sa), b = mode(tr.kb, tr.sb), d = mode(tr.kc, tr.sc);
        double closed = reduce::cubic_closed(a, b, d);
        double fd = reduce::cubic_fd_energy(a, b, d);
        double rel = std::fabs(fd - closed) / std::fabs(closed);
        c.expectf(std::fabs(closed) > 1.0 && rel < 1e-4,
                  "triple (%d%s,%d%s,%d%s): closed %.6f vs fd %.6f, rel %.2e < 1e-4",
                  tr.ka, tr.sa ? "s" : "c", tr.kb, tr.sb ? "s" : "c", tr.kc,
                  tr.sc ? "s" : "c", closed, fd, rel);
    }
    // kernel directions: both routes vanish to noise
    reduce::LsSolver solver(spec);
    const GridFn& e1 = solver.kernel().basis[0];
    double closed_k = reduce::cubic_closed(e1, e1, e1);
    double fd_k = reduce::cubic_fd_reduced(solver, {1.0}, 0.05);
    c.expectf(std::fabs(closed_k) < 1e-10, "kernel closed form %.2e vanishes", closed_k);
    c.expectf(std::fabs(fd_k) < 1e-5, "kernel third difference %.2e vanishes to noise",
              fd_k);
    return c;
}

Check c09_order_of_integrability() {
    Check c;
    for (int m : {64, 128}) {
        const reduce::OrderFit& fit = order_fit(m);
        int nearest_even = 2 * int(std::lround(fit.p_hat / 2.0));
        c.expectf(nearest_even >= 4 && std::fabs(fit.p_hat - nearest_even) < 0.1,
                  "m=%d fitted slope %.4f within 0.1 of even integer %d >= 4", m,
                  fit.p_hat, nearest_even);
        bool positive = !fit.sampled_dF.empty();
        for (double d : fit.sampled_dF)
            if (!(d > 0)) positive = false;
        c.expectf(positive, "m=%d F(s v) - F(0) > 0 for all sampled s != 0", m);
        c.expectf(fit.as_condition, "m=%d positivity condition holds (F_p = %.4f > 0)",
                  m, fit.F_p_hat_v);
    }
    c.expectf(std::fabs(order_fit(64).p_hat - order_fit(128).p_hat) < 0.05,
              "slope stable under grid doubling (%.4f vs %.4f)", order_fit(64).p_hat,
              order_fit(128).p_hat);
    return c;
}

Check c10_lojasiewicz() {
    Check c;
    int p = order_fit(64).p;
    double theta = 1.0 / p;
    double max64, max128;
    {
        reduce::LsSolver solver(ManifoldSpec(4, critical_circumference(4), 64));
        reduce::LojasiewiczReport rep = reduce::lojasiewicz_check(solver, theta, 0.1, 200);
        max64 = rep.max_ratio;
        c.expectf(rep.samples.size() >= 100 && rep.max_ratio < 1e300,
                  "m=64: ratio finite over %zu of 200 samples (rest below the "
                  "noise guard), max %.4f",
                  rep.samples.size(), rep.max_ratio);
    }
    {
        reduce::LsSolver solver(ManifoldSpec(4, critical_circumference(4), 128));
        reduce::LojasiewiczReport rep = reduce::lojasiewicz_check(solver, theta, 0.1, 200);
        max128 = rep.max_ratio;
    }
    double stab = std::max(max64, max128) / std::min(max64, max128);
    c.expectf(stab < 2.0, "max ratio stable across resolutions (factor %.3f < 2)", stab);
    {
        // control exponent: theta_c = 1 - 1/(p+2) makes the ratio blow up as
        // s -> 0 (negative log-log slope)
        reduce::LsSolver solver(ManifoldSpec(4, critical_circumference(4), 64));
        double theta_c = 1.0 - 1.0 / (p + 2);
        reduce::LojasiewiczReport rep = reduce::lojasiewicz_check(solver, theta_c, 0.1, 60);
        c.expectf(rep.loglog_slope < -0.5,
                  "control exponent diverges as s->0 (log-log slope %.2f < -0.5)",
                  rep.loglog_slope);
    }
    return c;
}

Check c11_exponential_regime() {
    Check c;
    const flow::FlowRun& fr = exp_regime_run();
    flow::RateFit fit = flow::fit_rate(fr);
    modes::LinearizedSpectrum ls = modes::linearized_spectrum(ManifoldSpec(4, 3.0, 64), 8);
    c.expect(fit.model == flow::RateModel::exponential, "model selected: exponential");
    c.expectf(fit.r2_exp > 0.999, "exponential fit r^2 = %.6f > 0.999", fit.r2_exp);
    double rel = std::fabs(fit.delta / ls.predicted_rate - 1.0);
    c.expectf(rel < 0.10, "delta %.4f within 10%% of spectral prediction %.4f (%.2f%%)",
              fit.delta, ls.predicted_rate, 100 * rel);
    return c;
}

Check c12_polynomial_regime() {
    Check c;
    int p = order_fit(64).p;
    double target = 1.0 / (p - 2);
    flow::RateFit fit64 = flow::fit_rate(poly_regime_run(64));
    flow::RateFit fit128 = flow::fit_rate(poly_regime_run(128));
    c.expect(fit64.model == flow::RateModel::polynomial, "model selected: polynomial");
    double rel = std::fabs(fit64.q / target - 1.0);
    c.expectf(rel < 0.15, "q = %.4f within 15%% of 1/(p-2) = %.4f (%.2f%%)", fit64.q,
              target, 100 * rel);
    slow::SlowRateVerdict verdict = slow::slow_rate_verdict(poly_regime_run(64), p);
    c.expectf(verdict.ratio < 5.0, "two-sided constants over last decade: c2/c1 = %.3f < 5",
              verdict.ratio);
    double dq = std::fabs(fit64.q - fit128.q) / fit64.q;
    c.expectf(dq < 0.02, "grid doubling changes q by %.3f%% < 2%%", 100 * dq);
    return c;
}

Check c13_slow_solvers() {
    Check c;
    // ansatz ODE residual across parameter combinations
    std::vector<double> t_grid;
    for (int i = 0; i <= 100; ++i) t_grid.push_back(i);
    double worst = 0.0;
    for (const auto& [p, Fp, N, T] :
         std::vector<std::tuple<int, double, double, double>>{
             {4, 1.0, 4.0, 10.0}, {3, 0.7, 6.0, 100.0}, {5, 2.3, 10.0 / 3.0, 50.0},
             {6, 0.5, 3.0, 20.0}}) {
        slow::Ansatz a;
        a.p = p;
        a.F_p_v_hat = Fp;
        a.v_hat = {1.0};
        a.T_shift = T;
        a.N = N;
        worst = std::max(worst, slow::phi_ode_residual(a, t_grid));
    }
    c.expectf(worst < 1e-10, "ansatz ODE residual %.2e < 1e-10 over all combinations",
              worst);

    // kernel ODE: closed-form case and back-substitution on a random-ish E
    const double N = 4.0, T = 10.0, gamma = 0.8;
    std::vector<double> mu = {6.0, 1.0};  // one weight above, one below gamma*2(N-2)
    std::vector<std::function<double(double)>> E = {
        [=](double tau) { return std::pow(T + tau, -1.0 - gamma); },
        [=](double tau) { return std::pow(T + tau, -1.0 - gamma); }};
    std::vector<double> grid;
    for (int i = 0; i <= 400; ++i) grid.push_back(i * 0.25);
    slow::KernelOdeResult kr = slow::solve_kernel_ode(E, gamma, mu, T, N, grid, 1e17);
    double err_closed = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) {
        double t = grid[i];
        {  // gamma < mu/(2(N-2)) = 1.5: the int_0^t branch
            double mut = mu[0] / (2.0 * (N - 2.0));
            double exact = (std::pow(T + t, -gamma) -
                            std::pow(T, mut - gamma) * std::pow(T + t, -mut)) /
                           (2.0 * (N - 2.0) * (mut - gamma));
            err_closed = std::max(err_closed, std::fabs(kr.u.values[i][0] - exact));
        }
        {  // gamma > mu/(2(N-2)) = 0.25: the -int_t^inf branch
            double mut = mu[1] / (2.0 * (N - 2.0));
            double exact = -std::pow(T + t, -gamma) /
                           (2.0 * (N - 2.0) * (gamma - mut));
            err_closed = std::max(err_closed, std::fabs(kr.u.values[i][1] - exact));
        }
    }
    c.expectf(err_closed < 1e-8, "kernel ODE closed-form error %.2e < 1e-8", err_closed);

    std::vector<std::function<double(double)>> E2 = {[=](double tau) {
        return std::pow(T + tau, -1.0 - gamma) * (1.0 + 0.3 * std::sin(0.1 * tau));
    }};
    std::vector<double> mu2 = {6.0};
    slow::KernelOdeResult kr2 = slow::solve_kernel_ode(E2, gamma, mu2, T, N, grid, 1e17);
    double res = 0.0;
    const double h = grid[1] - grid[0];
    for (size_t i = 2; i + 2 < grid.size(); ++i) {
        // fourth-order stencil so the check probes the solution, not the stencil
        double du = (-kr2.u.values[i + 2][0] + 8.0 * kr2.u.values[i + 1][0] -
                     8.0 * kr2.u.values[i - 1][0] + kr2.u.values[i - 2][0]) /
                    (12.0 * h);
        double lhs = 2.0 * (N - 2.0) * du + mu2[0] / (T + grid[i]) * kr2.u.values[i][0];
        res = std::max(res, std::fabs(lhs - E2[0](grid[i])));
    }
    c.expectf(res < 1e-7, "kernel ODE back-substitution residual %.2e < 1e-7", res);

    // orthogonal problem: resonant Duhamel closed form
    {
        double delta = 1.5;  // stable mode, L-eigenvalue -delta
        std::vector<std::function<double(double)>> Er = {
            [=](double tau) { return std::exp(-delta * tau); }};
        std::vector<double> mur = {-delta};
        std::vector<double> g2;
        for (int i = 0; i <= 200; ++i) g2.push_back(i * 0.1);
        slow::OrthogonalOdeResult orr = slow::solve_orthogonal_ode(Er, mur, 1.5, T, g2, 1e3);
        double err = 0.0;
        for (size_t i = 0; i < g2.size(); ++i)
            err = std::max(err, std::fabs(orr.u.values[i][0] -
                                          g2[i] * std::exp(-delta * g2[i])));
        c.expectf(err < 1e-9, "resonant Duhamel error %.2e < 1e-9", err);
    }
    // weighted bound constant stable across q and T_shift
    {
        double cmin = 1e300, cmax = 0.0;
        for (double q : {1.2, 1.5, 2.0}) {
            for (double Ts : {10.0, 100.0}) {
                std::vector<std::function<double(double)>> Eq = {
                    [=](double tau) { return std::pow(Ts + tau, -q); },
                    [=](double tau) { return std::pow(Ts + tau, -q); }};
                std::vector<double> muq = {-2.0, +3.0};
                std::vector<double> g3;
                for (int i = 0; i <= 300; ++i) g3.push_back(i * (5.0 * Ts) / 300.0);
                slow::OrthogonalOdeResult orr =
                    slow::solve_orthogonal_ode(Eq, muq, q, Ts, g3, 100.0 * Ts);
                slow::WeightedNormResult nu =
                    slow::weighted_norm(orr.u, slow::NormKind::l2_q, q, Ts);
                slow::WeightedSeries es;
                es.t = g3;
                for (double tau : g3)
                    es.values.push_back({Eq[0](tau), Eq[1](tau)});
                slow::WeightedNormResult ne =
                    slow::weighted_norm(es, slow::NormKind::l2_q, q, Ts);
                double C = nu.value / ne.value;
                cmin = std::min(cmin, C);
                cmax = std::max(cmax, C);
            }
        }
        c.expectf(cmax / cmin < 2.0,
                  "weighted bound constant stable: C in [%.3f, %.3f], spread %.3f < 2",
                  cmin, cmax, cmax / cmin);
    }
    return c;
}

Check c14_cpn_cubic(std::uint64_t seed) {
    Check c;
    modes::MonteCarloEstimate est = modes::cpn_cubic_integral(2, 1000000, seed);
    c.expectf(std::fabs(est.value) > 3.0 * est.std_error,
              "int h^3 = %.4f +- %.4f, |estimate| > 3 sigma", est.value, est.std_error);
    modes::MonteCarloEstimate ctrl =
        modes::cpn_cubic_antisymmetric_control(2, 1000000, seed + 1);
    c.expectf(std::fabs(ctrl.value) <= 3.0 * ctrl.std_error,
              "antisymmetric control %.5f +- %.5f within 3 sigma of 0", ctrl.value,
              ctrl.std_error);
    modes::MonteCarloEstimate mean = modes::cpn_mean_of_h(2, 1000000, seed + 2);
    c.expectf(std::fabs(mean.value) <= 3.0 * mean.std_error,
              "<h, 1> = %.5f +- %.5f within 3 sigma of 0", mean.value, mean.std_error);
    return c;
}

Check c15_monotonicity() {
    Check c;
    const flow::FlowRun& fe = exp_regime_run();
    c.expectf(fe.worst_energy_ratio < 10.0,
              "exponential run: worst energy increase %.2e x tolerance < 10",
              fe.worst_energy_ratio);
    c.expectf(fe.worst_r_ratio < 10.0,
              "exponential run: worst r increase %.2e x tolerance < 10",
              fe.worst_r_ratio);
    for (int m : {64, 128}) {
        const flow::FlowRun& fp = poly_regime_run(m);
        c.expectf(fp.worst_energy_ratio < 10.0,
                  "polynomial run m=%d: worst energy increase %.2e x tolerance < 10", m,
                  fp.worst_energy_ratio);
        c.expectf(fp.worst_r_ratio < 10.0,
                  "polynomial run m=%d: worst r increase %.2e x tolerance < 10", m,
                  fp.worst_r_ratio);
    }
    return c;
}

struct Criterion {
    const char* name;
    double runtime_limit;
    std::function<Check(std::uint64_t)> fn;
};

const std::vector<Criterion>& table() {
    static const std::vector<Criterion> t = {
        {"explicit-solution-residuals", 1.0, [](std::uint64_t) { return c01_explicit_solutions(); }},
        {"hamiltonian-conservation", 5.0, [](std::uint64_t) { return c02_hamiltonian_conservation(); }},
        {"period-limits", 10.0, [](std::uint64_t) { return c03_period_limits(); }},
        {"period-monotonicity", 10.0, [](std::uint64_t) { return c04_period_monotonicity(); }},
        {"cross-oracle-period", 10.0, [](std::uint64_t) { return c05_cross_oracle_period(); }},
        {"gradient-correctness", 5.0, [](std::uint64_t s) { return c06_gradient_correctness(s); }},
        {"ls-reduction", 30.0, [](std::uint64_t) { return c07_ls_reduction(); }},
        {"cubic-form-agreement", 60.0, [](std::uint64_t) { return c08_cubic_form(); }},
        {"order-of-integrability", 120.0, [](std::uint64_t) { return c09_order_of_integrability(); }},
        {"lojasiewicz-sampling", 120.0, [](std::uint64_t) { return c10_lojasiewicz(); }},
        {"exponential-regime", 60.0, [](std::uint64_t) { return c11_exponential_regime(); }},
        {"polynomial-regime", 300.0, [](std::uint64_t) { return c12_polynomial_regime(); }},
        {"slow-flow-solvers", 30.0, [](std::uint64_t) { return c13_slow_solvers(); }},
        {"cpn-cubic-integral", 30.0, [](std::uint64_t s) { return c14_cpn_cubic(s); }},
        {"energy-r-monotonicity", 300.0, [](std::uint64_t) { return c15_monotonicity(); }},
    };
    return t;
}

}  // namespace

int criterion_count() { return int(table().size()); }

CriterionResult run_criterion(int id, std::uint64_t seed) {
    if (id < 1 || id > criterion_count())
        throw ContractViolation("run_criterion: id out of range");
    const Criterion& cr = table()[size_t(id - 1)];
    CriterionResult res;
    res.id = id;
    res.name = cr.name;
    res.runtime_limit = cr.runtime_limit;
    auto start = std::chrono::steady_clock::now();
    Check c = cr.fn(seed);
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    res.pass = c.ok;
    res.details = c.details;
    char buf[128];
    std::snprintf(buf, sizeof buf, "  runtime %.2fs (limit %.0fs)", res.seconds,
                  res.runtime_limit);
    res.details.push_back(buf);
    if (res.seconds > res.runtime_limit) {
        res.pass = false;
        res.details.push_back("  FAIL runtime limit exceeded");
    }
    return res;
}

std::vector<CriterionResult> run_all(std::uint64_t seed) {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= criterion_count(); ++id) out.push_back(run_criterion(id, seed));
    return out;
}

std::string format_line(const CriterionResult& r) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "[%s] %02d %s (%.2fs)", r.pass ? "PASS" : "FAIL",
                  r.id, r.name.c_str(), r.seconds);
    return buf;
}

}  // namespace yamabe::accept
