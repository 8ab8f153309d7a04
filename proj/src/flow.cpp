#include "yamabe/flow.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "yamabe/geometry.hpp"
#include "yamabe/kernels.hpp"
#include "yamabe/numerics.hpp"
#include "yamabe/reduction.hpp"

namespace yamabe::flow {

namespace {

constexpr double kPi = std::numbers::pi;

// One linearly implicit micro-step (Rosenbrock-Euler form):
//   u_next = u + (I - dt L)^{-1} dt f(u),
// where f is the full flow right-hand side and L is the flow linearization
// frozen at the grid mean of u, diagonal in Fourier space:
//   L_hat(kappa) = ubar^{2-N} (R_inf - (n-1) kappa^2),  kappa != 0.
// L vanishes exactly on the degenerate kernel frequency, so the slow forcing
// there is never damped by the implicit solve; the constant mode is handled
// by the volume renormalization and kept out of L.
GridFn imex_micro(const GridFn& u, double dt) {
    const ManifoldSpec& spec = u.spec;
    const double N = spec.conformal_exponent();
    const double R = spec.scalar_curvature();
    const int m = spec.m;

    GridFn upp = second_derivative(u);
    GridFn lin(spec);
    kern::axpby(-(N + 2.0), upp.v, R, u.v, lin.v);
    const double A = inner(lin, u);
    const double B = geom::volume(u);
    const double r = A / B;

    const double ubar = kern::sum(u.v) / m;
    const double cbar = std::pow(ubar, 2.0 - N);

    std::vector<double> u2mN;
    pow_elts(u.v, 2.0 - N, u2mN);
    GridFn f(spec);
    for (int j = 0; j < m; ++j) {
        f[j] = ((N + 2.0) * u2mN[size_t(j)] * upp[j] -
                R * u2mN[size_t(j)] * u[j] + r * u[j]) /
               (N - 2.0);
    }

    FourierCoeffs cu = analyze(u);
    FourierCoeffs cf = analyze(f);
    const double w0 = 2.0 * kPi / spec.T;
    const double nm1 = spec.n - 1.0;
    for (int k = 0; k <= m / 2; ++k) {
        // subcritical frequencies (growing linear modes) stay explicit so the
        // denominator cannot change sign at large dt
        double shift = (k == 0) ? 0.0
                                : std::max(0.0, cbar * (nm1 * (w0 * k) * (w0 * k) - R));
        double den = 1.0 + dt * shift;
        cu.a[size_t(k)] += dt * cf.a[size_t(k)] / den;
        cu.b[size_t(k)] += dt * cf.b[size_t(k)] / den;
    }
    GridFn out = synthesize(spec, cu);
    if (!out.positive()) throw Error("flow step: positivity loss");
    return out;
}

}  // namespace

void FlowConfig::validate() const {
    spec.validate();
    if (!(dt_init > 0) || !(dt_max > 0) || dt_init > dt_max)
        throw ContractViolation("FlowConfig: need 0 < dt_init <= dt_max");
    if (!(t_end > 0)) throw ContractViolation("FlowConfig: t_end must be > 0");
    if (!u0.positive()) throw ContractViolation("FlowConfig: u0 must be positive");
    double vr = geom::volume(u0) / spec.reference_volume();
    if (std::fabs(vr - 1.0) > 1e-8)
        throw ContractViolation("FlowConfig: u0 must be normalized to the reference volume");
}

const char* termination_name(Termination t) {
    switch (t) {
        case Termination::reached_t_end: return "t_end";
        case Termination::converged: return "converged";
        case Termination::positivity_loss: return "positivity_loss";
        case Termination::dt_underflow: return "dt_underflow";
    }
    return "?";
}

StepResult step(const GridFn& u, double dt) {
    GridFn big = imex_micro(u, dt);
    GridFn half = imex_micro(imex_micro(u, 0.5 * dt), 0.5 * dt);
    StepResult res;
    res.error_estimate = kern::sup_abs_diff(big.v, half.v);
    // local Richardson extrapolation of the first-order pair
    GridFn extra(u.spec);
    kern::axpby(2.0, half.v, -1.0, big.v, extra.v);
    if (!extra.positive()) throw Error("flow step: positivity loss");
    res.u_next = geom::normalize_to_reference(extra);
    return res;
}

FlowRun run(const FlowConfig& config) {
    config.validate();
    const ManifoldSpec& spec = config.spec;
    GridFn u = config.u0;
    GridFn u_inf = config.u_inf.value_or(GridFn(spec, 1.0));

    reduce::KernelBasis kb = reduce::build_kernel_basis(spec, reduce::Sector::full);

    FlowRun out;
    out.spec = spec;
    out.tol = config.tol;
    out.relative_tol = config.relative_tol;

    auto record = [&](double t) {
        GridFn diff(spec);
        kern::axpby(1.0, u.v, -1.0, u_inf.v, diff.v);
        FlowSample s;
        s.t = t;
        s.l2_dist = norm_l2(diff);
        s.c0_dist = norm_c0(diff);
        s.r = geom::average_scalar(u);
        s.energy = geom::yamabe_energy(u);
        s.volume_rel = geom::volume(u) / spec.reference_volume();
        if (kb.dim() > 0 && s.l2_dist > 0) {
            double ker2 = 0.0;
            for (const GridFn& e : kb.basis) {
                double c = inner(diff, e);
                ker2 += c * c;
            }
            s.kernel_frac = std::sqrt(ker2) / s.l2_dist;
        }
        out.samples.push_back(s);
        if (config.store_snapshots) out.snapshots.push_back(u);
        return s;
    };

    double t = 0.0;
    double dt = config.dt_init;
    double prev_energy = geom::yamabe_energy(u);
    double prev_r = geom::average_scalar(u);
    FlowSample s0 = record(0.0);
    if (s0.c0_dist < config.convergence_c0) {
        out.termination = Termination::converged;
        out.t_final = 0.0;
        return out;
    }
    double next_sample = (1.0 + t) * config.sample_ratio - 1.0;

    while (t < config.t_end) {
        double dt_try = std::min(dt, config.t_end - t);
        double eff_tol = config.tol;
        if (config.relative_tol)
            eff_tol *= std::max(kern::sup_abs_diff(u.v, u_inf.v), 1e-12);
        StepResult sr;
        try {
            sr = step(u, dt_try);
        } catch (const Error&) {
            out.termination = Termination::positivity_loss;
            out.t_final = t;
            return out;
        }
        if (sr.error_estimate > eff_tol) {
            double shrink = 0.85 * std::sqrt(eff_tol / sr.error_estimate);
            dt = dt_try * std::max(0.1, shrink);
            ++out.steps_rejected;
            if (dt < 1e-14) {
                out.termination = Termination::dt_underflow;
                out.t_final = t;
                return out;
            }
            continue;
        }
        u = sr.u_next;
        t += dt_try;
        ++out.steps_accepted;
        double grow = 0.85 * std::sqrt(eff_tol / std::max(sr.error_estimate, 1e-300));
        dt = std::min({dt_try * std::min(2.0, std::max(0.3, grow)), config.dt_max});

        double e = geom::yamabe_energy(u);
        double r = geom::average_scalar(u);
        out.max_energy_increase = std::max(out.max_energy_increase, e - prev_energy);
        out.max_r_increase = std::max(out.max_r_increase, r - prev_r);
        out.worst_energy_ratio =
            std::max(out.worst_energy_ratio, (e - prev_energy) / eff_tol);
        out.worst_r_ratio = std::max(out.worst_r_ratio, (r - prev_r) / eff_tol);
        prev_energy = e;
        prev_r = r;

        if (t >= next_sample || t >= config.t_end) {
            FlowSample s = record(t);
            while (next_sample <= t) next_sample = (1.0 + next_sample) * config.sample_ratio - 1.0;
            if (s.c0_dist < config.convergence_c0) {
                out.termination = Termination::converged;
                out.t_final = t;
                return out;
            }
        }
    }
    out.termination = Termination::reached_t_end;
    out.t_final = t;
    return out;
}

const char* rate_model_name(RateModel m) {
    switch (m) {
        case RateModel::exponential: return "exponential";
        case RateModel::polynomial: return "polynomial";
        case RateModel::inconclusive: return "inconclusive";
    }
    return "?";
}

RateFit fit_rate(const std::vector<double>& t, const std::vector<double>& dist,
                 double floor, double transient_fraction, int min_points) {
    if (t.size() != dist.size() || t.size() < 2)
        throw ContractViolation("fit_rate: bad series");
    // fit window in log(1+t): drop the transient and the converged floor
    double lt_lo = std::log1p(t.front()), lt_hi = std::log1p(t.back());
    double cut = lt_lo + transient_fraction * (lt_hi - lt_lo);
    std::vector<double> ts, lds, lts;
    for (size_t i = 0; i < t.size(); ++i) {
        if (std::log1p(t[i]) < cut) continue;
        if (!(dist[i] > floor)) continue;
        ts.push_back(t[i]);
        lds.push_back(std::log(dist[i]));
        lts.push_back(std::log1p(t[i]));
    }
    if (int(ts.size()) < min_points)
        throw ContractViolation("fit_rate: window too small");
    RateFit fit;
    num::LineFit fe = num::fit_line(ts, lds);
    num::LineFit fp = num::fit_line(lts, lds);
    fit.delta = -fe.slope;
    fit.q = -fp.slope;
    fit.r2_exp = fe.r2;
    fit.r2_poly = fp.r2;
    fit.points = int(ts.size());
    fit.window_t_lo = ts.front();
    fit.window_t_hi = ts.back();
    if (fe.r2 > fp.r2 + 0.01)
        fit.model = RateModel::exponential;
    else if (fp.r2 > fe.r2 + 0.01)
        fit.model = RateModel::polynomial;
    else
        fit.model = RateModel::inconclusive;
    return fit;
}

RateFit fit_rate(const FlowRun& run, bool use_c0) {
    std::vector<double> t, d;
    for (const FlowSample& s : run.samples) {
        t.push_back(s.t);
        d.push_back(use_c0 ? s.c0_dist : s.l2_dist);
    }
    // keep the fit clear of the integrator noise floor; with relative error
    // control the noise tracks the signal and no absolute floor is needed
    double floor = run.relative_tol ? 1e-11 : std::max(1e-11, 50.0 * run.tol);
    return fit_rate(t, d, floor);
}

std::vector<ProbeResult> basin_probe(const ManifoldSpec& spec,
                                     const std::vector<int>& freqs,
                                     const std::vector<double>& amplitudes,
                                     double t_end, double tol) {
    std::vector<ProbeResult> out;
    const double w0 = 2.0 * kPi / spec.T;
    for (int k : freqs) {
        for (double a : amplitudes) {
            ProbeResult pr;
            std::ostringstream label;
            label << "cos_k" << k << "_a" << a;
            pr.label = label.str();
            pr.amplitude = a;
            if (a == 0.0) {
                pr.skipped = true;
                out.push_back(pr);
                continue;
            }
            GridFn u0(spec);
            for (int j = 0; j < spec.m; ++j)
                u0[j] = 1.0 + a * std::cos(w0 * k * spec.node(j));
            FlowConfig cfg;
            cfg.spec = spec;
            cfg.u0 = geom::normalize_to_reference(u0);
            cfg.t_end = t_end;
            cfg.tol = tol;
            cfg.relative_tol = true;
            cfg.dt_max = 5.0;
            cfg.sample_ratio = 1.015;  // fast decays still fill the fit window
            cfg.store_snapshots = false;
            FlowRun fr = run(cfg);
            try {
                // probes start from clean single-mode data, so only a sliver
                // of transient needs discarding; the small-t samples are what
                // separates the two decay models for fast modes
                std::vector<double> ts, ds;
                for (const FlowSample& s : fr.samples) {
                    ts.push_back(s.t);
                    ds.push_back(s.c0_dist);
                }
                pr.fit = fit_rate(ts, ds, 1e-11, 0.05);
                pr.anomalous = pr.fit.model == RateModel::inconclusive &&
                               std::max(pr.fit.r2_exp, pr.fit.r2_poly) < 0.9;
            } catch (const Error&) {
                pr.anomalous = true;
            }
            out.push_back(pr);
        }
    }
    return out;
}

std::string flow_csv(const FlowRun& run) {
    std::ostringstream os;
    os << "t,l2_dist,c0_dist,r,energy,volume\n";
    os.precision(17);
    for (const FlowSample& s : run.samples) {
        os << s.t << ',' << s.l2_dist << ',' << s.c0_dist << ',' << s.r << ','
           << s.energy << ',' << s.volume_rel << '\n';
    }
    return os.str();
}

}  // namespace yamabe::flow
