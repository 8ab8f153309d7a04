#include "yamabe/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "yamabe/geometry.hpp"
#include "yamabe/kernels.hpp"
#include "yamabe/numerics.hpp"

namespace yamabe::reduce {

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<double> scaled(const std::vector<double>& v, double s) {
    std::vector<double> out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = s * v[i];
    return out;
}
}  // namespace

GridFn KernelBasis::combine(const std::vector<double>& coords) const {
    if (int(coords.size()) != dim())
        throw ContractViolation("KernelBasis::combine: coordinate count mismatch");
    GridFn out(spec, 0.0);
    for (int i = 0; i < dim(); ++i)
        kern::axpby(coords[size_t(i)], basis[size_t(i)].v, 1.0, out.v, out.v);
    return out;
}

KernelBasis build_kernel_basis(const ManifoldSpec& spec, Sector sector, double tol) {
    KernelBasis kb;
    kb.spec = spec;
    kb.sector = sector;
    const double w0 = 2.0 * kPi / spec.T;
    const double target = spec.n - 2.0;
    for (int k = 1; k <= spec.m / 2; ++k) {
        double lam = double(k) * k * w0 * w0;
        if (lam > target + 1.0) break;
        if (std::fabs(lam - target) >= tol) continue;
        // cos mode
        GridFn c(spec);
        double cn = std::sqrt(2.0 / spec.reference_volume());
        for (int j = 0; j < spec.m; ++j) c[j] = cn * std::cos(w0 * k * spec.node(j));
        kb.basis.push_back(c);
        kb.freqs.push_back(k);
        kb.is_sine.push_back(false);
        if (sector == Sector::full && k < spec.m / 2) {
            GridFn s(spec);
            for (int j = 0; j < spec.m; ++j) s[j] = cn * std::sin(w0 * k * spec.node(j));
            kb.basis.push_back(s);
            kb.freqs.push_back(k);
            kb.is_sine.push_back(true);
        }
    }
    return kb;
}

LsSolver::LsSolver(const ManifoldSpec& spec, Sector sector, double tol,
                   int max_iter)
    : spec_(spec), basis_(build_kernel_basis(spec, sector)), tol_(tol),
      max_iter_(max_iter) {
    // complement modes: every grid-representable mode except the kernel ones;
    // the constant (k = 0 cosine) is kept and carries the volume adjustment
    auto is_kernel = [&](int k, bool sine) {
        for (int i = 0; i < basis_.dim(); ++i)
            if (basis_.freqs[size_t(i)] == k &&
                (basis_.sector == Sector::even ? !sine
                                               : basis_.is_sine[size_t(i)] == sine))
                return true;
        // in the even sector a sine mode never appears among the unknowns
        return false;
    };
    for (int k = 0; k <= spec_.m / 2; ++k) {
        if (!is_kernel(k, false)) unknowns_.push_back({k, false});
        if (basis_.sector == Sector::full && k >= 1 && k < spec_.m / 2 &&
            !is_kernel(k, true))
            unknowns_.push_back({k, true});
    }
}

GridFn LsSolver::assemble_phi(const std::vector<double>& x) const {
    FourierCoeffs c;
    c.a.assign(size_t(spec_.m / 2 + 1), 0.0);
    c.b.assign(size_t(spec_.m / 2 + 1), 0.0);
    for (size_t i = 0; i < unknowns_.size(); ++i) {
        if (unknowns_[i].sine)
            c.b[size_t(unknowns_[i].k)] = x[i];
        else
            c.a[size_t(unknowns_[i].k)] = x[i];
    }
    return synthesize(spec_, c);
}

std::vector<double> LsSolver::residual(const GridFn& v_fn,
                                       const std::vector<double>& x) const {
    GridFn phi = assemble_phi(x);
    GridFn psi(spec_);
    for (int j = 0; j < spec_.m; ++j) psi[j] = 1.0 + v_fn[j] + phi[j];
    if (!psi.positive()) throw NewtonFailure("solve_phi: positivity loss");
    GridFn grad = geom::gradient_raw(psi);
    FourierCoeffs g = analyze(grad);
    std::vector<double> res(unknowns_.size());
    const double vref = spec_.reference_volume();
    for (size_t i = 0; i < unknowns_.size(); ++i) {
        if (unknowns_[i].k == 0 && !unknowns_[i].sine) {
            res[i] = (geom::volume(psi) - vref) / vref;
        } else if (unknowns_[i].sine) {
            res[i] = g.b[size_t(unknowns_[i].k)];
        } else {
            res[i] = g.a[size_t(unknowns_[i].k)];
        }
    }
    return res;
}

ReducedSample LsSolver::solve_phi(const std::vector<double>& v_coords) const {
    GridFn v_fn = basis_.combine(v_coords);
    double vnorm = norm_l2(v_fn);
    if (vnorm > cap_)
        throw ContractViolation("solve_phi: v exceeds the smallness cap");

    const size_t nuk = unknowns_.size();
    std::vector<double> x(nuk, 0.0);
    std::vector<double> res = residual(v_fn, x);
    auto max_abs = [](const std::vector<double>& r) {
        double m = 0;
        for (double v : r) m = std::max(m, std::fabs(v));
        return m;
    };
    double rn = max_abs(res);
    std::vector<double> history{rn};
    int it = 0;
    while (rn > tol_ && it < max_iter_) {
        // forward-difference Jacobian in mode space
        std::vector<double> J(nuk * nuk);
        for (size_t col = 0; col < nuk; ++col) {
            double h = 1e-7 * (1.0 + std::fabs(x[col]));
            std::vector<double> xp = x;
            xp[col] += h;
            std::vector<double> rp = residual(v_fn, xp);
            for (size_t row = 0; row < nuk; ++row)
                J[row * nuk + col] = (rp[row] - res[row]) / h;
        }
        std::vector<double> dx = num::solve_dense(J, res);
        for (size_t i = 0; i < nuk; ++i) x[i] -= dx[i];
        res = residual(v_fn, x);
        rn = max_abs(res);
        history.push_back(rn);
        ++it;
        if (it >= 4 && history[size_t(it)] > 0.5 * history[size_t(it - 2)] &&
            rn > 1e-6) {
            NewtonFailure nf("solve_phi: Newton stalled");
            nf.residual_history = history;
            throw nf;
        }
    }
    if (rn > tol_) {
        NewtonFailure nf("solve_phi: Newton did not converge");
        nf.residual_history = history;
        throw nf;
    }

    ReducedSample out;
    out.v_coords = v_coords;
    out.phi = assemble_phi(x);
    out.psi = GridFn(spec_);
    for (int j = 0; j < spec_.m; ++j) out.psi[j] = 1.0 + v_fn[j] + out.phi[j];
    out.F_value = std::pow(spec_.reference_volume(), 2.0 / spec_.conformal_exponent()) *
                  geom::yamabe_energy(out.psi);
    out.newton_residual = rn;
    out.newton_iterations = it;
    return out;
}

double LsSolver::reduced_F(const std::vector<double>& v_coords) const {
    return solve_phi(v_coords).F_value;
}

double LsSolver::F_at_zero() const {
    GridFn one(spec_, 1.0);
    return std::pow(spec_.reference_volume(), 2.0 / spec_.conformal_exponent()) *
           geom::yamabe_energy(one);
}

std::vector<double> LsSolver::reduced_dF(const ReducedSample& sample) const {
    GridFn grad = geom::gradient_raw(sample.psi);
    const double N = spec_.conformal_exponent();
    std::vector<double> psiNm1;
    pow_elts(sample.psi.v, N - 1.0, psiNm1);
    GridFn psi_pow(spec_, psiNm1);
    GridFn one(spec_, 1.0);
    // volume-constraint multiplier: the residual gradient component along the
    // constraint normal, removed before projecting onto the kernel
    double lambda = inner(grad, one) / inner(psi_pow, one);
    std::vector<double> df(size_t(basis_.dim()));
    for (int i = 0; i < basis_.dim(); ++i) {
        df[size_t(i)] = inner(grad, basis_.basis[size_t(i)]) -
                        lambda * inner(psi_pow, basis_.basis[size_t(i)]);
    }
    return df;
}

double LsSolver::f_noise_estimate() const {
    return 64.0 * std::numeric_limits<double>::epsilon() * std::fabs(F_at_zero());
}

OrderFit fit_order(const LsSolver& solver, double s_lo, double s_hi, int s_count,
                   int directions) {
    OrderFit fit;
    const int dim = solver.kernel().dim();
    const double F0 = solver.F_at_zero();
    const double noise = solver.f_noise_estimate();

    // direction sample on the kernel unit sphere
    std::vector<std::vector<double>> dirs;
    if (dim == 1) {
        dirs.push_back({1.0});
        dirs.push_back({-1.0});
    } else {
        for (int d = 0; d < directions; ++d) {
            double th = 2.0 * kPi * d / directions;
            std::vector<double> v(size_t(dim), 0.0);
            v[0] = std::cos(th);
            v[1] = std::sin(th);
            dirs.push_back(v);
        }
    }

    double best_coeff = -1e300;
    double min_slope = 1e300;
    bool any_fit = false;
    std::vector<double> best_s, best_df;

    for (const auto& d : dirs) {
        std::vector<double> ls, ldf, ss, dfs;
        for (int i = 0; i < s_count; ++i) {
            double s = s_lo * std::pow(s_hi / s_lo, double(i) / (s_count - 1));
            double dF = solver.reduced_F(scaled(d, s)) - F0;
            ss.push_back(s);
            dfs.push_back(dF);
            if (std::fabs(dF) > 10.0 * noise) {
                ls.push_back(std::log(s));
                ldf.push_back(std::log(std::fabs(dF)));
            }
        }
        if (ls.size() < 4) continue;
        any_fit = true;
        num::LineFit lf = num::fit_line(ls, ldf);
        fit.dir_slopes.push_back(lf.slope);
        // leading coefficient with the slope pinned to the fitted integer
        int p_dir = std::max(3, int(std::lround(lf.slope)));
        double acc = 0.0;
        int cnt = 0;
        double sign = 0.0;
        for (size_t i = 0; i < ss.size(); ++i) {
            if (std::fabs(dfs[i]) > 10.0 * noise) {
                acc += std::log(std::fabs(dfs[i])) - p_dir * std::log(ss[i]);
                sign += (dfs[i] > 0 ? 1.0 : -1.0);
                ++cnt;
            }
        }
        double coeff = std::exp(acc / cnt) * (sign >= 0 ? 1.0 : -1.0);
        fit.dir_coefficients.push_back(coeff);
        min_slope = std::min(min_slope, lf.slope);
        if (coeff > best_coeff) {
            best_coeff = coeff;
            fit.v_hat = d;
            fit.p_hat = lf.slope;
            best_s = ss;
            best_df = dfs;
        }
    }

    if (!any_fit) {
        fit.integrable_within_tolerance = true;
        return fit;
    }
    fit.p = std::max(3, int(std::lround(min_slope)));
    fit.F_p_hat_v = best_coeff;
    fit.as_condition = best_coeff > 0.0;
    fit.sampled_s = best_s;
    fit.sampled_dF = best_df;
    // evenness defect along v_hat at the largest usable s
    double s_chk = best_s.empty() ? s_hi : best_s.back();
    std::vector<double> neg = scaled(fit.v_hat, -s_chk);
    std::vector<double> pos = scaled(fit.v_hat, s_chk);
    fit.even_defect =
        std::fabs(solver.reduced_F(pos) - solver.reduced_F(neg));
    return fit;
}

double cubic_closed(const GridFn& a, const GridFn& b, const GridFn& c) {
    const ManifoldSpec& spec = a.spec;
    const double N = spec.conformal_exponent();
    GridFn abc(spec);
    kern::mul(a.v, b.v, abc.v);
    kern::mul(abc.v, c.v, abc.v);
    return -2.0 * (N - 1.0) * (N - 2.0) * spec.scalar_curvature() *
           manifold_integral(abc);
}

namespace {
double scaled_energy(const ManifoldSpec& spec, const GridFn& w) {
    return std::pow(spec.reference_volume(), 2.0 / spec.conformal_exponent()) *
           geom::yamabe_energy(w);
}
}  // namespace

double cubic_fd_energy(const GridFn& a, const GridFn& b, const GridFn& c,
                       double eps) {
    const ManifoldSpec& spec = a.spec;
    auto F = [&](double sa, double sb, double sc) {
        GridFn w(spec);
        for (int j = 0; j < spec.m; ++j)
            w[j] = 1.0 + sa * a[j] + sb * b[j] + sc * c[j];
        return scaled_energy(spec, w);
    };
    auto corner_sum = [&](double e) {
        double v = 0.0;
        for (int i : {+1, -1})
            for (int jj : {+1, -1})
                for (int kk : {+1, -1})
                    v += i * jj * kk * F(i * e, jj * e, kk * e);
        return v / (8.0 * e * e * e);
    };
    // two Richardson stages: the corner sum has an even error expansion, so
    // successive halvings remove the eps^2 and eps^4 terms
    double d1 = corner_sum(eps);
    double d2 = corner_sum(0.5 * eps);
    double d3 = corner_sum(0.25 * eps);
    double r1 = (4.0 * d2 - d1) / 3.0;
    double r2 = (4.0 * d3 - d2) / 3.0;
    return (16.0 * r2 - r1) / 15.0;
}

double cubic_fd_reduced(const LsSolver& solver, const std::vector<double>& v,
                        double s) {
    auto F = [&](double t) { return solver.reduced_F(scaled(v, t)); };
    return (F(2 * s) - 2.0 * F(s) + 2.0 * F(-s) - F(-2 * s)) / (2.0 * s * s * s);
}

LojasiewiczReport lojasiewicz_check(const LsSolver& solver, double theta,
                                    double radius, int count) {
    LojasiewiczReport rep;
    rep.theta = theta;
    const double F0 = solver.F_at_zero();
    const double noise = solver.f_noise_estimate();
    const int dim = solver.kernel().dim();
    std::vector<double> ls, lr;
    for (int i = 0; i < count; ++i) {
        // geometric |s| ladder, alternating sign, skipping v = 0
        double frac = double(i) + 1.0;
        double s = radius * std::pow(1e-2, 1.0 - frac / count);
        if (i % 2 == 1) s = -s;
        std::vector<double> v(size_t(dim), 0.0);
        v[0] = s;
        ReducedSample sample = solver.solve_phi(v);
        double dF = std::fabs(sample.F_value - F0);
        std::vector<double> df = solver.reduced_dF(sample);
        double gn = 0.0;
        for (double g : df) gn += g * g;
        gn = std::sqrt(gn);
        if (dF < 10.0 * noise || gn == 0.0) continue;
        double ratio = std::pow(dF, 1.0 - theta) / gn;
        rep.samples.push_back({s, ratio});
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        ls.push_back(std::log(std::fabs(s)));
        lr.push_back(std::log(ratio));
    }
    if (ls.size() >= 2) rep.loglog_slope = num::fit_line(ls, lr).slope;
    return rep;
}

}  // namespace yamabe::reduce
