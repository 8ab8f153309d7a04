#include "yamabe/slow_flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "yamabe/numerics.hpp"

namespace yamabe::slow {

void Ansatz::validate() const {
    if (p < 3) throw ContractViolation("Ansatz: p must be >= 3");
    if (!(F_p_v_hat > 0)) throw ContractViolation("Ansatz: F_p(v_hat) must be positive");
    if (!(T_shift > 0)) throw ContractViolation("Ansatz: T_shift must be positive");
    double n2 = 0;
    for (double c : v_hat) n2 += c * c;
    if (std::fabs(std::sqrt(n2) - 1.0) > 1e-10)
        throw ContractViolation("Ansatz: v_hat must be a unit vector");
}

double Ansatz::coefficient() const {
    return std::pow(2.0 * (N - 2.0) / (p * (p - 2.0) * F_p_v_hat), 1.0 / (p - 2.0));
}

double Ansatz::amplitude(double t) const {
    return std::pow(T_shift + t, -1.0 / (p - 2.0)) * coefficient();
}

double Ansatz::amplitude_derivative(double t) const {
    return -amplitude(t) / ((p - 2.0) * (T_shift + t));
}

std::vector<double> Ansatz::phi(double t) const {
    std::vector<double> out(v_hat.size());
    double a = amplitude(t);
    for (size_t i = 0; i < v_hat.size(); ++i) out[i] = a * v_hat[i];
    return out;
}

double phi_ode_residual(const Ansatz& a, const std::vector<double>& t_grid) {
    a.validate();
    double worst = 0.0;
    for (double t : t_grid) {
        double lam = a.amplitude(t);
        double dlam = a.amplitude_derivative(t);
        // DF_p(lam v_hat) = p |lam|^{p-1} F_p(v_hat) v_hat
        double grad = a.p * std::pow(std::fabs(lam), a.p - 1.0) * a.F_p_v_hat *
                      (lam >= 0 ? 1.0 : -1.0);
        double res = std::fabs(2.0 * (a.N - 2.0) * dlam + grad);
        worst = std::max(worst, res);
    }
    return worst;
}

HessianWeights hessian_weights(
    const std::function<double(const std::vector<double>&)>& F_p,
    const std::vector<double>& v_hat, int p, double N, double fd_step) {
    const int k = int(v_hat.size());
    const double Fp = F_p(v_hat);
    if (Fp == 0.0) throw ContractViolation("hessian_weights: F_p(v_hat) must be nonzero");
    std::vector<double> H(size_t(k) * size_t(k));
    auto at = [&](std::vector<double> base, int i, double di, int j, double dj) {
        base[size_t(i)] += di;
        base[size_t(j)] += dj;
        return F_p(base);
    };
    const double h = fd_step;
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            double d2;
            if (i == j) {
                d2 = (at(v_hat, i, h, i, 0) - 2.0 * Fp + at(v_hat, i, -h, i, 0)) /
                     (h * h);
            } else {
                d2 = (at(v_hat, i, h, j, h) - at(v_hat, i, h, j, -h) -
                      at(v_hat, i, -h, j, h) + at(v_hat, i, -h, j, -h)) /
                     (4.0 * h * h);
            }
            H[size_t(i) * k + size_t(j)] = d2;
        }
    }
    const double scale = 2.0 * (N - 2.0) / (p * (p - 2.0) * Fp);
    for (double& x : H) x *= scale;
    num::SymEigen eig = num::jacobi_eigen(H, k);
    HessianWeights out;
    out.mu = eig.values;
    out.frame.assign(size_t(k), std::vector<double>(size_t(k)));
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < k; ++i)
            out.frame[size_t(j)][size_t(i)] = eig.vectors[size_t(i) * k + size_t(j)];
    // reconstruction defect of the eigendecomposition against H
    double err = 0.0;
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            double s = 0.0;
            for (int l = 0; l < k; ++l)
                s += out.frame[size_t(l)][size_t(i)] * out.mu[size_t(l)] *
                     out.frame[size_t(l)][size_t(j)];
            err = std::max(err, std::fabs(s - H[size_t(i) * k + size_t(j)]));
        }
    }
    out.reconstruction_error = err;
    if (err > 1e-8 * std::max(1.0, std::fabs(out.mu.back())))
        throw Error("hessian_weights: eigendecomposition reconstruction failed");
    return out;
}

namespace {

// Quadrature over possibly huge intervals: doubling segments keep adaptive
// Simpson honest on power-law and exponential tails.
double quad_long(const std::function<double(double)>& g, double a, double b,
                 double tol) {
    if (!(b > a)) return 0.0;
    double acc = 0.0;
    double lo = a;
    const double base = std::max(1.0, std::fabs(a));
    while (lo < b) {
        double hi = std::min(b, lo + std::max(base, lo));
        acc += num::adaptive_simpson(g, lo, hi, tol);
        lo = hi;
    }
    return acc;
}

double vec_norm(const std::vector<double>& v, bool two_norm) {
    if (two_norm) {
        double s = 0;
        for (double x : v) s += x * x;
        return std::sqrt(s);
    }
    double m = 0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

}  // namespace

WeightedNormResult weighted_norm(const WeightedSeries& s, NormKind kind,
                                 double weight, double T_shift) {
    WeightedNormResult out;
    if (s.t.empty()) return out;
    const bool two_norm = (kind == NormKind::l2_q);
    std::vector<double> weighted(s.t.size());
    for (size_t i = 0; i < s.t.size(); ++i)
        weighted[i] = std::pow(T_shift + s.t[i], weight) * vec_norm(s.values[i], two_norm);
    out.value = *std::max_element(weighted.begin(), weighted.end());
    if (kind == NormKind::sup_gamma_with_derivative) {
        for (size_t i = 1; i + 1 < s.t.size(); ++i) {
            std::vector<double> d(s.values[i].size());
            for (size_t c = 0; c < d.size(); ++c)
                d[c] = (s.values[i + 1][c] - s.values[i - 1][c]) /
                       (s.t[i + 1] - s.t[i - 1]);
            out.value = std::max(out.value, std::pow(T_shift + s.t[i], weight + 1.0) *
                                                vec_norm(d, false));
        }
    }
    // monotone growth over the trailing third marks the norm as divergent
    // (the sup would keep growing with the grid extent)
    size_t tail = s.t.size() - s.t.size() / 3;
    bool growing = true;
    for (size_t i = tail; i + 1 < s.t.size(); ++i)
        if (weighted[i + 1] <= weighted[i]) growing = false;
    if (growing && s.t.size() >= 6 &&
        weighted.back() > 1.2 * weighted[tail > 0 ? tail - 1 : 0])
        out.divergent = true;
    return out;
}

KernelOdeResult solve_kernel_ode(
    const std::vector<std::function<double(double)>>& E, double gamma,
    const std::vector<double>& mu, double T_shift, double N,
    const std::vector<double>& t_grid, double t_max, double quad_tol) {
    if (E.size() != mu.size())
        throw ContractViolation("solve_kernel_ode: modes mismatch");
    const double twoN2 = 2.0 * (N - 2.0);
    for (double m : mu)
        if (std::fabs(gamma - m / twoN2) < 1e-9)
            throw ContractViolation("solve_kernel_ode: gamma resonant with a weight");

    KernelOdeResult out;
    out.u.t = t_grid;
    out.u.weight = gamma;
    out.u.values.assign(t_grid.size(), std::vector<double>(mu.size(), 0.0));
    out.tail_bound.assign(mu.size(), 0.0);

    for (size_t j = 0; j < mu.size(); ++j) {
        const double mut = mu[j] / twoN2;
        auto g = [&](double tau) {
            return std::pow(T_shift + tau, mut) * E[j](tau);
        };
        if (gamma > mut) {
            // decaying-weight branch: integrate the tail from t to t_max and
            // bound the remainder by the weighted norm of E
            double M = 0.0, prefac = 0.0;
            for (double tau : t_grid) {
                M = std::max(M, std::fabs(E[j](tau)) * std::pow(T_shift + tau, 1.0 + gamma));
                prefac = std::max(prefac, std::pow(T_shift + tau, -mut));
            }
            out.tail_bound[j] = prefac * M * std::pow(T_shift + t_max, mut - gamma) /
                                (twoN2 * (gamma - mut));
            // suffix integrals over the grid
            std::vector<double> suffix(t_grid.size(), 0.0);
            double acc = 0.0;
            for (size_t i = t_grid.size(); i-- > 0;) {
                double hi = (i + 1 < t_grid.size()) ? t_grid[i + 1] : t_max;
                acc += quad_long(g, t_grid[i], hi, quad_tol);
                suffix[i] = acc;
            }
            for (size_t i = 0; i < t_grid.size(); ++i)
                out.u.values[i][j] = -std::pow(T_shift + t_grid[i], -mut) * suffix[i] / twoN2;
        } else {
            // growing-weight branch: zero initial data at t = 0
            double acc = (t_grid.front() > 0.0)
                             ? num::adaptive_simpson(g, 0.0, t_grid.front(), quad_tol)
                             : 0.0;
            out.u.values[0][j] = std::pow(T_shift + t_grid[0], -mut) * acc / twoN2;
            for (size_t i = 1; i < t_grid.size(); ++i) {
                acc += num::adaptive_simpson(g, t_grid[i - 1], t_grid[i], quad_tol);
                out.u.values[i][j] = std::pow(T_shift + t_grid[i], -mut) * acc / twoN2;
            }
        }
    }
    return out;
}

OrthogonalOdeResult solve_orthogonal_ode(
    const std::vector<std::function<double(double)>>& E,
    const std::vector<double>& mu_modes, double q, double T_shift,
    const std::vector<double>& t_grid, double t_max, double quad_tol) {
    if (E.size() != mu_modes.size())
        throw ContractViolation("solve_orthogonal_ode: modes mismatch");
    for (double m : mu_modes)
        if (std::fabs(m) < 1e-9)
            throw ContractViolation(
                "solve_orthogonal_ode: kernel mode present (use the kernel solver)");

    OrthogonalOdeResult out;
    out.u.t = t_grid;
    out.u.weight = q;
    out.u.values.assign(t_grid.size(), std::vector<double>(mu_modes.size(), 0.0));
    out.tail_bound.assign(mu_modes.size(), 0.0);

    for (size_t j = 0; j < mu_modes.size(); ++j) {
        const double mu = mu_modes[j];
        if (mu < 0) {
            // stable mode: u(t) = int_0^t e^{mu (t - tau)} E dtau, marched by
            // the exact semigroup between grid nodes
            double u = 0.0;
            double t_prev = 0.0;
            for (size_t i = 0; i < t_grid.size(); ++i) {
                double t = t_grid[i];
                auto g = [&](double tau) { return std::exp(mu * (t - tau)) * E[j](tau); };
                u = u * std::exp(mu * (t - t_prev)) +
                    num::adaptive_simpson(g, t_prev, t, quad_tol);
                out.u.values[i][j] = u;
                t_prev = t;
            }
        } else {
            // unstable mode: the branch vanishing at infinity,
            // u(t) = -int_t^inf e^{mu (t - tau)} E dtau
            double M = 0.0;
            for (double tau : t_grid)
                M = std::max(M, std::fabs(E[j](tau)) * std::pow(T_shift + tau, q));
            std::vector<double> suffix(t_grid.size(), 0.0);
            double acc = 0.0;
            for (size_t i = t_grid.size(); i-- > 0;) {
                double t_i = t_grid[i];
                // the exponential factor localizes the mass near t_i
                double hi = (i + 1 < t_grid.size())
                                ? t_grid[i + 1]
                                : std::min(t_max, t_i + 60.0 / mu);
                auto g = [&](double tau) { return std::exp(mu * (t_i - tau)) * E[j](tau); };
                // shift the previously accumulated suffix to the new base time
                double shift = (i + 1 < t_grid.size())
                                   ? std::exp(mu * (t_i - t_grid[i + 1]))
                                   : 0.0;
                acc = acc * shift + quad_long(g, t_i, hi, quad_tol);
                suffix[i] = acc;
                out.tail_bound[j] = std::max(
                    out.tail_bound[j], M * std::pow(T_shift + t_max, -q) *
                                           std::exp(mu * (t_i - t_max)) / mu);
                out.u.values[i][j] = -suffix[i];
            }
        }
    }
    return out;
}

SlowRateVerdict slow_rate_verdict(const std::vector<double>& t,
                                  const std::vector<double>& dist, int p,
                                  double window_decades) {
    if (t.size() != dist.size() || t.size() < 4)
        throw ContractViolation("slow_rate_verdict: bad series");
    SlowRateVerdict v;
    const double expo = 1.0 / (p - 2.0);
    const double hi = 1.0 + t.back();
    const double lo = hi / std::pow(10.0, window_decades);
    v.window_t_hi = t.back();
    v.window_t_lo = lo - 1.0;
    double cmin = 1e300, cmax = 0.0;
    for (size_t i = 0; i < t.size(); ++i) {
        if (1.0 + t[i] < lo) continue;
        if (!(dist[i] > 0)) continue;
        double c = dist[i] * std::pow(1.0 + t[i], expo);
        cmin = std::min(cmin, c);
        cmax = std::max(cmax, c);
    }
    v.c_lower = cmin;
    v.c_upper = cmax;
    v.ratio = (cmin > 0) ? cmax / cmin : 1e300;
    v.polynomial_regime = v.ratio < 5.0;
    return v;
}

SlowRateVerdict slow_rate_verdict(const flow::FlowRun& run, int p,
                                  double window_decades) {
    std::vector<double> t, d;
    for (const flow::FlowSample& s : run.samples) {
        t.push_back(s.t);
        d.push_back(s.c0_dist);
    }
    SlowRateVerdict v = slow_rate_verdict(t, d, p, window_decades);
    // kernel-projection dominance across the window
    bool found = false;
    for (const flow::FlowSample& s : run.samples) {
        if (!found && s.t >= v.window_t_lo) {
            v.kernel_frac_start = s.kernel_frac;
            found = true;
        }
    }
    v.kernel_frac_end = run.samples.back().kernel_frac;
    return v;
}

std::string weighted_series_csv(const WeightedSeries& s) {
    std::ostringstream os;
    os << "t";
    if (!s.values.empty())
        for (size_t c = 0; c < s.values.front().size(); ++c) os << ",c" << c;
    os << "\n";
    os.precision(17);
    for (size_t i = 0; i < s.t.size(); ++i) {
        os << s.t[i];
        for (double x : s.values[i]) os << ',' << x;
        os << "\n";
    }
    return os.str();
}

WeightedSeries weighted_series_from_csv(const std::string& text) {
    WeightedSeries s;
    std::istringstream is(text);
    std::string line;
    bool header = true;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        std::istringstream ls(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        if (row.empty()) continue;
        s.t.push_back(row.front());
        s.values.emplace_back(row.begin() + 1, row.end());
    }
    return s;
}

}  // namespace yamabe::slow
