#include "yamabe/phase_plane.hpp"

#include <algorithm>
#include <cmath>

#include "yamabe/numerics.hpp"

namespace yamabe::phase {

namespace {

struct State {
    double u, v;
};

inline State rhs(const State& y, const OdeParams& par) {
    const double n = par.n;
    const double f = ((n - 2.0) * (n - 2.0) * y.u -
                      n * (n - 2.0) * std::pow(y.u, par.exponent())) /
                     4.0;
    return {y.v, f};
}

// Dormand-Prince 5(4) pair with FSAL.
struct DP45 {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                            c5 = 8.0 / 9;
    // advances y by h; k1 must hold rhs(y); on exit k1 holds rhs(y_new).
    // returns (y_new, err_estimate per component)
    static void step(const OdeParams& par, const State& y, double h, State& k1,
                     State& out, State& err) {
        auto ax = [](const State& a, double s, const State& b) -> State {
            return {a.u + s * b.u, a.v + s * b.v};
        };
        State k2 = rhs(ax(y, h * (1.0 / 5), k1), par);
        State y3{y.u + h * (3.0 / 40 * k1.u + 9.0 / 40 * k2.u),
                 y.v + h * (3.0 / 40 * k1.v + 9.0 / 40 * k2.v)};
        State k3 = rhs(y3, par);
        State y4{y.u + h * (44.0 / 45 * k1.u - 56.0 / 15 * k2.u + 32.0 / 9 * k3.u),
                 y.v + h * (44.0 / 45 * k1.v - 56.0 / 15 * k2.v + 32.0 / 9 * k3.v)};
        State k4 = rhs(y4, par);
        State y5{y.u + h * (19372.0 / 6561 * k1.u - 25360.0 / 2187 * k2.u +
                            64448.0 / 6561 * k3.u - 212.0 / 729 * k4.u),
                 y.v + h * (19372.0 / 6561 * k1.v - 25360.0 / 2187 * k2.v +
                            64448.0 / 6561 * k3.v - 212.0 / 729 * k4.v)};
        State k5 = rhs(y5, par);
        State y6{y.u + h * (9017.0 / 3168 * k1.u - 355.0 / 33 * k2.u +
                            46732.0 / 5247 * k3.u + 49.0 / 176 * k4.u -
                            5103.0 / 18656 * k5.u),
                 y.v + h * (9017.0 / 3168 * k1.v - 355.0 / 33 * k2.v +
                            46732.0 / 5247 * k3.v + 49.0 / 176 * k4.v -
                            5103.0 / 18656 * k5.v)};
        State k6 = rhs(y6, par);
        out = {y.u + h * (35.0 / 384 * k1.u + 500.0 / 1113 * k3.u +
                          125.0 / 192 * k4.u - 2187.0 / 6784 * k5.u +
                          11.0 / 84 * k6.u),
               y.v + h * (35.0 / 384 * k1.v + 500.0 / 1113 * k3.v +
                          125.0 / 192 * k4.v - 2187.0 / 6784 * k5.v +
                          11.0 / 84 * k6.v)};
        State k7 = rhs(out, par);
        // difference of the 5th and 4th order solutions
        err = {h * (71.0 / 57600 * k1.u - 71.0 / 16695 * k3.u +
                    71.0 / 1920 * k4.u - 17253.0 / 339200 * k5.u +
                    22.0 / 525 * k6.u - 1.0 / 40 * k7.u),
               h * (71.0 / 57600 * k1.v - 71.0 / 16695 * k3.v +
                    71.0 / 1920 * k4.v - 17253.0 / 339200 * k5.v +
                    22.0 / 525 * k6.v - 1.0 / 40 * k7.v)};
        k1 = k7;
    }
};

double err_norm(const State& err, const State& y0, const State& y1, double tol) {
    const double atol = 1e-13;
    double s1 = std::fabs(err.u) /
                (atol + tol * std::max(std::fabs(y0.u), std::fabs(y1.u)));
    double s2 = std::fabs(err.v) /
                (atol + tol * std::max(std::fabs(y0.v), std::fabs(y1.v)));
    return std::max(s1, s2);
}

// Integrate from y over exactly dt with adaptive steps.
State advance_state(State y, const OdeParams& par, double dt, double tol) {
    if (dt == 0.0) return y;
    double t = 0.0;
    double h = dt;
    State k1 = rhs(y, par);
    int guard = 0;
    while (t < dt && guard++ < 1000000) {
        h = std::min(h, dt - t);
        State out, err;
        State k1_try = k1;
        DP45::step(par, y, h, k1_try, out, err);
        double e = err_norm(err, y, out, tol);
        if (e <= 1.0) {
            y = out;
            k1 = k1_try;
            t += h;
            h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(e, 1e-10), -0.2)));
        } else {
            h *= std::max(0.1, 0.9 * std::pow(e, -0.2));
        }
        if (h < 1e-15 * std::max(1.0, dt)) throw Error("advance: step underflow");
    }
    return y;
}

}  // namespace

std::array<double, 2> vector_field(const PhasePoint& p, const OdeParams& par) {
    if (!(p.u > 0)) throw ContractViolation("vector_field: u must be positive");
    State d = rhs({p.u, p.v}, par);
    return {d.u, d.v};
}

double hamiltonian(const PhasePoint& p, const OdeParams& par) {
    const double n = par.n;
    const double N = 2.0 * n / (n - 2.0);
    return 2.0 * p.v * p.v +
           (n - 2.0) * (n - 2.0) * (std::pow(p.u, N) - p.u * p.u) / 2.0;
}

double potential(double u, const OdeParams& par) {
    const double n = par.n;
    const double N = 2.0 * n / (n - 2.0);
    return 0.25 * (n - 2.0) * (n - 2.0) * (std::pow(u, N) - u * u);
}

double potential_d1(double u, const OdeParams& par) {
    const double n = par.n;
    const double N = 2.0 * n / (n - 2.0);
    return 0.25 * (n - 2.0) * (n - 2.0) * (N * std::pow(u, N - 1.0) - 2.0 * u);
}

double potential_d2(double u, const OdeParams& par) {
    const double n = par.n;
    const double N = 2.0 * n / (n - 2.0);
    return 0.25 * (n - 2.0) * (n - 2.0) * (N * (N - 1.0) * std::pow(u, N - 2.0) - 2.0);
}

double potential_d3(double u, const OdeParams& par) {
    const double n = par.n;
    const double N = 2.0 * n / (n - 2.0);
    return 0.25 * (n - 2.0) * (n - 2.0) * N * (N - 1.0) * (N - 2.0) *
           std::pow(u, N - 3.0);
}

Orbit integrate_orbit(const PhasePoint& start, const OdeParams& par,
                      double t_end, double tol, double sample_dt) {
    if (!(start.u > 0)) throw ContractViolation("integrate_orbit: u must be positive");
    Orbit orb;
    orb.params = par;
    State y{start.u, start.v};
    orb.h_initial = hamiltonian(start, par);
    double t = 0.0;
    double h = std::min(0.01, t_end);
    double next_sample = 0.0;
    State k1 = rhs(y, par);
    orb.t.push_back(0.0);
    orb.y.push_back(start);
    next_sample = sample_dt;
    int guard = 0;
    while (t < t_end && guard++ < 10000000) {
        h = std::min(h, t_end - t);
        State out, err;
        State k1_try = k1;
        DP45::step(par, y, h, k1_try, out, err);
        double e = err_norm(err, y, out, tol);
        if (e <= 1.0) {
            y = out;
            k1 = k1_try;
            t += h;
            if (sample_dt <= 0.0 || t >= next_sample || t >= t_end) {
                orb.t.push_back(t);
                orb.y.push_back({y.u, y.v});
                while (sample_dt > 0.0 && next_sample <= t) next_sample += sample_dt;
            }
            double hd = std::fabs(hamiltonian({y.u, y.v}, par) - orb.h_initial) /
                        (1.0 + std::fabs(orb.h_initial));
            orb.h_drift = std::max(orb.h_drift, hd);
            h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(e, 1e-10), -0.2)));
        } else {
            h *= std::max(0.1, 0.9 * std::pow(e, -0.2));
        }
        if (h < 1e-14 * std::max(1.0, t_end)) {
            orb.step_underflow = true;
            orb.last_valid = {y.u, y.v};
            break;
        }
    }
    orb.last_valid = {y.u, y.v};
    return orb;
}

PhasePoint advance(const PhasePoint& start, const OdeParams& par, double dt,
                   double tol) {
    State y = advance_state({start.u, start.v}, par, dt, tol);
    return {y.u, y.v};
}

double explicit_solution_residual(const OdeParams& par, ExplicitSolution which) {
    const double n = par.n;
    const double p = par.exponent();
    double worst = 0.0;
    if (which == ExplicitSolution::constant) {
        const double u0 = par.u0();
        worst = std::fabs(-(n - 2.0) * (n - 2.0) * u0 +
                          n * (n - 2.0) * std::pow(u0, p));
    } else {
        const double mexp = 0.5 * (n - 2.0);
        const int samples = 2001;
        for (int i = 0; i < samples; ++i) {
            double t = -10.0 + 20.0 * i / (samples - 1);
            double ch = std::cosh(t);
            double u = std::pow(ch, -mexp);
            // u'' = m^2 u - m(m+1) cosh^{-m-2}
            double upp = mexp * mexp * u - mexp * (mexp + 1.0) * std::pow(ch, -mexp - 2.0);
            double res = 4.0 * upp - (n - 2.0) * (n - 2.0) * u +
                         n * (n - 2.0) * std::pow(u, p);
            worst = std::max(worst, std::fabs(res));
        }
    }
    return worst;
}

namespace {

// Locate v = 0 along the trajectory starting at y0 inside (0, dt_max], given
// a sign change of v between t_lo and t_hi (times relative to y0).  Newton on
// t with the trajectory re-integrated from y0; falls back to bisection steps
// when Newton leaves the bracket.
double locate_v_zero(const State& y0, const OdeParams& par, double t_lo,
                     double t_hi, double tol) {
    const double flo = advance_state(y0, par, t_lo, tol).v;
    double t = 0.5 * (t_lo + t_hi);
    double t_best = t, v_best = 1e300;
    for (int it = 0; it < 80; ++it) {
        State y = advance_state(y0, par, t, tol);
        double dv = rhs(y, par).v;
        if (std::fabs(y.v) < v_best) {
            v_best = std::fabs(y.v);
            t_best = t;
        }
        // convergence is judged at the evaluated point, before t moves on
        if (std::fabs(y.v) <= 1e-14 * (1.0 + std::fabs(dv))) return t;
        if ((flo < 0 && y.v > 0) || (flo > 0 && y.v < 0))
            t_hi = t;
        else
            t_lo = t;
        if (t_hi - t_lo < 1e-15 * std::max(1.0, t_hi)) break;
        double t_newton = (dv != 0.0) ? t - y.v / dv : 0.5 * (t_lo + t_hi);
        t = (t_newton > t_lo && t_newton < t_hi) ? t_newton : 0.5 * (t_lo + t_hi);
    }
    return t_best;
}

}  // namespace

double period(double alpha, const OdeParams& par, double tol, double t_cap) {
    const double u0 = par.u0();
    if (!(alpha > u0 && alpha < 1.0))
        throw ContractViolation("period: alpha must lie in (u0, 1)");
    State y{alpha, 0.0};
    State k1 = rhs(y, par);
    double t = 0.0;
    double h = 0.01;
    double t_prev = 0.0;
    State y_prev = y;
    int crossings = 0;
    int guard = 0;
    while (t < t_cap && guard++ < 20000000) {
        State out, err;
        State k1_try = k1;
        DP45::step(par, y, h, k1_try, out, err);
        double e = err_norm(err, y, out, tol);
        if (e <= 1.0) {
            t_prev = t;
            y_prev = y;
            y = out;
            k1 = k1_try;
            t += h;
            if (y_prev.v != 0.0 && (y_prev.v < 0.0) != (y.v < 0.0)) {
                double tc = t_prev + locate_v_zero(y_prev, par, 0.0, t - t_prev, tol);
                State yc = advance_state(y_prev, par, tc - t_prev, tol);
                // ignore grazing passes through the equilibrium
                if (std::fabs(yc.u - u0) > 1e-10) {
                    ++crossings;
                    if (crossings == 2) {
                        if (yc.u <= u0)
                            throw Error("period: second v=0 return on wrong side");
                        return tc;
                    }
                }
            }
            h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(e, 1e-10), -0.2)));
        } else {
            h *= std::max(0.1, 0.9 * std::pow(e, -0.2));
        }
        if (h < 1e-15) throw Error("period: step underflow");
    }
    throw Error("period: no return detected before t_cap");
}

double beta_max(const OdeParams& par) { return std::sqrt(-potential(par.u0(), par)); }

double beta_of_alpha(double alpha, const OdeParams& par) {
    double d = potential(alpha, par) - potential(par.u0(), par);
    return std::sqrt(std::max(0.0, d));
}

TurningPoints turning_points(double beta, const OdeParams& par) {
    const double u0 = par.u0();
    if (!(beta > 0.0 && beta < beta_max(par)))
        throw ContractViolation("turning_points: beta out of range");
    const double level = beta * beta + potential(u0, par);
    auto f = [&](double u) { return potential(u, par) - level; };
    TurningPoints tp;
    tp.z_minus = num::bisect(f, 1e-14, u0, 1e-15, 300);
    tp.z_plus = num::bisect(f, u0, 1.0 - 1e-16, 1e-15, 300);
    return tp;
}

namespace {

// Stable (U(z) - U(z + dir*sigma)) / sigma, the divided difference whose
// square root is the period integrand after the u = z + dir*s^2 substitution.
// Direct subtraction cancels catastrophically for small sigma; a 4-term
// Taylor form takes over there (and everywhere when the whole span is tiny).
struct DividedPotential {
    double z, dir, span;
    const OdeParams* par;
    double d1, d2, d3, d4;

    DividedPotential(double z_, double dir_, double span_, const OdeParams& p)
        : z(z_), dir(dir_), span(span_), par(&p) {
        const double n = p.n;
        const double N = 2.0 * n / (n - 2.0);
        const double c = 0.25 * (n - 2.0) * (n - 2.0);
        d1 = potential_d1(z, p);
        d2 = potential_d2(z, p);
        d3 = potential_d3(z, p);
        d4 = c * N * (N - 1.0) * (N - 2.0) * (N - 3.0) * std::pow(z, N - 4.0);
    }

    double operator()(double sigma) const {
        bool taylor_all = span <= 1e-3;
        if (sigma <= (taylor_all ? span : 1e-4 * span) || sigma == 0.0) {
            // -(U(z + dir*s) - U(z))/s expanded around z
            double q = -(d1 * dir + sigma * (d2 / 2.0 +
                        sigma * dir * (d3 / 6.0 + sigma * (d4 / 24.0) * dir)));
            return q;
        }
        return (potential(z, *par) - potential(z + dir * sigma, *par)) / sigma;
    }
};

}  // namespace

double period_quadrature(double beta, const OdeParams& par, double tol) {
    const double u0 = par.u0();
    TurningPoints tp = turning_points(beta, par);
    // After u = z -+ s^2 the integrand is 2/sqrt(Q(s^2)) with
    // Q(sigma) = (U(z) - U(z -+ sigma))/sigma, smooth and positive across the
    // turning point.
    double sL = std::sqrt(u0 - tp.z_minus);
    DividedPotential qL(tp.z_minus, +1.0, u0 - tp.z_minus, par);
    auto fL = [&](double s) {
        double q = qL(s * s);
        return (q <= 0.0) ? 0.0 : 2.0 / std::sqrt(q);
    };
    double sR = std::sqrt(tp.z_plus - u0);
    DividedPotential qR(tp.z_plus, -1.0, tp.z_plus - u0, par);
    auto fR = [&](double s) {
        double q = qR(s * s);
        return (q <= 0.0) ? 0.0 : 2.0 / std::sqrt(q);
    };
    double half = num::adaptive_simpson(fL, 0.0, sL, tol) +
                  num::adaptive_simpson(fR, 0.0, sR, tol);
    return 2.0 * half;
}

PeriodTable build_period_table(const OdeParams& par, int count, double margin_lo,
                               double margin_hi) {
    PeriodTable tab;
    const double u0 = par.u0();
    const double lo = u0 + margin_lo * (1.0 - u0);
    const double hi = 1.0 - margin_hi * (1.0 - u0);
    for (int i = 0; i < count; ++i) {
        // geometric clustering toward the divergent end
        double s = double(i) / (count - 1);
        double alpha = lo + (hi - lo) * (std::expm1(3.0 * s) / std::expm1(3.0));
        double beta = beta_of_alpha(alpha, par);
        TurningPoints tp = turning_points(beta, par);
        tab.alpha.push_back(alpha);
        tab.tau.push_back(period_quadrature(beta, par));
        tab.H.push_back(hamiltonian({alpha, 0.0}, par));
        tab.z_minus.push_back(tp.z_minus);
        tab.z_plus.push_back(tp.z_plus);
    }
    return tab;
}

ConvexityReport width_convexity_report(const OdeParams& par, int grid_size) {
    ConvexityReport rep;
    const double bmax = beta_max(par);
    const double lo = 1e-3 * bmax, hi = (1.0 - 1e-6) * bmax;
    for (int i = 0; i < grid_size; ++i) {
        double beta = lo + (hi - lo) * i / (grid_size - 1);
        TurningPoints tp = turning_points(beta, par);
        rep.beta.push_back(beta);
        rep.width.push_back(tp.z_plus - tp.z_minus);
        rep.tau.push_back(period_quadrature(beta, par));
    }
    for (size_t i = 1; i + 1 < rep.width.size(); ++i)
        rep.second_diff.push_back(rep.width[i + 1] - 2.0 * rep.width[i] +
                                  rep.width[i - 1]);
    rep.min_second_diff = rep.second_diff.empty()
                              ? 0.0
                              : *std::min_element(rep.second_diff.begin(),
                                                  rep.second_diff.end());
    const double u0 = par.u0();
    rep.A = -potential_d3(u0, par) /
            (3.0 * potential_d2(u0, par) * potential_d2(u0, par));
    rep.widths_convex = rep.min_second_diff >= -1e-6;
    rep.tau_increasing = true;
    for (size_t i = 1; i < rep.tau.size(); ++i)
        if (!(rep.tau[i] > rep.tau[i - 1])) rep.tau_increasing = false;
    return rep;
}

double period_limit_at_u0(const OdeParams& par) {
    // tau(alpha) = T0 + c (alpha - u0) + O((alpha - u0)^2); two Richardson
    // stages on a geometric alpha sequence remove the first two orders.
    const double u0 = par.u0();
    const double h0 = 1e-2 * (1.0 - u0);
    double tau[4];
    for (int j = 0; j < 4; ++j) {
        double alpha = u0 + h0 / std::pow(2.0, j);
        tau[j] = period_quadrature(beta_of_alpha(alpha, par), par);
    }
    double r1[3];
    for (int j = 0; j < 3; ++j) r1[j] = 2.0 * tau[j + 1] - tau[j];
    double r2[2];
    for (int j = 0; j < 2; ++j) r2[j] = (4.0 * r1[j + 1] - r1[j]) / 3.0;
    return r2[1];
}

std::vector<CscBranch> csc_enumerate(double T, const OdeParams& par, double tol) {
    if (!(T > 0)) throw ContractViolation("csc_enumerate: T must be positive");
    std::vector<CscBranch> out;
    const double T0 = par.T0();
    const double bmax = beta_max(par);
    const double quad_tol = 1e-13;
    for (int k = 1; T / k > T0; ++k) {
        const double target = T / k;
        // bracket in beta: tau is increasing with tau(0+) = T0
        double blo = 1e-8 * bmax;
        if (period_quadrature(blo, par, quad_tol) >= target) continue;
        double bhi = bmax * 0.5;
        bool bracketed = false;
        for (int j = 0; j < 60; ++j) {
            if (period_quadrature(bhi, par, quad_tol) > target) {
                bracketed = true;
                break;
            }
            bhi = bmax - 0.5 * (bmax - bhi);
        }
        if (!bracketed) continue;
        auto f = [&](double b) { return period_quadrature(b, par, quad_tol) - target; };
        double b = num::bisect(f, blo, bhi, std::min(tol, 1e-13) * bmax, 300);
        CscBranch br;
        br.k = k;
        br.alpha = turning_points(b, par).z_plus;
        br.tau = period_quadrature(b, par, quad_tol);
        out.push_back(br);
    }
    return out;
}

}  // namespace yamabe::phase
