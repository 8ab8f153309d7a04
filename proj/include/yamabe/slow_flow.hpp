// Slow-convergence machinery as standalone pieces: the polynomial-decay
// ansatz and its defining ODE, the scaled Hessian weights of the leading
// kernel polynomial, the explicit solutions of the kernel-projected and
// kernel-orthogonal linear problems in weighted norms, and the two-sided
// polynomial-rate verdict on a flow run.
#pragma once

#include <functional>
#include <vector>

#include "yamabe/flow.hpp"
#include "yamabe/grid.hpp"

namespace yamabe::slow {

// phi(t) = (T+t)^{-1/(p-2)} (2(N-2)/(p(p-2)F_p(v_hat)))^{1/(p-2)} v_hat,
// the solution of 2(N-2) phi' + DF_p(phi) = 0 along the maximizing direction.
struct Ansatz {
    int p = 4;
    double F_p_v_hat = 1.0;      // > 0 (positivity condition)
    std::vector<double> v_hat;   // unit kernel vector (coordinates)
    double T_shift = 100.0;
    double N = 4.0;

    void validate() const;
    double coefficient() const;               // the (...)^{1/(p-2)} factor
    double amplitude(double t) const;         // scalar multiplying v_hat
    double amplitude_derivative(double t) const;
    std::vector<double> phi(double t) const;  // kernel vector at time t
};

// Max over the grid of |2(N-2) phi' + DF_p(phi)| (vector sup), with
// DF_p(lambda v_hat) = p |lambda|^{p-1} F_p(v_hat) v_hat.
double phi_ode_residual(const Ansatz& a, const std::vector<double>& t_grid);

struct HessianWeights {
    std::vector<double> mu;                  // eigenvalues, ascending
    std::vector<std::vector<double>> frame;  // orthonormal eigenvectors
    double reconstruction_error = 0.0;
};

// Eigen-decomposition of (2(N-2)/(p(p-2)F_p(v_hat))) D^2 F_p(v_hat), the
// Hessian taken by central differences of the supplied homogeneous F_p.
HessianWeights hessian_weights(
    const std::function<double(const std::vector<double>&)>& F_p,
    const std::vector<double>& v_hat, int p, double N, double fd_step = 1e-3);

// Vector-valued time series with a weight exponent attached.
struct WeightedSeries {
    std::vector<double> t;
    std::vector<std::vector<double>> values;
    double weight = 0.0;
};

enum class NormKind { sup_gamma, sup_gamma_with_derivative, l2_q, c0_q };

struct WeightedNormResult {
    double value = 0.0;
    bool divergent = false;  // weighted values still growing at the grid end
};
WeightedNormResult weighted_norm(const WeightedSeries& s, NormKind kind,
                                 double weight, double T_shift);

// Explicit solution of 2(N-2) u_j' + mu_j/(T+t) u_j = E_j with finite
// C0_gamma norm and zero projection of u(0) onto the fast eigendirections:
//   gamma > mu_j/(2(N-2)):  u_j(t) = -(2(N-2))^{-1} (T+t)^{-mut} int_t^inf ...
//   gamma < mu_j/(2(N-2)):  the int_0^t variant with u_j(0) = 0.
// Tail integrals are truncated at t_max; the analytic remainder bound from
// the weight assumption is reported per mode, never silently dropped.
struct KernelOdeResult {
    WeightedSeries u;
    std::vector<double> tail_bound;
};
KernelOdeResult solve_kernel_ode(
    const std::vector<std::function<double(double)>>& E, double gamma,
    const std::vector<double>& mu, double T_shift, double N,
    const std::vector<double>& t_grid, double t_max, double quad_tol = 1e-12);

// Mode-wise Duhamel solution of u_i' = mu_i u_i + E_i for non-kernel modes of
// the linearized operator (mu_i its eigenvalue; decaying modes integrate from
// 0 with u(0) = 0, growing modes integrate the vanishing-at-infinity branch).
// Kernel modes are rejected.
struct OrthogonalOdeResult {
    WeightedSeries u;
    std::vector<double> tail_bound;
};
OrthogonalOdeResult solve_orthogonal_ode(
    const std::vector<std::function<double(double)>>& E,
    const std::vector<double>& mu_modes, double q, double T_shift,
    const std::vector<double>& t_grid, double t_max, double quad_tol = 1e-12);

struct SlowRateVerdict {
    bool polynomial_regime = false;
    double c_lower = 0.0;   // min of dist * (1+t)^{1/(p-2)} over the window
    double c_upper = 0.0;   // max of the same
    double ratio = 0.0;     // c_upper / c_lower
    double kernel_frac_start = 0.0;
    double kernel_frac_end = 0.0;
    double window_t_lo = 0.0, window_t_hi = 0.0;
};

// Two-sided polynomial-rate check over the trailing window of a distance
// series (window_decades decades of 1+t).
SlowRateVerdict slow_rate_verdict(const std::vector<double>& t,
                                  const std::vector<double>& dist, int p,
                                  double window_decades = 1.0);
SlowRateVerdict slow_rate_verdict(const flow::FlowRun& run, int p,
                                  double window_decades = 1.0);

// CSV round trip for weighted series: columns t, c0, c1, ...
std::string weighted_series_csv(const WeightedSeries& s);
WeightedSeries weighted_series_from_csv(const std::string& text);

}  // namespace yamabe::slow
