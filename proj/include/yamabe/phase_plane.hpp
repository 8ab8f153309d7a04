// Phase-plane analysis of the Yamabe ODE
//     4 u'' - (n-2)^2 u + n(n-2) u^{(n+2)/(n-2)} = 0
// on the (u, v = u') plane: orbits, the conserved Hamiltonian, explicit
// solutions, the period function tau(alpha) with its limits, and the
// width-convexity diagnostics behind period monotonicity.
#pragma once

#include <array>
#include <vector>

#include "yamabe/grid.hpp"

namespace yamabe::phase {

struct OdeParams {
    int n = 4;

    OdeParams() = default;
    explicit OdeParams(int n_) : n(n_) {
        if (n < 3) throw ContractViolation("OdeParams: n must be >= 3");
    }

    // Amplitude of the constant solution, u0 = ((n-2)/n)^{(n-2)/4} in (0,1).
    double u0() const { return std::pow((n - 2.0) / n, (n - 2.0) / 4.0); }
    // Small-orbit period limit T0 = 2 pi / sqrt(n-2).
    double T0() const { return critical_circumference(n); }
    double exponent() const { return (n + 2.0) / (n - 2.0); }  // = N - 1
};

struct PhasePoint {
    double u = 0.0;
    double v = 0.0;
};

std::array<double, 2> vector_field(const PhasePoint& p, const OdeParams& par);

// Conserved H(u,v) = 2 v^2 + (n-2)^2 (u^N - u^2) / 2.
double hamiltonian(const PhasePoint& p, const OdeParams& par);

// Potential U(u) = H/2 - v^2 = ((n-2)/2)^2 (u^N - u^2) and derivatives.
double potential(double u, const OdeParams& par);
double potential_d1(double u, const OdeParams& par);
double potential_d2(double u, const OdeParams& par);
double potential_d3(double u, const OdeParams& par);

struct Orbit {
    OdeParams params;
    std::vector<double> t;
    std::vector<PhasePoint> y;
    double h_initial = 0.0;
    double h_drift = 0.0;  // max_i |H_i - H_0| / (1 + |H_0|)
    bool step_underflow = false;
    PhasePoint last_valid{};
};

// Adaptive Dormand-Prince 5(4) trajectory with mixed abs/rel error control.
Orbit integrate_orbit(const PhasePoint& start, const OdeParams& par,
                      double t_end, double tol, double sample_dt = 0.0);

// Advance a state by exactly dt (adaptive substeps inside).
PhasePoint advance(const PhasePoint& start, const OdeParams& par, double dt,
                   double tol);

enum class ExplicitSolution { constant, spherical };

// Max residual of the ODE over t in [-10, 10] for u == u0 or the
// sphere-patch solution u1 = (cosh t)^{-(n-2)/2} (derivatives in closed form).
double explicit_solution_residual(const OdeParams& par, ExplicitSolution which);

// Full period of the closed orbit through (alpha, 0), alpha in (u0, 1):
// time of the second return to v = 0 on the u > u0 side, event-located by
// sign change plus Newton polish.  Throws on alpha out of range or when no
// return is found before t_cap.
double period(double alpha, const OdeParams& par, double tol = 1e-12,
              double t_cap = 2000.0);

// Turning points z-(beta) < u0 < z+(beta) where U(z) = beta^2 + U(u0),
// for beta in (0, sqrt(-U(u0))).
struct TurningPoints {
    double z_minus = 0.0;
    double z_plus = 0.0;
};
TurningPoints turning_points(double beta, const OdeParams& par);

double beta_max(const OdeParams& par);            // sqrt(-U(u0))
double beta_of_alpha(double alpha, const OdeParams& par);

// Period via the energy-level quadrature 2 int dz / sqrt(H/2 - U(z)) with the
// endpoint singularity removed by the z = z(+-) -+ s^2 substitution.
double period_quadrature(double beta, const OdeParams& par, double tol = 1e-12);

// Sampled period function on (u0, 1).
struct PeriodTable {
    std::vector<double> alpha, tau, H, z_minus, z_plus;
};
PeriodTable build_period_table(const OdeParams& par, int count,
                               double margin_lo = 1e-4, double margin_hi = 1e-6);

struct ConvexityReport {
    std::vector<double> beta;
    std::vector<double> width;        // z_plus - z_minus
    std::vector<double> second_diff;  // discrete second differences of width
    std::vector<double> tau;          // periods on the induced alpha grid
    double A = 0.0;                   // -U'''(u0) / (3 U''(u0)^2)
    double min_second_diff = 0.0;
    bool widths_convex = false;
    bool tau_increasing = false;
};
ConvexityReport width_convexity_report(const OdeParams& par, int grid_size);

// Richardson-extrapolated limits of tau at the ends of its domain.
double period_limit_at_u0(const OdeParams& par);

// Nonconstant CSC branches in [g_T]: for every positive integer k with
// T/k > T0, the alpha solving tau(alpha) = T/k on the monotone period
// function.  The constant branch always exists.
struct CscBranch {
    int k = 0;
    double alpha = 0.0;
    double tau = 0.0;
};
std::vector<CscBranch> csc_enumerate(double T, const OdeParams& par,
                                     double tol = 1e-10);

}  // namespace yamabe::phase
