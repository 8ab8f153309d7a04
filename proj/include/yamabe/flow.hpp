// Volume-normalized Yamabe flow for S^1-symmetric conformal factors:
//   (N-2) du/dt = (N+2) u^{2-N} u'' - R_inf u^{3-N} + r u,
// integrated by a first-order IMEX step (frozen-coefficient implicit
// diffusion, explicit reaction) with step-doubling error control, plus the
// exponential-vs-polynomial rate fits on the recorded distance series.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "yamabe/grid.hpp"

namespace yamabe::flow {

struct FlowConfig {
    ManifoldSpec spec;
    GridFn u0;                     // initial factor, volume = reference_volume
    double dt_init = 1e-4;
    double dt_max = 1.0;
    double t_end = 10.0;
    double tol = 1e-9;             // step-accept tolerance (C0, step doubling)
    bool relative_tol = false;     // scale tol by the current distance to u_inf
                                   // (keeps the neutral kernel mode unpolluted
                                   // over long polynomial-decay runs)
    double convergence_c0 = 1e-11; // stop when ||u - u_inf||_C0 falls below
    double sample_ratio = 1.07;    // geometric spacing in (1 + t)
    std::optional<GridFn> u_inf;   // default: constant 1
    bool store_snapshots = true;

    void validate() const;
};

enum class Termination { reached_t_end, converged, positivity_loss, dt_underflow };
const char* termination_name(Termination t);

struct FlowSample {
    double t = 0.0;
    double l2_dist = 0.0;
    double c0_dist = 0.0;
    double r = 0.0;
    double energy = 0.0;
    double volume_rel = 0.0;   // volume / reference_volume
    double kernel_frac = 0.0;  // ||proj_ker (u - u_inf)|| / ||u - u_inf||
};

struct FlowRun {
    ManifoldSpec spec;
    std::vector<FlowSample> samples;
    std::vector<GridFn> snapshots;  // parallel to samples when stored
    Termination termination = Termination::reached_t_end;
    double t_final = 0.0;
    long steps_accepted = 0;
    long steps_rejected = 0;
    double max_energy_increase = 0.0;  // largest per-step increase of Y
    double max_r_increase = 0.0;       // largest per-step increase of r
    // largest per-step increase measured against the effective step tolerance
    double worst_energy_ratio = 0.0;
    double worst_r_ratio = 0.0;
    double tol = 0.0;  // config tol, for the 10x checks
    bool relative_tol = false;
};

// One IMEX step with local Richardson extrapolation; error estimate is the
// C0 difference between the full step and two half steps.  The result is
// renormalized to the reference volume.  Throws on positivity loss.
struct StepResult {
    GridFn u_next;
    double error_estimate = 0.0;
};
StepResult step(const GridFn& u, double dt);

FlowRun run(const FlowConfig& config);

enum class RateModel { exponential, polynomial, inconclusive };
const char* rate_model_name(RateModel m);

struct RateFit {
    RateModel model = RateModel::inconclusive;
    double delta = 0.0;  // exponential rate
    double q = 0.0;      // polynomial exponent
    double r2_exp = 0.0;
    double r2_poly = 0.0;
    int points = 0;
    double window_t_lo = 0.0, window_t_hi = 0.0;
};

// Least squares of log(dist) against t and against log(1+t) over the fit
// window; the transient (first fifth of the log-time range) and the converged
// floor are excluded.  Model chosen by r^2 with a 0.01 superiority margin.
RateFit fit_rate(const std::vector<double>& t, const std::vector<double>& dist,
                 double floor = 1e-11, double transient_fraction = 0.2,
                 int min_points = 20);
RateFit fit_rate(const FlowRun& run, bool use_c0 = true);

struct ProbeResult {
    std::string label;
    double amplitude = 0.0;
    bool skipped = false;  // zero amplitude: immediate convergence
    RateFit fit;
    bool anomalous = false;  // neither model fits the decay
};

// Scan of initial perturbations: for each (mode frequency, amplitude) start
// the flow from the normalized 1 + a cos(2 pi k t / T) and tabulate the fits.
std::vector<ProbeResult> basin_probe(const ManifoldSpec& spec,
                                     const std::vector<int>& freqs,
                                     const std::vector<double>& amplitudes,
                                     double t_end, double tol = 1e-9);

// CSV export: t, l2_dist, c0_dist, r, energy, volume.
std::string flow_csv(const FlowRun& run);

}  // namespace yamabe::flow
