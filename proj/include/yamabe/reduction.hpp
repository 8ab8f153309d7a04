// Lyapunov-Schmidt reduction of the Yamabe energy at the product metric:
// solve for the orthogonal correction Phi(v), build the reduced functional
// F(v) on the kernel, fit its leading order p, verify the vanishing of the
// first two terms and the cubic-form identity, and sample the
// gradient-inequality ratio.
//
// F is stored as reference_volume^{2/N} * Y(Psi(v)).  With that scaling the
// physical-measure identities hold verbatim: the kernel gradient of F is the
// L^2 projection of the energy gradient (up to the volume-constraint
// multiplier), and the cubic form is -2(N-1)(N-2) R_inf int(uvw) dV.
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "yamabe/grid.hpp"

namespace yamabe::reduce {

// Reflection-even sector (cos modes only) gauge-fixes the circle rotation and
// makes the kernel one-dimensional; the full sector keeps cos and sin.
enum class Sector { even, full };

struct KernelBasis {
    ManifoldSpec spec;
    Sector sector = Sector::even;
    std::vector<GridFn> basis;  // L2(dV)-orthonormal
    std::vector<int> freqs;     // circle frequency of each basis element
    std::vector<bool> is_sine;

    int dim() const { return int(basis.size()); }
    GridFn combine(const std::vector<double>& coords) const;
};

// Kernel of L_inf in the S^1-symmetric sector: circle frequencies k with
// (2 pi k / T)^2 = n - 2 (within tol).
KernelBasis build_kernel_basis(const ManifoldSpec& spec,
                               Sector sector = Sector::even, double tol = 1e-9);

struct ReducedSample {
    std::vector<double> v_coords;
    GridFn phi;  // orthogonal correction, no kernel component by construction
    GridFn psi;  // 1 + v + phi
    double F_value = 0.0;
    double newton_residual = 0.0;
    int newton_iterations = 0;
};

struct NewtonFailure : Error {
    using Error::Error;
    std::vector<double> residual_history;
};

class LsSolver {
  public:
    LsSolver(const ManifoldSpec& spec, Sector sector = Sector::even,
             double tol = 1e-11, int max_iter = 30);

    const KernelBasis& kernel() const { return basis_; }
    const ManifoldSpec& spec() const { return spec_; }
    double newton_tol() const { return tol_; }

    // Norm cap on v below which the reduction is attempted (L2 of v).
    double smallness_cap() const { return cap_; }
    void set_smallness_cap(double c) { cap_ = c; }

    // Newton solve of the off-kernel Euler-Lagrange equation at 1 + v + phi,
    // with the volume constraint volume(psi) = reference_volume appended and
    // the constant mode carrying the volume adjustment.
    ReducedSample solve_phi(const std::vector<double>& v_coords) const;

    double reduced_F(const std::vector<double>& v_coords) const;
    double F_at_zero() const;
    // Kernel gradient of F via the projection identity (volume-constraint
    // multiplier removed), not finite differences.
    std::vector<double> reduced_dF(const ReducedSample& sample) const;

    // Estimated absolute noise floor of F values (quadrature + roundoff).
    double f_noise_estimate() const;

  private:
    ManifoldSpec spec_;
    KernelBasis basis_;
    double tol_;
    int max_iter_;
    double cap_ = 0.2;

    struct ModeId {
        int k;
        bool sine;
    };
    std::vector<ModeId> unknowns_;  // complement modes incl. the constant

    GridFn assemble_phi(const std::vector<double>& x) const;
    std::vector<double> residual(const GridFn& v_fn,
                                 const std::vector<double>& x) const;
};

struct OrderFit {
    double p_hat = 0.0;   // fitted log-log slope along the maximizing direction
    int p = 0;            // nearest admissible integer order, >= 3
    double F_p_hat_v = 0.0;  // leading coefficient along v_hat
    std::vector<double> v_hat;  // maximizing unit kernel vector (coords)
    bool as_condition = false;  // positive maximum attained
    bool integrable_within_tolerance = false;  // F constant to noise
    // diagnostics
    std::vector<double> dir_slopes;
    std::vector<double> dir_coefficients;
    std::vector<double> sampled_s;
    std::vector<double> sampled_dF;  // along v_hat
    double even_defect = 0.0;  // max |F(s) - F(-s)| along v_hat
};

// Fit the order of the first nonconstant term of F on a geometric s-grid of
// kernel directions; slopes are taken only where |F(s)-F(0)| clears ten times
// the noise floor.
OrderFit fit_order(const LsSolver& solver, double s_lo = 1e-3, double s_hi = 1e-1,
                   int s_count = 13, int directions = 8);

// Cubic forms.  closed: -2(N-1)(N-2) R_inf int(a b c) dV.  fd_energy:
// trilinear third difference of the scaled energy at 1 (valid for any
// mean-zero directions).  fd_reduced: third difference of F along a kernel
// direction, through the reduction.
double cubic_closed(const GridFn& a, const GridFn& b, const GridFn& c);
double cubic_fd_energy(const GridFn& a, const GridFn& b, const GridFn& c,
                       double eps = 0.02);
double cubic_fd_reduced(const LsSolver& solver, const std::vector<double>& v,
                        double s = 0.05);

struct LojasiewiczSample {
    double s = 0.0;
    double ratio = 0.0;
};
struct LojasiewiczReport {
    double theta = 0.0;
    double max_ratio = 0.0;
    std::vector<LojasiewiczSample> samples;
    double loglog_slope = 0.0;  // slope of log(ratio) against log(s)
};

// Ratio |F(v)-F(0)|^{1-theta} / ||dF(v)|| over s-samples in the kernel ball.
LojasiewiczReport lojasiewicz_check(const LsSolver& solver, double theta,
                                    double radius = 0.1, int count = 200);

}  // namespace yamabe::reduce
