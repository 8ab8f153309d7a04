// Laplacian and linearized-operator spectra on the product metric, kernel
// dimension (degeneracy), and the Monte Carlo check that the cubic integral
// of the first CP^n eigenfunction does not vanish.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "yamabe/grid.hpp"

namespace yamabe::modes {

// Laplacian eigenvalue lam = (2 pi k / T)^2 + l(l + n - 2), geometer's sign
// convention (Delta phi = -lam phi).
struct EigenMode {
    int k = 0;          // circle frequency index
    int l = 0;          // sphere harmonic degree
    double lam = 0.0;   // Laplacian eigenvalue
    double mu = 0.0;    // eigenvalue of L_inf = (n-1) Delta + R_inf
    int mult = 1;       // circle multiplicity x sphere multiplicity
};

enum class SpectralLabel { up, zero, down };  // sign of mu
SpectralLabel label_of(double mu, double tol = 1e-9);
const char* label_name(SpectralLabel l);

// Dimension of degree-l spherical harmonics on S^{n-1}.
long sphere_multiplicity(int n, int l);

// All modes with lam <= lam_max, sorted by lam (then k, l).
std::vector<EigenMode> laplace_spectrum(const ManifoldSpec& spec, double lam_max);

struct KernelInfo {
    int dim = 0;         // total multiplicity of modes with lam = n-2
    int even_dim = 0;    // reflection-even S^1-symmetric sector (cos, l = 0)
    std::vector<EigenMode> modes;
};
KernelInfo kernel_dimension(const ManifoldSpec& spec, double tol = 1e-9);

struct LinearizedSpectrum {
    std::vector<EigenMode> modes;   // count smallest |mu|, sorted by |mu|
    double predicted_rate = 0.0;    // min (n-1)(lam-(n-2)) over S^1-symmetric
                                    // non-constant modes with lam > n-2
    bool degenerate = false;        // kernel mode present: rate prediction
                                    // does not govern the slow dynamics
};
LinearizedSpectrum linearized_spectrum(const ManifoldSpec& spec, int count);

// Seeded, platform-independent RNG: xoshiro256++ seeded via splitmix64.
class Rng {
  public:
    explicit Rng(std::uint64_t seed);
    std::uint64_t next_u64();
    double next_double();  // uniform in [0, 1)
    double next_normal();  // standard normal (Box-Muller)
    // Deterministic per-shard stream derived from a master seed.
    static Rng shard(std::uint64_t master_seed, std::uint64_t shard_index);

  private:
    std::uint64_t s_[4];
    bool have_spare_ = false;
    double spare_ = 0.0;
};

struct MonteCarloEstimate {
    double value = 0.0;      // integral estimate over the unit sphere
    double std_error = 0.0;
    long samples = 0;
};

// Monte Carlo estimate of int h^3 over S^{2 n_cp + 1} subset C^{n_cp + 1},
// h(z) = 2 Re(z1 conj(z2) + z2 conj(z3) + z3 conj(z1)).  h is invariant under
// the diagonal circle action, so nonvanishing upstairs decides nonvanishing
// of the descended first-eigenfunction cubic integral on CP^{n_cp}.
MonteCarloEstimate cpn_cubic_integral(int n_cp, long samples, std::uint64_t seed);

// Controls: <h, 1> (mean of an eigenfunction, expect 0) and the cubic of the
// conjugation-odd polynomial Im(z1 conj(z2)) (expect 0).
MonteCarloEstimate cpn_mean_of_h(int n_cp, long samples, std::uint64_t seed);
MonteCarloEstimate cpn_cubic_antisymmetric_control(int n_cp, long samples,
                                                   std::uint64_t seed);

// Surface area of the unit d-sphere S^d.
double sphere_area(int d);

// CSV export: k, l, lam, mu, mult, label.
std::string spectrum_csv(const std::vector<EigenMode>& modes);

}  // namespace yamabe::modes
