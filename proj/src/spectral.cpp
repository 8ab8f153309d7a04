#include "yamabe/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace yamabe::modes {

namespace {
constexpr double kPi = std::numbers::pi;
}

SpectralLabel label_of(double mu, double tol) {
    if (std::fabs(mu) < tol) return SpectralLabel::zero;
    return mu > 0 ? SpectralLabel::up : SpectralLabel::down;
}

const char* label_name(SpectralLabel l) {
    switch (l) {
        case SpectralLabel::up: return "up";
        case SpectralLabel::zero: return "zero";
        case SpectralLabel::down: return "down";
    }
    return "?";
}

long sphere_multiplicity(int n, int l) {
    // dim H_l(S^{n-1}) = C(l+n-1, l) - C(l+n-3, l-2)
    if (l == 0) return 1;
    if (l == 1) return n;
    auto binom = [](long a, long b) -> long {
        if (b < 0 || b > a) return 0;
        long r = 1;
        for (long i = 1; i <= b; ++i) r = r * (a - b + i) / i;
        return r;
    };
    return binom(l + n - 1, l) - binom(l + n - 3, l - 2);
}

std::vector<EigenMode> laplace_spectrum(const ManifoldSpec& spec, double lam_max) {
    if (!(lam_max > 0)) throw ContractViolation("laplace_spectrum: lam_max must be > 0");
    const double R = spec.scalar_curvature();
    std::vector<EigenMode> out;
    const double w0 = 2.0 * kPi / spec.T;
    for (int k = 0; k * k * w0 * w0 <= lam_max; ++k) {
        double circle = double(k) * k * w0 * w0;
        for (int l = 0;; ++l) {
            double sphere = double(l) * (l + spec.n - 2);
            double lam = circle + sphere;
            if (lam > lam_max) break;
            EigenMode m;
            m.k = k;
            m.l = l;
            m.lam = lam;
            m.mu = R - (spec.n - 1) * lam;
            m.mult = int((k == 0 ? 1 : 2) * sphere_multiplicity(spec.n, l));
            out.push_back(m);
        }
    }
    std::sort(out.begin(), out.end(), [](const EigenMode& a, const EigenMode& b) {
        if (a.lam != b.lam) return a.lam < b.lam;
        if (a.k != b.k) return a.k < b.k;
        return a.l < b.l;
    });
    return out;
}

KernelInfo kernel_dimension(const ManifoldSpec& spec, double tol) {
    KernelInfo info;
    const double target = spec.n - 2.0;
    // any kernel mode has both factors' eigenvalues <= n-2
    for (const EigenMode& m : laplace_spectrum(spec, target + 1.0)) {
        if (std::fabs(m.lam - target) < tol) {
            info.modes.push_back(m);
            info.dim += m.mult;
            if (m.l == 0 && m.k >= 1) info.even_dim += 1;  // cos mode only
        }
    }
    return info;
}

LinearizedSpectrum linearized_spectrum(const ManifoldSpec& spec, int count) {
    LinearizedSpectrum ls;
    const double target = spec.n - 2.0;
    // enough modes to cover the request: raise lam_max until count is met
    double lam_max = 4.0 * (spec.n + 1);
    std::vector<EigenMode> all;
    for (int tries = 0; tries < 20; ++tries) {
        all = laplace_spectrum(spec, lam_max);
        if (int(all.size()) >= count) break;
        lam_max *= 2.0;
    }
    std::sort(all.begin(), all.end(), [](const EigenMode& a, const EigenMode& b) {
        return std::fabs(a.mu) < std::fabs(b.mu);
    });
    if (int(all.size()) > count) all.resize(size_t(count));
    ls.modes = all;
    ls.degenerate = kernel_dimension(spec).dim > 0;
    // slowest S^1-symmetric non-constant linear decay rate
    const double w0 = 2.0 * kPi / spec.T;
    double best = 1e300;
    for (int k = 1; k < 100000; ++k) {
        double lam = double(k) * k * w0 * w0;
        if (lam > target + 1e-9) {
            best = (spec.n - 1) * (lam - target);
            break;
        }
    }
    ls.predicted_rate = best;
    return ls;
}

// ---- seeded RNG --------------------------------------------------------

namespace {
std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}
std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

Rng::Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::next_double() {
    return double(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    do {
        u1 = next_double();
    } while (u1 <= 0.0);
    double u2 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    double th = 2.0 * kPi * u2;
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
}

Rng Rng::shard(std::uint64_t master_seed, std::uint64_t shard_index) {
    std::uint64_t x = master_seed;
    std::uint64_t a = splitmix64(x);
    x = master_seed ^ (0x9e3779b97f4a7c15ull + shard_index);
    std::uint64_t b = splitmix64(x);
    return Rng(a ^ rotl(b, 31) ^ (shard_index * 0xd1342543de82ef95ull));
}

double sphere_area(int d) {
    return 2.0 * std::pow(kPi, 0.5 * (d + 1)) / std::tgamma(0.5 * (d + 1));
}

namespace {

// Uniform point on S^{2m+1} in C^{m+1}; fills re/im arrays of size m+1.
void sample_sphere_point(Rng& rng, int mplus1, std::vector<double>& re,
                         std::vector<double>& im) {
    double s2 = 0.0;
    for (int i = 0; i < mplus1; ++i) {
        re[size_t(i)] = rng.next_normal();
        im[size_t(i)] = rng.next_normal();
        s2 += re[size_t(i)] * re[size_t(i)] + im[size_t(i)] * im[size_t(i)];
    }
    double inv = 1.0 / std::sqrt(s2);
    for (int i = 0; i < mplus1; ++i) {
        re[size_t(i)] *= inv;
        im[size_t(i)] *= inv;
    }
}

// 2 Re(z1 z2b + z2 z3b + z3 z1b)
double eval_h(const std::vector<double>& re, const std::vector<double>& im) {
    auto re_prod = [&](int i, int j) {  // Re(z_i conj(z_j))
        return re[size_t(i)] * re[size_t(j)] + im[size_t(i)] * im[size_t(j)];
    };
    return 2.0 * (re_prod(0, 1) + re_prod(1, 2) + re_prod(2, 0));
}

double eval_g(const std::vector<double>& re, const std::vector<double>& im) {
    // Im(z1 conj(z2))
    return im[0] * re[1] - re[0] * im[1];
}

template <typename F>
MonteCarloEstimate mc_on_sphere(int n_cp, long samples, std::uint64_t seed, F f) {
    if (n_cp < 2) throw ContractViolation("cpn integral: n_cp must be >= 2");
    if (samples < 10000) throw ContractViolation("cpn integral: samples must be >= 1e4");
    Rng rng = Rng::shard(seed, 0);
    std::vector<double> re(size_t(n_cp + 1)), im(size_t(n_cp + 1));
    double sum = 0.0, sumsq = 0.0;
    for (long i = 0; i < samples; ++i) {
        sample_sphere_point(rng, n_cp + 1, re, im);
        double val = f(re, im);
        sum += val;
        sumsq += val * val;
    }
    double mean = sum / double(samples);
    double var = std::max(0.0, sumsq / double(samples) - mean * mean);
    double area = sphere_area(2 * n_cp + 1);
    MonteCarloEstimate est;
    est.value = mean * area;
    est.std_error = std::sqrt(var / double(samples)) * area;
    est.samples = samples;
    return est;
}

}  // namespace

MonteCarloEstimate cpn_cubic_integral(int n_cp, long samples, std::uint64_t seed) {
    return mc_on_sphere(n_cp, samples, seed,
                        [](const std::vector<double>& re, const std::vector<double>& im) {
                            double h = eval_h(re, im);
                            return h * h * h;
                        });
}

MonteCarloEstimate cpn_mean_of_h(int n_cp, long samples, std::uint64_t seed) {
    return mc_on_sphere(n_cp, samples, seed,
                        [](const std::vector<double>& re, const std::vector<double>& im) {
                            return eval_h(re, im);
                        });
}

MonteCarloEstimate cpn_cubic_antisymmetric_control(int n_cp, long samples,
                                                   std::uint64_t seed) {
    return mc_on_sphere(n_cp, samples, seed,
                        [](const std::vector<double>& re, const std::vector<double>& im) {
                            double g = eval_g(re, im);
                            return g * g * g;
                        });
}

std::string spectrum_csv(const std::vector<EigenMode>& modes) {
    std::ostringstream os;
    os << "k,l,lam,mu,mult,label\n";
    os.precision(17);
    for (const EigenMode& m : modes) {
        os << m.k << ',' << m.l << ',' << m.lam << ',' << m.mu << ',' << m.mult
           << ',' << label_name(label_of(m.mu)) << '\n';
    }
    return os.str();
}

}  // namespace yamabe::modes
