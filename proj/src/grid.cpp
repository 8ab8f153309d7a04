#include "yamabe/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "yamabe/kernels.hpp"

namespace yamabe {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_pow2(int m) { return m > 0 && (m & (m - 1)) == 0; }

// Iterative radix-2 complex FFT, in place.  sign = -1 forward, +1 inverse
// (inverse leaves out the 1/m factor).
void fft_pow2(std::vector<std::complex<double>>& z, int sign) {
    const int m = int(z.size());
    for (int i = 1, j = 0; i < m; ++i) {
        int bit = m >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(z[size_t(i)], z[size_t(j)]);
    }
    for (int len = 2; len <= m; len <<= 1) {
        const double ang = sign * 2.0 * kPi / len;
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (int i = 0; i < m; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (int k = 0; k < len / 2; ++k) {
                auto u = z[size_t(i + k)];
                auto t = z[size_t(i + k + len / 2)] * w;
                z[size_t(i + k)] = u + t;
                z[size_t(i + k + len / 2)] = u - t;
                w *= wl;
            }
        }
    }
}

// O(m^2) DFT fallback for general even m (only exercised at odd sizes in
// tests; production grids are powers of two).
void dft_direct(const std::vector<std::complex<double>>& in,
                std::vector<std::complex<double>>& out, int sign) {
    const int m = int(in.size());
    out.assign(size_t(m), {0.0, 0.0});
    for (int k = 0; k < m; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (int j = 0; j < m; ++j) {
            double ang = sign * 2.0 * kPi * double(k) * double(j) / m;
            acc += in[size_t(j)] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[size_t(k)] = acc;
    }
}

void transform(std::vector<std::complex<double>>& z, int sign) {
    if (is_pow2(int(z.size()))) {
        fft_pow2(z, sign);
    } else {
        std::vector<std::complex<double>> out;
        dft_direct(z, out, sign);
        z.swap(out);
    }
}

}  // namespace

double ManifoldSpec::sphere_volume() const {
    // Area of the unit (n-1)-sphere: 2 pi^{n/2} / Gamma(n/2).
    return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

double critical_circumference(int n) { return 2.0 * kPi / std::sqrt(double(n - 2)); }

bool GridFn::positive() const { return min_value() > 0.0; }

double GridFn::min_value() const {
    return *std::min_element(v.begin(), v.end());
}

void pow_elts(const std::vector<double>& x, double p, std::vector<double>& out) {
    out.resize(x.size());
    double ip = 0.0;
    if (std::modf(p, &ip) == 0.0 && std::fabs(ip) <= 64.0) {
        kern::pow_int(x, int(ip), out);
    } else {
        for (size_t i = 0; i < x.size(); ++i) out[i] = std::pow(x[i], p);
    }
}

FourierCoeffs analyze(const GridFn& f) {
    const int m = f.spec.m;
    std::vector<std::complex<double>> z(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) z[size_t(j)] = {f[j], 0.0};
    transform(z, -1);
    FourierCoeffs c;
    c.a.assign(size_t(m / 2 + 1), 0.0);
    c.b.assign(size_t(m / 2 + 1), 0.0);
    c.a[0] = z[0].real() / m;
    for (int k = 1; k < m / 2; ++k) {
        c.a[size_t(k)] = 2.0 * z[size_t(k)].real() / m;
        c.b[size_t(k)] = -2.0 * z[size_t(k)].imag() / m;
    }
    c.a[size_t(m / 2)] = z[size_t(m / 2)].real() / m;
    return c;
}

GridFn synthesize(const ManifoldSpec& spec, const FourierCoeffs& c) {
    const int m = spec.m;
    std::vector<std::complex<double>> z(size_t(m), {0.0, 0.0});
    z[0] = {c.a[0] * m, 0.0};
    for (int k = 1; k < m / 2; ++k) {
        std::complex<double> zk(0.5 * m * c.a[size_t(k)], -0.5 * m * c.b[size_t(k)]);
        z[size_t(k)] = zk;
        z[size_t(m - k)] = std::conj(zk);
    }
    z[size_t(m / 2)] = {c.a[size_t(m / 2)] * m, 0.0};
    transform(z, +1);
    GridFn out(spec);
    for (int j = 0; j < m; ++j) out[j] = z[size_t(j)].real() / m;
    return out;
}

namespace {

GridFn derivative_impl(const GridFn& f, int order) {
    const int m = f.spec.m;
    const double w0 = 2.0 * kPi / f.spec.T;
    std::vector<std::complex<double>> z(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) z[size_t(j)] = {f[j], 0.0};
    transform(z, -1);
    for (int k = 0; k < m; ++k) {
        int kk = (k <= m / 2) ? k : k - m;
        double kappa = w0 * kk;
        if (order == 2) {
            z[size_t(k)] *= -kappa * kappa;
        } else {
            // first derivative of the (real) Nyquist cosine mode is a sine
            // the grid cannot represent; map it to zero
            if (k == m / 2)
                z[size_t(k)] = 0.0;
            else
                z[size_t(k)] *= std::complex<double>(0.0, kappa);
        }
    }
    transform(z, +1);
    GridFn out(f.spec);
    for (int j = 0; j < m; ++j) out[j] = z[size_t(j)].real() / m;
    return out;
}

}  // namespace

GridFn second_derivative(const GridFn& f) { return derivative_impl(f, 2); }
GridFn first_derivative(const GridFn& f) { return derivative_impl(f, 1); }

double circle_integral(const GridFn& f) { return f.spec.h() * kern::sum(f.v); }

double manifold_integral(const GridFn& f) {
    return f.spec.sphere_volume() * circle_integral(f);
}

double inner(const GridFn& f, const GridFn& g) {
    return f.spec.sphere_volume() * f.spec.h() * kern::dot(f.v, g.v);
}

double norm_l2(const GridFn& f) {
    return std::sqrt(f.spec.sphere_volume() * f.spec.h() * kern::sumsq(f.v));
}

double norm_c0(const GridFn& f) { return kern::sup_abs(f.v); }

}  // namespace yamabe
