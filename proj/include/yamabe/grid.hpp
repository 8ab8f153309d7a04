// Uniform periodic grid on the circle factor of S^1(T/2pi) x S^{n-1} and the
// Fourier-spectral operations on it.  Grid functions are stored in physical
// space; transforms are computed on demand.
#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace yamabe {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Violation of a documented precondition (bad input, broken contract).
struct ContractViolation : Error {
    using Error::Error;
};

// Product manifold S^1(T/2pi) x S^{n-1}(1) with an m-point periodic grid on
// the circle, t_j = j T/m (no duplicated endpoint).
struct ManifoldSpec {
    int n = 4;       // total dimension, >= 3
    double T = 1.0;  // circle circumference, > 0
    int m = 64;      // grid size, even, >= 8

    ManifoldSpec() = default;
    ManifoldSpec(int n_, double T_, int m_) : n(n_), T(T_), m(m_) { validate(); }

    void validate() const {
        if (n < 3) throw ContractViolation("ManifoldSpec: n must be >= 3");
        if (!(T > 0)) throw ContractViolation("ManifoldSpec: T must be > 0");
        if (m < 8 || m % 2 != 0)
            throw ContractViolation("ManifoldSpec: m must be even and >= 8");
    }

    double conformal_exponent() const { return 2.0 * n / (n - 2); }  // N
    double scalar_curvature() const { return double(n - 1) * (n - 2); }  // R_inf
    double sphere_volume() const;       // area of the unit S^{n-1} factor
    double reference_volume() const { return sphere_volume() * T; }  // vol(u==1)
    double h() const { return T / m; }
    double node(int j) const { return j * T / m; }

    bool operator==(const ManifoldSpec& o) const {
        return n == o.n && T == o.T && m == o.m;
    }
};

// Critical circle circumference 2*pi/sqrt(n-2) at which the product metric
// becomes degenerate.
double critical_circumference(int n);

// S^1-symmetric grid function.  Values at the m grid nodes; indexing modulo m.
struct GridFn {
    ManifoldSpec spec;
    std::vector<double> v;

    GridFn() = default;
    explicit GridFn(const ManifoldSpec& s, double fill = 0.0)
        : spec(s), v(static_cast<size_t>(s.m), fill) {}
    GridFn(const ManifoldSpec& s, std::vector<double> vals)
        : spec(s), v(std::move(vals)) {
        if (int(v.size()) != s.m) throw ContractViolation("GridFn: size mismatch");
    }

    int size() const { return int(v.size()); }
    double& operator[](int j) { return v[size_t(j)]; }
    double operator[](int j) const { return v[size_t(j)]; }
    bool positive() const;
    double min_value() const;
};

// Pointwise power with an integer fast path (exact when the exponent is an
// integer-valued double, e.g. N for n = 3, 4, 6).
void pow_elts(const std::vector<double>& x, double p, std::vector<double>& out);

// Fourier coefficients of a real periodic grid function:
//   f(t) = a[0] + sum_{k=1}^{m/2-1} (a[k] cos(2 pi k t/T) + b[k] sin(2 pi k t/T))
//        + a[m/2] cos(pi m t / T)
// b has size m/2 with b[0] = b[m/2... ] unused slots kept zero.
struct FourierCoeffs {
    std::vector<double> a;  // size m/2 + 1
    std::vector<double> b;  // size m/2 + 1, b[0] and b[m/2] always 0
};

FourierCoeffs analyze(const GridFn& f);
GridFn synthesize(const ManifoldSpec& spec, const FourierCoeffs& c);

// Spectral second derivative on the periodic grid (exact for modes k < m/2).
GridFn second_derivative(const GridFn& f);
// Spectral first derivative (Nyquist mode mapped to zero).
GridFn first_derivative(const GridFn& f);

// Periodic rectangle-rule quadrature of f dt over the circle (no sphere factor).
double circle_integral(const GridFn& f);
// Integral over the full product manifold: sphere_volume * circle_integral.
double manifold_integral(const GridFn& f);
// L^2(dV_{g_inf}) inner product and norms over the product manifold.
double inner(const GridFn& f, const GridFn& g);
double norm_l2(const GridFn& f);
double norm_c0(const GridFn& f);

}  // namespace yamabe
