// Array kernels for the periodic-grid arithmetic: scalar reference
// implementations plus SIMD variants selected at runtime.  All callers go
// through the dispatched entry points; the scalar path is the semantic
// reference and the variants are equivalence-tested against it.
#pragma once

#include <cstddef>
#include <span>

namespace yamabe::kern {

enum class Backend { scalar, avx2, neon };

// Backend chosen at first use (best available), or forced via set_backend.
Backend active_backend();
// Returns false if the requested backend is not available on this CPU.
bool set_backend(Backend b);
const char* backend_name(Backend b);

// Reductions.
double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
double sumsq(std::span<const double> x);
double sup_abs(std::span<const double> x);
double sup_abs_diff(std::span<const double> x, std::span<const double> y);
// Sum of x_i^k for integer k (k may be negative; x_i != 0 then).
double sum_pow_int(std::span<const double> x, int k);

// Elementwise; out may alias x or y.
void axpby(double a, std::span<const double> x, double b,
           std::span<const double> y, std::span<double> out);
void mul(std::span<const double> x, std::span<const double> y,
         std::span<double> out);
void scale(double a, std::span<const double> x, std::span<double> out);
void pow_int(std::span<const double> x, int k, std::span<double> out);

// Function-pointer table implemented by each backend.
struct Ops {
    double (*sum)(const double*, std::size_t);
    double (*dot)(const double*, const double*, std::size_t);
    double (*sumsq)(const double*, std::size_t);
    double (*sup_abs)(const double*, std::size_t);
    double (*sup_abs_diff)(const double*, const double*, std::size_t);
    double (*sum_pow_int)(const double*, std::size_t, int);
    void (*axpby)(double, const double*, double, const double*, double*, std::size_t);
    void (*mul)(const double*, const double*, double*, std::size_t);
    void (*scale)(double, const double*, double*, std::size_t);
    void (*pow_int)(const double*, int, double*, std::size_t);
};

const Ops& scalar_ops();
const Ops* avx2_ops();  // nullptr when not compiled in
const Ops* neon_ops();  // nullptr when not compiled in
bool cpu_has_avx2();

}  // namespace yamabe::kern
