// NEON variants of the array kernels (aarch64 only).
#include "yamabe/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>
#include <cstddef>

namespace yamabe::kern {

namespace {

inline double pw_int_s(double x, int k) {
    bool inv = k < 0;
    unsigned e = inv ? unsigned(-(long long)k) : unsigned(k);
    double base = x, r = 1.0;
    while (e) {
        if (e & 1u) r *= base;
        base *= base;
        e >>= 1;
    }
    return inv ? 1.0 / r : r;
}

inline float64x2_t pw_int_v(float64x2_t x, int k) {
    bool inv = k < 0;
    unsigned e = inv ? unsigned(-(long long)k) : unsigned(k);
    float64x2_t base = x, r = vdupq_n_f64(1.0);
    while (e) {
        if (e & 1u) r = vmulq_f64(r, base);
        base = vmulq_f64(base, base);
        e >>= 1;
    }
    return inv ? vdivq_f64(vdupq_n_f64(1.0), r) : r;
}

double n_sum(const double* x, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(x + i));
    double a = vaddvq_f64(acc);
    for (; i < n; ++i) a += x[i];
    return a;
}

double n_dot(const double* x, const double* y, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        acc = vfmaq_f64(acc, vld1q_f64(x + i), vld1q_f64(y + i));
    double a = vaddvq_f64(acc);
    for (; i < n; ++i) a += x[i] * y[i];
    return a;
}

double n_sumsq(const double* x, std::size_t n) { return n_dot(x, x, n); }

double n_sup_abs(const double* x, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vmaxq_f64(acc, vabsq_f64(vld1q_f64(x + i)));
    double a = vmaxvq_f64(acc);
    for (; i < n; ++i) a = std::max(a, std::fabs(x[i]));
    return a;
}

double n_sup_abs_diff(const double* x, const double* y, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        acc = vmaxq_f64(acc, vabdq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
    double a = vmaxvq_f64(acc);
    for (; i < n; ++i) a = std::max(a, std::fabs(x[i] - y[i]));
    return a;
}

double n_sum_pow_int(const double* x, std::size_t n, int k) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, pw_int_v(vld1q_f64(x + i), k));
    double a = vaddvq_f64(acc);
    for (; i < n; ++i) a += pw_int_s(x[i], k);
    return a;
}

void n_axpby(double a, const double* x, double b, const double* y, double* o,
             std::size_t n) {
    float64x2_t va = vdupq_n_f64(a), vb = vdupq_n_f64(b);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t r = vmulq_f64(va, vld1q_f64(x + i));
        r = vfmaq_f64(r, vb, vld1q_f64(y + i));
        vst1q_f64(o + i, r);
    }
    for (; i < n; ++i) o[i] = a * x[i] + b * y[i];
}

void n_mul(const double* x, const double* y, double* o, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(o + i, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
    for (; i < n; ++i) o[i] = x[i] * y[i];
}

void n_scale(double a, const double* x, double* o, std::size_t n) {
    float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(o + i, vmulq_f64(va, vld1q_f64(x + i)));
    for (; i < n; ++i) o[i] = a * x[i];
}

void n_pow_int(const double* x, int k, double* o, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(o + i, pw_int_v(vld1q_f64(x + i), k));
    for (; i < n; ++i) o[i] = pw_int_s(x[i], k);
}

const Ops g_neon = {n_sum,    n_dot,   n_sumsq, n_sup_abs, n_sup_abs_diff,
                    n_sum_pow_int, n_axpby, n_mul,   n_scale,   n_pow_int};

}  // namespace

const Ops* neon_ops() { return &g_neon; }

}  // namespace yamabe::kern

#else

namespace yamabe::kern {
const Ops* neon_ops() { return nullptr; }
}  // namespace yamabe::kern

#endif
