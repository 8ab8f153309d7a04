// AVX2 variants of the array kernels.  This translation unit is compiled with
// -mavx2; execution is gated by the runtime cpuid check in the dispatcher.
#include "yamabe/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

namespace yamabe::kern {

bool cpu_has_avx2() { return __builtin_cpu_supports("avx2"); }

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

inline double hmax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_max_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_max_sd(lo, sh));
}

double a_sum(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double a = hsum(acc);
    for (; i < n; ++i) a += x[i];
    return a;
}

double a_dot(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    double a = hsum(acc);
    for (; i < n; ++i) a += x[i] * y[i];
    return a;
}

double a_sumsq(const double* x, std::size_t n) { return a_dot(x, x, n); }

double a_sup_abs(const double* x, std::size_t n) {
    const __m256d mask = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_max_pd(acc, _mm256_andnot_pd(mask, _mm256_loadu_pd(x + i)));
    double a = hmax(acc);
    for (; i < n; ++i) a = std::max(a, std::fabs(x[i]));
    return a;
}

double a_sup_abs_diff(const double* x, const double* y, std::size_t n) {
    const __m256d mask = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        acc = _mm256_max_pd(acc, _mm256_andnot_pd(mask, d));
    }
    double a = hmax(acc);
    for (; i < n; ++i) a = std::max(a, std::fabs(x[i] - y[i]));
    return a;
}

inline __m256d pw_int_v(__m256d x, int k) {
    bool inv = k < 0;
    unsigned e = inv ? unsigned(-(long long)k) : unsigned(k);
    __m256d base = x, r = _mm256_set1_pd(1.0);
    while (e) {
        if (e & 1u) r = _mm256_mul_pd(r, base);
        base = _mm256_mul_pd(base, base);
        e >>= 1;
    }
    return inv ? _mm256_div_pd(_mm256_set1_pd(1.0), r) : r;
}

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

double a_sum_pow_int(const double* x, std::size_t n, int k) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_add_pd(acc, pw_int_v(_mm256_loadu_pd(x + i), k));
    double a = hsum(acc);
    for (; i < n; ++i) a += pw_int_s(x[i], k);
    return a;
}

void a_axpby(double a, const double* x, double b, const double* y, double* o,
             std::size_t n) {
    const __m256d va = _mm256_set1_pd(a), vb = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d r = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
        r = _mm256_fmadd_pd(vb, _mm256_loadu_pd(y + i), r);
        _mm256_storeu_pd(o + i, r);
    }
    for (; i < n; ++i) o[i] = a * x[i] + b * y[i];
}

void a_mul(const double* x, const double* y, double* o, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(o + i,
                         _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) o[i] = x[i] * y[i];
}

void a_scale(double a, const double* x, double* o, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(o + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) o[i] = a * x[i];
}

void a_pow_int(const double* x, int k, double* o, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(o + i, pw_int_v(_mm256_loadu_pd(x + i), k));
    for (; i < n; ++i) o[i] = pw_int_s(x[i], k);
}

const Ops g_avx2 = {a_sum,    a_dot,   a_sumsq, a_sup_abs, a_sup_abs_diff,
                    a_sum_pow_int, a_axpby, a_mul,   a_scale,   a_pow_int};

}  // namespace

const Ops* avx2_ops() { return &g_avx2; }

}  // namespace yamabe::kern

#else

namespace yamabe::kern {
bool cpu_has_avx2() { return false; }
const Ops* avx2_ops() { return nullptr; }
}  // namespace yamabe::kern

#endif
