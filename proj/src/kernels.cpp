#include "yamabe/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>

namespace yamabe::kern {

namespace {

double pw_int(double x, int k) {
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

double s_sum(const double* x, std::size_t n) {
    double a = 0;
    for (std::size_t i = 0; i < n; ++i) a += x[i];
    return a;
}
double s_dot(const double* x, const double* y, std::size_t n) {
    double a = 0;
    for (std::size_t i = 0; i < n; ++i) a += x[i] * y[i];
    return a;
}
double s_sumsq(const double* x, std::size_t n) {
    double a = 0;
    for (std::size_t i = 0; i < n; ++i) a += x[i] * x[i];
    return a;
}
double s_sup_abs(const double* x, std::size_t n) {
    double a = 0;
    for (std::size_t i = 0; i < n; ++i) a = std::max(a, std::fabs(x[i]));
    return a;
}
double s_sup_abs_diff(const double* x, const double* y, std::size_t n) {
    double a = 0;
    for (std::size_t i = 0; i < n; ++i) a = std::max(a, std::fabs(x[i] - y[i]));
    return a;
}
double s_sum_pow_int(const double* x, std::size_t n, int k) {
    double a = 0;
    for (std::size_t i = 0; i < n; ++i) a += pw_int(x[i], k);
    return a;
}
void s_axpby(double a, const double* x, double b, const double* y, double* o,
             std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) o[i] = a * x[i] + b * y[i];
}
void s_mul(const double* x, const double* y, double* o, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) o[i] = x[i] * y[i];
}
void s_scale(double a, const double* x, double* o, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) o[i] = a * x[i];
}
void s_pow_int(const double* x, int k, double* o, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) o[i] = pw_int(x[i], k);
}

const Ops g_scalar = {s_sum,    s_dot,   s_sumsq, s_sup_abs, s_sup_abs_diff,
                      s_sum_pow_int, s_axpby, s_mul,   s_scale,   s_pow_int};

std::atomic<const Ops*> g_active{nullptr};
std::atomic<Backend> g_backend{Backend::scalar};

const Ops* pick_default(Backend* which) {
    if (const Ops* neon = neon_ops()) {
        *which = Backend::neon;
        return neon;
    }
    if (cpu_has_avx2()) {
        if (const Ops* avx = avx2_ops()) {
            *which = Backend::avx2;
            return avx;
        }
    }
    *which = Backend::scalar;
    return &g_scalar;
}

const Ops& active() {
    const Ops* p = g_active.load(std::memory_order_acquire);
    if (!p) {
        Backend which;
        p = pick_default(&which);
        g_backend.store(which, std::memory_order_relaxed);
        g_active.store(p, std::memory_order_release);
    }
    return *p;
}

}  // namespace

const Ops& scalar_ops() { return g_scalar; }

Backend active_backend() {
    active();
    return g_backend.load(std::memory_order_relaxed);
}

bool set_backend(Backend b) {
    const Ops* p = nullptr;
    switch (b) {
        case Backend::scalar: p = &g_scalar; break;
        case Backend::avx2: p = cpu_has_avx2() ? avx2_ops() : nullptr; break;
        case Backend::neon: p = neon_ops(); break;
    }
    if (!p) return false;
    g_active.store(p, std::memory_order_release);
    g_backend.store(b, std::memory_order_relaxed);
    return true;
}

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
        case Backend::neon: return "neon";
    }
    return "?";
}

double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }
double dot(std::span<const double> x, std::span<const double> y) {
    return active().dot(x.data(), y.data(), x.size());
}
double sumsq(std::span<const double> x) { return active().sumsq(x.data(), x.size()); }
double sup_abs(std::span<const double> x) {
    return active().sup_abs(x.data(), x.size());
}
double sup_abs_diff(std::span<const double> x, std::span<const double> y) {
    return active().sup_abs_diff(x.data(), y.data(), x.size());
}
double sum_pow_int(std::span<const double> x, int k) {
    return active().sum_pow_int(x.data(), x.size(), k);
}
void axpby(double a, std::span<const double> x, double b,
           std::span<const double> y, std::span<double> out) {
    active().axpby(a, x.data(), b, y.data(), out.data(), x.size());
}
void mul(std::span<const double> x, std::span<const double> y,
         std::span<double> out) {
    active().mul(x.data(), y.data(), out.data(), x.size());
}
void scale(double a, std::span<const double> x, std::span<double> out) {
    active().scale(a, x.data(), out.data(), x.size());
}
void pow_int(std::span<const double> x, int k, std::span<double> out) {
    active().pow_int(x.data(), k, out.data(), x.size());
}

}  // namespace yamabe::kern
