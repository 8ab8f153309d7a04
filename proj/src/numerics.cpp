#include "yamabe/numerics.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace yamabe::num {

std::vector<double> solve_dense(std::vector<double> A, std::vector<double> b) {
    const int n = int(b.size());
    if (int(A.size()) != n * n) throw std::invalid_argument("solve_dense: shape");
    std::vector<int> piv(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) piv[size_t(i)] = i;
    auto at = [&](int r, int c) -> double& { return A[size_t(r) * n + size_t(c)]; };
    for (int col = 0; col < n; ++col) {
        int best = col;
        double bv = std::fabs(at(col, col));
        for (int r = col + 1; r < n; ++r) {
            double v = std::fabs(at(r, col));
            if (v > bv) {
                bv = v;
                best = r;
            }
        }
        if (bv == 0.0) throw std::runtime_error("solve_dense: singular matrix");
        if (best != col) {
            for (int c = 0; c < n; ++c) std::swap(at(best, c), at(col, c));
            std::swap(b[size_t(best)], b[size_t(col)]);
        }
        for (int r = col + 1; r < n; ++r) {
            double f = at(r, col) / at(col, col);
            at(r, col) = 0.0;
            for (int c = col + 1; c < n; ++c) at(r, c) -= f * at(col, c);
            b[size_t(r)] -= f * b[size_t(col)];
        }
    }
    std::vector<double> x(static_cast<size_t>(n));
    for (int r = n - 1; r >= 0; --r) {
        double s = b[size_t(r)];
        for (int c = r + 1; c < n; ++c) s -= at(r, c) * x[size_t(c)];
        x[size_t(r)] = s / at(r, r);
    }
    return x;
}

namespace {
double simpson(double fa, double fm, double fb, double a, double b) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double fa, double fm, double fb, double whole, double tol,
             int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(fa, flm, fm, a, m);
    double right = simpson(fm, frm, fb, m, b);
    double err = left + right - whole;
    // roundoff floor keeps the recursion from running away once the panel
    // estimates stop improving in double precision
    double floor_tol = 5e-16 * (std::fabs(left) + std::fabs(right));
    if (depth <= 0 || std::fabs(err) < 15.0 * std::max(tol, floor_tol))
        return left + right + err / 15.0;
    return adapt(f, a, m, fa, flm, fm, left, 0.6 * tol, depth - 1) +
           adapt(f, m, b, fm, frm, fb, right, 0.6 * tol, depth - 1);
}
}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth) {
    if (a == b) return 0.0;
    max_depth = std::min(max_depth, 34);
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    return adapt(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, max_depth);
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    if (n < 2 || y.size() != n) throw std::invalid_argument("fit_line: need >= 2 points");
    double sx = 0, sy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    double mx = sx / double(n), my = sy / double(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    LineFit out;
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    out.r2 = (syy == 0.0) ? 1.0 : (sxy * sxy) / (sxx * syy);
    return out;
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol, int max_iter) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) throw std::runtime_error("bisect: no sign change");
    for (int it = 0; it < max_iter && (hi - lo) > xtol; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

SymEigen jacobi_eigen(std::vector<double> A, int k) {
    std::vector<double> V(size_t(k) * size_t(k), 0.0);
    for (int i = 0; i < k; ++i) V[size_t(i) * k + size_t(i)] = 1.0;
    auto a = [&](int r, int c) -> double& { return A[size_t(r) * k + size_t(c)]; };
    auto v = [&](int r, int c) -> double& { return V[size_t(r) * k + size_t(c)]; };
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < k; ++p)
            for (int q = p + 1; q < k; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-30) break;
        for (int p = 0; p < k; ++p) {
            for (int q = p + 1; q < k; ++q) {
                if (std::fabs(a(p, q)) < 1e-300) continue;
                double theta = 0.5 * (a(q, q) - a(p, p)) / a(p, q);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (int i = 0; i < k; ++i) {
                    double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (int i = 0; i < k; ++i) {
                    double api = a(p, i), aqi = a(q, i);
                    a(p, i) = c * api - s * aqi;
                    a(q, i) = s * api + c * aqi;
                }
                for (int i = 0; i < k; ++i) {
                    double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
    }
    // sort ascending by eigenvalue
    std::vector<int> order(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) order[size_t(i)] = i;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (a(order[size_t(j)], order[size_t(j)]) <
                a(order[size_t(i)], order[size_t(i)]))
                std::swap(order[size_t(i)], order[size_t(j)]);
    SymEigen out;
    out.values.resize(static_cast<size_t>(k));
    out.vectors.assign(size_t(k) * size_t(k), 0.0);
    for (int j = 0; j < k; ++j) {
        int src = order[size_t(j)];
        out.values[size_t(j)] = a(src, src);
        for (int i = 0; i < k; ++i) out.vectors[size_t(i) * k + size_t(j)] = v(i, src);
    }
    return out;
}

}  // namespace yamabe::num
