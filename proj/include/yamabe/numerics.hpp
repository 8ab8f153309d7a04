// Small shared numerical utilities: dense linear solve, adaptive quadrature,
// least-squares line fits, root finding, symmetric eigendecomposition.
#pragma once

#include <functional>
#include <vector>

namespace yamabe::num {

// Solve A x = b for square row-major A (destroys copies, partial pivoting).
std::vector<double> solve_dense(std::vector<double> A, std::vector<double> b);

// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth = 50);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Bisection for a sign change of f on [lo, hi]; requires f(lo)*f(hi) <= 0.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol, int max_iter = 200);

// Eigendecomposition of a symmetric k x k matrix (row-major) by cyclic
// Jacobi rotations.  Eigenvalues ascending; vectors stored as columns.
struct SymEigen {
    std::vector<double> values;
    std::vector<double> vectors;  // row-major k x k, column j = eigenvector j
};
SymEigen jacobi_eigen(std::vector<double> A, int k);

}  // namespace yamabe::num
