#include "yamabe/geometry.hpp"

#include <cmath>

#include "yamabe/kernels.hpp"

namespace yamabe::geom {

double volume(const GridFn& u) {
    const double N = u.spec.conformal_exponent();
    std::vector<double> uN;
    pow_elts(u.v, N, uN);
    return u.spec.sphere_volume() * u.spec.h() * kern::sum(uN);
}

GridFn conformal_scalar_curvature(const GridFn& u) {
    if (!u.positive()) throw ContractViolation("conformal factor must be positive");
    const double N = u.spec.conformal_exponent();
    const double R = u.spec.scalar_curvature();
    GridFn upp = second_derivative(u);
    std::vector<double> u1mN;
    pow_elts(u.v, 1.0 - N, u1mN);
    GridFn out(u.spec);
    for (int j = 0; j < u.size(); ++j)
        out[j] = u1mN[size_t(j)] * (R * u[j] - (N + 2.0) * upp[j]);
    return out;
}

double curvature_integral(const GridFn& u) {
    const double N = u.spec.conformal_exponent();
    const double R = u.spec.scalar_curvature();
    GridFn upp = second_derivative(u);
    // A = <-(N+2) u'' + R u, u>, integration by parts done spectrally
    GridFn lin(u.spec);
    kern::axpby(-(N + 2.0), upp.v, R, u.v, lin.v);
    return inner(lin, u);
}

double yamabe_energy(const GridFn& u) {
    if (!u.positive()) throw ContractViolation("conformal factor must be positive");
    const double N = u.spec.conformal_exponent();
    return curvature_integral(u) * std::pow(volume(u), -2.0 / N);
}

double average_scalar(const GridFn& u) {
    if (!u.positive()) throw ContractViolation("conformal factor must be positive");
    return curvature_integral(u) / volume(u);
}

GridFn gradient_raw(const GridFn& u) {
    const double N = u.spec.conformal_exponent();
    const double R = u.spec.scalar_curvature();
    const double r = average_scalar(u);
    GridFn upp = second_derivative(u);
    std::vector<double> uNm1;
    pow_elts(u.v, N - 1.0, uNm1);
    GridFn out(u.spec);
    for (int j = 0; j < u.size(); ++j)
        out[j] = 2.0 * (-(N + 2.0) * upp[j] + R * u[j] - r * uNm1[size_t(j)]);
    return out;
}

GridFn dy_gradient(const GridFn& u, double vol_tol) {
    const double vol = volume(u);
    if (std::fabs(vol - 1.0) > vol_tol)
        throw ContractViolation("dy_gradient: input is not unit volume");
    return gradient_raw(u);
}

GridFn normalize_volume(const GridFn& u) {
    const double N = u.spec.conformal_exponent();
    const double c = std::pow(volume(u), -1.0 / N);
    GridFn out(u.spec);
    kern::scale(c, u.v, out.v);
    return out;
}

GridFn normalize_to_reference(const GridFn& u) {
    const double N = u.spec.conformal_exponent();
    const double c = std::pow(u.spec.reference_volume() / volume(u), 1.0 / N);
    GridFn out(u.spec);
    kern::scale(c, u.v, out.v);
    return out;
}

}  // namespace yamabe::geom
