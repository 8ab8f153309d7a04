// Conformal geometry of u^{N-2} g_inf on S^1(T/2pi) x S^{n-1}: volume, scalar
// curvature, the Yamabe energy quotient and its L^2 gradient.
//
// Convention: integrals use the physical measure of g_inf (no unit-volume
// rescaling of the background).  The unit-volume class of the reference
// metric is realized as { u > 0 : volume(u) = spec.reference_volume() }, the
// class containing u == 1; dy_gradient's unit-volume contract is the absolute
// one (volume(u) = 1), where <dy_gradient(u), v> equals the directional
// derivative of the energy exactly.
#pragma once

#include "yamabe/grid.hpp"

namespace yamabe::geom {

// vol(u^{N-2} g_inf) = int u^N dV_{g_inf}.
double volume(const GridFn& u);

// Scalar curvature of u^{N-2} g_inf: u^{1-N} (R_inf u - (N+2) u'').
GridFn conformal_scalar_curvature(const GridFn& u);

// Total curvature integral A = int R_g dV_g = int ((N+2)|u'|^2 + R_inf u^2) dV.
double curvature_integral(const GridFn& u);

// Scale-invariant Yamabe quotient A / volume^{2/N}.
double yamabe_energy(const GridFn& u);

// Volume-averaged scalar curvature r_g = A / volume.  Equals yamabe_energy
// when volume(u) = 1.
double average_scalar(const GridFn& u);

// L^2 gradient 2(-(N+2) u'' + R_inf u - r u^{N-1}) without any volume check.
// Satisfies d/de Y(u + e v)|_0 = volume(u)^{-2/N} <gradient_raw(u), v> for
// every direction v.
GridFn gradient_raw(const GridFn& u);

// Same formula, but enforces the unit-volume contract |volume(u) - 1| <= tol
// (relative) so that the pairing equals the directional derivative exactly.
GridFn dy_gradient(const GridFn& u, double vol_tol = 1e-8);

// Rescale to absolute unit volume: u * volume(u)^{-1/N}.
GridFn normalize_volume(const GridFn& u);

// Rescale into the class of the reference metric: volume = reference_volume.
GridFn normalize_to_reference(const GridFn& u);

}  // namespace yamabe::geom
