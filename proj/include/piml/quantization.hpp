#pragma once
// Exact positive spectrum of the Omega-compressed solution operator for
// d=1, s=1, D=d/dx on Omega=[-L,L] inside the periodic box [-2L,2L].
//
// Eigenfunctions are trigonometric inside Omega and hyperbolic (unit rate)
// outside; matching value and flux at x = +-L quantizes the interior wave
// number xi.  Writing C = (lambda/(lambda+mu)) * L * tanh(L):
//
//   symmetric branch:      xi L * tan(xi L) = C,
//                          one root per interval (k pi, (k+1/2) pi) / L;
//   antisymmetric branch:  tan(xi L) / (xi L) = -(1 + mu/lambda) tanh(L)/L,
//                          one root per interval ((k-1/2) pi, k pi) / L.
//
// (The right side of the antisymmetric equation is negative: continuity at
// x = L forces opposite signs on the trigonometric and hyperbolic pieces,
// so the root sits in the half-interval where tan is negative.  A published
// variant of this equation with a positive right side puts roots where no
// eigenvalue exists; the Galerkin cross-check in the tests pins the sign.)
//
// Each root maps to the eigenvalue a = 1 / (lambda + (lambda+mu) xi^2).
// Merged across branches the xi_m strictly alternate parities and satisfy
// xi_m in (m pi/2, (m+1) pi/2) / L, which yields the m >= 3 eigenvalue
// brackets enforced by exact_spectrum_1d.

#include <vector>

#include "piml/op.hpp"
#include "piml/spectrum.hpp"

namespace piml {

// Roots of the symmetric quantization equation, ascending; `count` roots,
// bisection to |error| <= 1e-12 * (pi/L) with a Newton polish.
std::vector<double> quantization_roots_symmetric(
    const RegularizationParams& reg, double L, int count);

// Antisymmetric branch, same contract.
std::vector<double> quantization_roots_antisymmetric(
    const RegularizationParams& reg, double L, int count);

// Merged spectrum with provenance; hard-errors on any m >= 3 bracket
// violation (those brackets are exact, so a violation means a solver bug).
Spectrum exact_spectrum_1d(const RegularizationParams& reg, double L,
                           int count);

// Bracket endpoints for m >= 3 (0-based): a_m in
// [4L^2/((lambda+mu)(m+4)^2 pi^2), 4L^2/((lambda+mu)(m-2)^2 pi^2)].
double bracket_lower(int m, const RegularizationParams& reg, double L);
double bracket_upper(int m, const RegularizationParams& reg, double L);

// Piecewise eigenfunction: trigonometric inside [-L, L], hyperbolic with
// unit rate outside, continuous across +-L by construction.  The interior
// amplitude is normalized to 1; the exterior amplitude follows from
// continuity.
struct QuantEigenfunction {
  enum class Parity { symmetric, antisymmetric };
  Parity parity = Parity::symmetric;
  double xi = 0.0;
  double L = 1.0;
  double outside_amp = 0.0;

  static QuantEigenfunction make(Parity parity, double xi, double L);

  // Value / one-sided derivative at x in [-2L, 2L].
  double eval(double x) const;
  double deriv(double x) const;  // at +-L: the interior side
};

// Max of the interface residuals at x = +-L: value continuity and the flux
// jump |(lambda+mu) w'(L-) - lambda w'(L+)|, normalized by the natural
// scale (lambda+mu)(1+xi).  Near machine precision iff xi is a true root.
double boundary_matching_check(const QuantEigenfunction& w,
                               const RegularizationParams& reg, double L);

}  // namespace piml
