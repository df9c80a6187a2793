#pragma once
// Plane-wave modes e_k(x) = exp(i (pi/2L) <k, x>) on the box [-2L, 2L]^d
// and the exact integrals the Galerkin machinery needs.
//
// All L2 pairings use the unnormalized inner product (plain integrals, no
// volume factor); over the full box the modes are orthogonal with
// |e_k|^2 = (4L)^d.

#include <complex>

#include <Eigen/Dense>

#include "piml/domain.hpp"
#include "piml/frequency.hpp"

namespace piml {

// Sobolev weight w(k) = sum_{|alpha| <= s} (pi/2L)^{2|alpha|} prod_j
// k_j^{2 alpha_j}; e_k has squared Sobolev norm w(k) * (4L)^d.  w(0) = 1,
// and w(k) -> (pi/2L)^{2s} |k|^{2s} along coordinate axes.
double sobolev_weight(const Frequency& k, int s, double L);

// e_k evaluated at x (x.size() must equal k.size()).
std::complex<double> mode_eval(const Frequency& k, const Eigen::VectorXd& x,
                               double L);

// d^alpha e_k = mode_deriv_factor(k, alpha, L) * e_k.
std::complex<double> mode_deriv_factor(const Frequency& k,
                                       const std::vector<int>& alpha, double L);

// Exact integral over Omega of e_k * conj(e_l); closed-form product of
// one-dimensional exponential integrals.  Hermitian in (k, l).
std::complex<double> mode_inner_omega(const Frequency& k, const Frequency& l,
                                      const DomainSpec& dom);

}  // namespace piml
