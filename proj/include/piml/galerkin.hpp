#pragma once
// Assembly of the regularized bilinear form
//   B[u, v] = lambda * sum_{|alpha|<=s} int_box d^a u d^a conj(v)
//           + mu * int_Omega (D u) conj(D v)
// over truncated Fourier modes, and eigendecompositions of the resulting
// operators.
//
// The box part is diagonal by orthogonality (lambda * w(k) * (4L)^d); only
// the Omega part couples modes, through closed-form mode integrals.  The
// complex Hermitian system is reduced to the real cosine/sine basis before
// any eigendecomposition so the linear algebra stays real symmetric.

#include <Eigen/Dense>

#include "piml/domain.hpp"
#include "piml/op.hpp"
#include "piml/spectrum.hpp"

namespace piml {

// Eigenvalue a_k of the constant-coefficient operator on the full box:
//   a_k = 1 / (lambda * w(k) + mu * |sigma_D(k)|^2).
// Non-constant coefficients or Omega != box need assemble_galerkin.
double spectral_eigenvalue(const Frequency& k, const MultiIndexOperator& op,
                           const RegularizationParams& reg, double L);

struct GalerkinSystem {
  int n_max = 0;                  // requested truncation (frequency count)
  std::vector<Frequency> freqs;   // retained modes, closed under k -> -k
  Eigen::MatrixXcd b_matrix;      // B[e_l, e_j] at (j, l); Hermitian PD
  Eigen::MatrixXcd mass_omega;    // int_Omega e_l conj(e_j) at (j, l); PSD
  MultiIndexOperator op;
  RegularizationParams reg;
  DomainSpec dom;

  int mode_count() const { return int(freqs.size()); }

  // b_matrix over L2(box)-normalized modes: entries divided by (4L)^d.
  // In this scaling the diagonal-case entries are exactly
  // 1/spectral_eigenvalue.
  Eigen::MatrixXcd b_matrix_normalized() const;
};

// Description of one function of the real reformulated basis.
struct RealMode {
  enum class Kind { constant, cosine, sine };
  Kind kind = Kind::constant;
  Frequency freq;  // the canonical (positive-side) frequency
};

// The complex Hermitian system carried to the real, L2(box)-orthonormal
// cosine/sine basis.  b and mass are symmetric real; eigenvalues are
// preserved exactly (the change of basis is unitary).
struct RealGalerkin {
  std::vector<RealMode> modes;
  Eigen::MatrixXd b;     // symmetric positive definite
  Eigen::MatrixXd mass;  // symmetric positive semi-definite

  // Basis functions evaluated at x, in order.
  Eigen::VectorXd basis_eval(const Eigen::VectorXd& x, double L) const;
};

GalerkinSystem assemble_galerkin(const MultiIndexOperator& op,
                                 const RegularizationParams& reg,
                                 const DomainSpec& dom, int n_max,
                                 std::size_t memory_budget_bytes =
                                     std::size_t(2) << 30);

RealGalerkin real_reduction(const GalerkinSystem& sys);

// Eigenvalues of the truncated solution operator on the box: inverses of
// the eigenvalues of the normalized B matrix, sorted non-increasing.
Spectrum truncated_spectrum(const GalerkinSystem& sys);

// Eigenvalues of the Omega-compressed operator (restrict to Omega, apply
// the solution operator, restrict again): generalized symmetric problem
// with the Omega mass matrix.  Nonnegative; clipped at zero.
Spectrum truncated_spectrum_compressed(const GalerkinSystem& sys);

}  // namespace piml
