#pragma once
// Symbolic description of the linear differential operator
//   D f = sum_{|alpha| <= s} p_alpha * d^alpha f
// with constant or trigonometric-polynomial coefficients p_alpha.
//
// Trigonometric polynomials (finite mode combinations with conjugate-pair
// coefficients) are the coefficient class we support: the product
// p(x) e_k(x) expands into finitely many shifted modes, so every Galerkin
// integral stays closed-form.  Plain polynomials in x are not periodic on
// the box and would force quadrature.

#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "piml/domain.hpp"
#include "piml/fourier.hpp"
#include "piml/frequency.hpp"

namespace piml {

struct RegularizationParams {
  double lambda = 1.0;  // Sobolev penalty weight, > 0
  double mu = 0.0;      // physics penalty weight, >= 0

  void validate() const {
    if (!(lambda > 0.0))
      throw std::invalid_argument("regularization: lambda must be > 0");
    if (!(mu >= 0.0))
      throw std::invalid_argument("regularization: mu must be >= 0");
  }
};

// Real-valued trigonometric polynomial sum_m c_m e_m(x) on the box.
class TrigPoly {
 public:
  TrigPoly() = default;

  static TrigPoly constant(double c) {
    TrigPoly p;
    if (c != 0.0) p.coeffs_[Frequency{}] = {c, 0.0};
    return p;
  }

  // c * e_m + conj(c) * e_{-m}: guarantees a real-valued function.
  static TrigPoly conjugate_pair(const Frequency& m, std::complex<double> c) {
    TrigPoly p;
    p.add(m, c);
    p.add(negate(m), std::conj(c));
    return p;
  }

  void add(const Frequency& m, std::complex<double> c);

  bool is_constant() const;
  // Value of the constant term (throws if not constant).
  double constant_value() const;

  // The (frequency, coefficient) expansion; frequencies have the dimension
  // they were added with (empty = dimension-agnostic constant).
  const std::map<Frequency, std::complex<double>>& terms() const {
    return coeffs_;
  }

  std::complex<double> eval(const Eigen::VectorXd& x, double L) const;

  // sup-norm estimate on Omega by dense sampling (used only for the
  // continuity bound diagnostics; coefficients are bounded by assumption).
  double max_abs_on(const DomainSpec& dom, int samples_per_dim = 257) const;

  // conj-pair symmetry check: coeff(-m) == conj(coeff(m)).
  bool is_real_valued(double tol = 1e-12) const;

 private:
  std::map<Frequency, std::complex<double>> coeffs_;
};

struct OperatorTerm {
  std::vector<int> alpha;  // derivative multi-index, |alpha| <= s
  TrigPoly coeff;
};

class MultiIndexOperator {
 public:
  MultiIndexOperator(int d, int s, std::vector<OperatorTerm> terms);

  int dimension() const { return d_; }
  int order() const { return s_; }
  const std::vector<OperatorTerm>& terms() const { return terms_; }

  bool is_constant_coefficient() const;

  // Symbol sigma_D(k) = sum_alpha p_alpha (i pi/2L)^{|alpha|} prod k^alpha;
  // constant coefficients only.
  std::complex<double> symbol(const Frequency& k, double L) const;

  // Expansion of D e_k as a finite sum of modes: list of (frequency,
  // amplitude) with D e_k = sum amp_q e_q.
  std::vector<std::pair<Frequency, std::complex<double>>> apply_to_mode(
      const Frequency& k, double L) const;

  // max_alpha of the coefficient sup-norms on Omega.
  double max_coeff_norm(const DomainSpec& dom) const;

  // D = d/dx along `axis` (coefficient 1), order-1 operator.
  static MultiIndexOperator first_derivative(int d = 1, int axis = 0);

  // D = identity (p_0 = 1); handy in tests.
  static MultiIndexOperator identity(int d = 1);

 private:
  int d_;
  int s_;
  std::vector<OperatorTerm> terms_;
};

}  // namespace piml
