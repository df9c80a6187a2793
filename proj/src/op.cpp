#include "piml/op.hpp"

#include <cmath>

namespace piml {

void TrigPoly::add(const Frequency& m, std::complex<double> c) {
  if (c == std::complex<double>(0.0, 0.0)) return;
  auto it = coeffs_.find(m);
  if (it == coeffs_.end()) {
    coeffs_[m] = c;
  } else {
    it->second += c;
    if (it->second == std::complex<double>(0.0, 0.0)) coeffs_.erase(it);
  }
}

bool TrigPoly::is_constant() const {
  if (coeffs_.empty()) return true;
  if (coeffs_.size() != 1) return false;
  const auto& [m, c] = *coeffs_.begin();
  return norm1(m) == 0 && std::abs(c.imag()) == 0.0;
}

double TrigPoly::constant_value() const {
  if (coeffs_.empty()) return 0.0;
  if (!is_constant())
    throw std::logic_error("TrigPoly: not a constant coefficient");
  return coeffs_.begin()->second.real();
}

std::complex<double> TrigPoly::eval(const Eigen::VectorXd& x, double L) const {
  std::complex<double> v(0.0, 0.0);
  for (const auto& [m, c] : coeffs_) {
    if (m.empty()) {
      v += c;
    } else {
      v += c * mode_eval(m, x, L);
    }
  }
  return v;
}

double TrigPoly::max_abs_on(const DomainSpec& dom, int samples_per_dim) const {
  if (coeffs_.empty()) return 0.0;
  if (is_constant()) return std::abs(coeffs_.begin()->second.real());
  if (dom.d != 1)
    throw std::logic_error("TrigPoly::max_abs_on: sampling implemented for d=1");
  double best = 0.0;
  Eigen::VectorXd x(1);
  for (int i = 0; i < samples_per_dim; ++i) {
    const double t = double(i) / double(samples_per_dim - 1);
    x[0] = dom.omega_lo[0] + t * (dom.omega_hi[0] - dom.omega_lo[0]);
    best = std::max(best, std::abs(eval(x, dom.L)));
  }
  return best;
}

bool TrigPoly::is_real_valued(double tol) const {
  for (const auto& [m, c] : coeffs_) {
    auto it = coeffs_.find(negate(m));
    if (it == coeffs_.end()) return false;
    if (std::abs(it->second - std::conj(c)) > tol) return false;
  }
  return true;
}

MultiIndexOperator::MultiIndexOperator(int d, int s,
                                       std::vector<OperatorTerm> terms)
    : d_(d), s_(s), terms_(std::move(terms)) {
  if (d_ < 1 || s_ < 0)
    throw std::invalid_argument("operator: need d >= 1, s >= 0");
  for (const auto& term : terms_) {
    if (term.alpha.size() != std::size_t(d_))
      throw std::invalid_argument("operator: alpha dimension mismatch");
    int order = 0;
    for (int a : term.alpha) {
      if (a < 0) throw std::invalid_argument("operator: negative alpha");
      order += a;
    }
    if (order > s_)
      throw std::invalid_argument("operator: term order exceeds s");
    if (!term.coeff.is_real_valued())
      throw std::invalid_argument(
          "operator: coefficient must be real-valued (conjugate-pair)");
  }
}

bool MultiIndexOperator::is_constant_coefficient() const {
  for (const auto& term : terms_)
    if (!term.coeff.is_constant()) return false;
  return true;
}

std::complex<double> MultiIndexOperator::symbol(const Frequency& k,
                                                double L) const {
  if (!is_constant_coefficient())
    throw std::invalid_argument(
        "operator symbol: non-constant coefficients (use assemble_galerkin)");
  std::complex<double> sigma(0.0, 0.0);
  for (const auto& term : terms_)
    sigma += term.coeff.constant_value() * mode_deriv_factor(k, term.alpha, L);
  return sigma;
}

std::vector<std::pair<Frequency, std::complex<double>>>
MultiIndexOperator::apply_to_mode(const Frequency& k, double L) const {
  // D e_k = sum_t p_t(x) * factor_t(k) * e_k; each trig-poly coefficient
  // shifts the frequency by its own modes.
  std::map<Frequency, std::complex<double>> acc;
  for (const auto& term : terms_) {
    const std::complex<double> factor = mode_deriv_factor(k, term.alpha, L);
    if (factor == std::complex<double>(0.0, 0.0)) continue;
    if (term.coeff.is_constant()) {
      acc[k] += term.coeff.constant_value() * factor;
      continue;
    }
    for (const auto& [m, c] : term.coeff.terms()) {
      Frequency q = k;
      if (!m.empty()) {
        for (std::size_t j = 0; j < q.size(); ++j) q[j] += m[j];
      }
      acc[q] += c * factor;
    }
  }
  std::vector<std::pair<Frequency, std::complex<double>>> out;
  out.reserve(acc.size());
  for (auto& [q, amp] : acc)
    if (amp != std::complex<double>(0.0, 0.0)) out.emplace_back(q, amp);
  return out;
}

double MultiIndexOperator::max_coeff_norm(const DomainSpec& dom) const {
  double best = 0.0;
  for (const auto& term : terms_)
    best = std::max(best, term.coeff.max_abs_on(dom));
  return best;
}

MultiIndexOperator MultiIndexOperator::first_derivative(int d, int axis) {
  if (axis < 0 || axis >= d)
    throw std::invalid_argument("first_derivative: axis out of range");
  std::vector<int> alpha(std::size_t(d), 0);
  alpha[std::size_t(axis)] = 1;
  return MultiIndexOperator(d, 1, {{alpha, TrigPoly::constant(1.0)}});
}

MultiIndexOperator MultiIndexOperator::identity(int d) {
  std::vector<int> alpha(std::size_t(d), 0);
  return MultiIndexOperator(d, 0, {{alpha, TrigPoly::constant(1.0)}});
}

}  // namespace piml
