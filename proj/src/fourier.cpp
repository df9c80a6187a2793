#include "piml/fourier.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace piml {

using std::numbers::pi;

double sobolev_weight(const Frequency& k, int s, double L) {
  if (s < 0 || !(L > 0.0))
    throw std::invalid_argument("sobolev_weight: need s >= 0, L > 0");
  const int d = int(k.size());
  const double base = pi / (2.0 * L);
  // t_j = ((pi/2L) k_j)^2; each multi-index contributes prod t_j^alpha_j.
  std::vector<double> t(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    const double z = base * double(k[std::size_t(j)]);
    t[std::size_t(j)] = z * z;
  }
  double w = 0.0;
  for (const auto& alpha : multi_indices_up_to(d, s)) {
    double term = 1.0;
    for (int j = 0; j < d; ++j) {
      for (int rep = 0; rep < alpha[std::size_t(j)]; ++rep)
        term *= t[std::size_t(j)];
    }
    w += term;
  }
  return w;
}

std::complex<double> mode_eval(const Frequency& k, const Eigen::VectorXd& x,
                               double L) {
  if (x.size() != Eigen::Index(k.size()))
    throw std::invalid_argument("mode_eval: dimension mismatch");
  double phase = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j)
    phase += double(k[std::size_t(j)]) * x[j];
  phase *= pi / (2.0 * L);
  return {std::cos(phase), std::sin(phase)};
}

std::complex<double> mode_deriv_factor(const Frequency& k,
                                       const std::vector<int>& alpha,
                                       double L) {
  if (alpha.size() != k.size())
    throw std::invalid_argument("mode_deriv_factor: dimension mismatch");
  const double base = pi / (2.0 * L);
  int order = 0;
  double mag = 1.0;
  for (std::size_t j = 0; j < k.size(); ++j) {
    order += alpha[j];
    for (int rep = 0; rep < alpha[j]; ++rep) mag *= base * double(k[j]);
  }
  // (i)^order cycles 1, i, -1, -i.
  static const std::complex<double> unit[4] = {
      {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  return mag * unit[order % 4];
}

std::complex<double> mode_inner_omega(const Frequency& k, const Frequency& l,
                                      const DomainSpec& dom) {
  dom.validate();
  if (k.size() != std::size_t(dom.d) || l.size() != std::size_t(dom.d))
    throw std::invalid_argument("mode_inner_omega: dimension mismatch");
  const double base = pi / (2.0 * dom.L);
  std::complex<double> prod(1.0, 0.0);
  for (int j = 0; j < dom.d; ++j) {
    const double lo = dom.omega_lo[std::size_t(j)];
    const double hi = dom.omega_hi[std::size_t(j)];
    const int m = k[std::size_t(j)] - l[std::size_t(j)];
    if (m == 0) {
      prod *= hi - lo;
      continue;
    }
    // int_lo^hi exp(i w x) dx = (exp(i w hi) - exp(i w lo)) / (i w)
    const double w = base * double(m);
    const std::complex<double> num(std::cos(w * hi) - std::cos(w * lo),
                                   std::sin(w * hi) - std::sin(w * lo));
    prod *= num / std::complex<double>(0.0, w);
  }
  return prod;
}

}  // namespace piml
