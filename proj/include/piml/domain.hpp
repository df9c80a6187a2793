#pragma once
// Geometry of the problem: the periodic box [-2L, 2L]^d that carries the
// Fourier basis, and the axis-aligned sub-box Omega where data live and the
// physics penalty is measured.

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace piml {

struct DomainSpec {
  int d = 1;
  double L = 1.0;
  // Omega = prod_j [omega_lo[j], omega_hi[j]], required inside [-2L, 2L]^d.
  std::vector<double> omega_lo;
  std::vector<double> omega_hi;
  // Lower bound for the sampling density of the design points on Omega,
  // e.g. 1/(2L) for the uniform law on [-L, L] in one dimension.
  double kappa = 0.0;

  void validate() const {
    if (d < 1) throw std::invalid_argument("domain: d must be >= 1");
    if (!(L > 0.0)) throw std::invalid_argument("domain: L must be > 0");
    if (omega_lo.size() != std::size_t(d) || omega_hi.size() != std::size_t(d))
      throw std::invalid_argument("domain: omega bounds must have length d");
    for (int j = 0; j < d; ++j) {
      const double lo = omega_lo[std::size_t(j)], hi = omega_hi[std::size_t(j)];
      if (!(lo < hi)) throw std::invalid_argument("domain: empty omega side");
      if (lo < -2.0 * L || hi > 2.0 * L)
        throw std::invalid_argument("domain: omega outside the box");
    }
  }

  double box_volume() const {
    double v = 1.0;
    for (int j = 0; j < d; ++j) v *= 4.0 * L;
    return v;
  }

  double omega_volume() const {
    double v = 1.0;
    for (int j = 0; j < d; ++j)
      v *= omega_hi[std::size_t(j)] - omega_lo[std::size_t(j)];
    return v;
  }

  bool omega_is_box() const {
    for (int j = 0; j < d; ++j)
      if (omega_lo[std::size_t(j)] != -2.0 * L ||
          omega_hi[std::size_t(j)] != 2.0 * L)
        return false;
    return true;
  }

  bool omega_contains(const Eigen::VectorXd& x) const {
    for (int j = 0; j < d; ++j)
      if (x[j] < omega_lo[std::size_t(j)] || x[j] > omega_hi[std::size_t(j)])
        return false;
    return true;
  }

  // The standard one-dimensional setup: box half-width 2L, Omega = [-L, L].
  static DomainSpec interval(double L, double kappa = 0.0) {
    DomainSpec dom;
    dom.d = 1;
    dom.L = L;
    dom.omega_lo = {-L};
    dom.omega_hi = {L};
    dom.kappa = kappa;
    dom.validate();
    return dom;
  }

  // Omega equal to the whole periodic box.
  static DomainSpec full_box(int d, double L, double kappa = 0.0) {
    DomainSpec dom;
    dom.d = d;
    dom.L = L;
    dom.omega_lo.assign(std::size_t(d), -2.0 * L);
    dom.omega_hi.assign(std::size_t(d), 2.0 * L);
    dom.kappa = kappa;
    dom.validate();
    return dom;
  }
};

}  // namespace piml
