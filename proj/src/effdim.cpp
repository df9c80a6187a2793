#include "piml/effdim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace piml {

using std::numbers::pi;

EffDimReport effective_dimension(const Spectrum& spectrum, double kappa) {
  if (spectrum.eigenvalues.empty())
    throw std::invalid_argument("effective_dimension: empty spectrum");
  if (!(kappa > 0.0))
    throw std::invalid_argument("effective_dimension: kappa must be > 0");
  spectrum.validate();

  EffDimReport report;
  report.kappa = kappa;
  for (double a : spectrum.eigenvalues)
    report.value += 1.0 / (1.0 + 1.0 / (kappa * a));

  const SpectrumParams& p = spectrum.params;
  const std::size_t M = spectrum.eigenvalues.size();

  if (p.known && p.d == 1 && p.s == 1) {
    // Interval spectra obey a_m <= 4L^2 / ((lambda+mu) (m-2)^2 pi^2) from
    // rank 3 on, so the omitted summands are dominated by a shifted
    // Lorentzian whose integral is elementary:
    //   sum_{m>=M} 1/(1 + ((m-2)/T)^2) <= T (pi/2 - atan((M-3)/T)),
    //   T^2 = 4 L^2 kappa / ((lambda+mu) pi^2).
    const double T = std::sqrt(4.0 * p.L * p.L * kappa /
                               ((p.lambda + p.mu) * pi * pi));
    const double lo = std::max(double(M) - 3.0, 0.0);
    report.truncation_tail_bound = T * (pi / 2.0 - std::atan(lo / T));
    report.value += report.truncation_tail_bound;
    return report;
  }

  // Generic route: fit the power envelope a_m <= C m^{-p}, p = 2s/d, to the
  // back half of the head (ranks 10 .. M/2) and integrate it.  Heads too
  // short to fit get a zero estimate.
  const double pw = 2.0 * double(p.s) / double(p.d);
  if (M < 20 || pw <= 1.0) return report;
  double C = 0.0;
  for (std::size_t m = 10; m <= M / 2; ++m)
    C = std::max(C, spectrum.eigenvalues[m] *
                        std::pow(double(m), pw));
  const double m0 = double(M) - 1.0;
  if (std::abs(pw - 2.0) < 1e-12) {
    const double T = std::sqrt(kappa * C);
    report.truncation_tail_bound = T * (pi / 2.0 - std::atan(m0 / T));
  } else {
    report.truncation_tail_bound =
        kappa * C * std::pow(m0, 1.0 - pw) / (pw - 1.0);
  }
  report.value += report.truncation_tail_bound;
  return report;
}

RegularizationParams minimax_schedule(std::size_t n, int s, int d) {
  if (n < 2)
    throw std::invalid_argument("minimax_schedule: need n >= 2");
  if (s < 1 || d < 1)
    throw std::invalid_argument("minimax_schedule: need s >= 1, d >= 1");
  const double logn = std::log(double(n));
  RegularizationParams reg;
  reg.lambda = std::pow(double(n), -2.0 * s / (2.0 * s + d)) * std::sqrt(logn);
  reg.mu = reg.lambda * std::sqrt(logn);
  return reg;
}

RegularizationParams speedup_schedule(std::size_t n, double model_error) {
  if (n < 2)
    throw std::invalid_argument("speedup_schedule: need n >= 2");
  if (model_error < 0.0)
    throw std::invalid_argument("speedup_schedule: model_error must be >= 0");
  RegularizationParams reg;
  reg.lambda = std::log(double(n)) / double(n);
  reg.mu = model_error > 0.0
               ? std::pow(double(n), -2.0 / 3.0) / model_error
               : 1.0 / std::log(double(n));
  return reg;
}

}  // namespace piml
