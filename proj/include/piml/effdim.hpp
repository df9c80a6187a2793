#pragma once
// Effective dimension of a spectrum and the two regularization schedules
// used by the experiment driver.

#include <string>

#include "piml/op.hpp"
#include "piml/spectrum.hpp"

namespace piml {

struct EffDimReport {
  double value = 0.0;        // head sum + tail bound
  double kappa = 1.0;        // design-density bound used
  double truncation_tail_bound = 0.0;
};

// N(lambda, mu) = sum_m 1 / (1 + (kappa a_m)^-1) over the available head of
// the spectrum, plus an analytic bound for the discarded tail:
//   - spectra with known (lambda, mu, L) metadata use the exact 1/m^2
//     envelope of the interval spectrum,
//   - otherwise a power envelope a_m ~ C2 m^{-2s/d} is fitted to the head.
// Spectra too short to fit an envelope get a zero tail bound.
EffDimReport effective_dimension(const Spectrum& spectrum, double kappa);

// Balanced schedule: lambda = n^{-2s/(2s+d)} sqrt(log n), mu = lambda sqrt(log n).
// Needs n >= 2 so the logarithm is positive.
RegularizationParams minimax_schedule(std::size_t n, int s, int d);

// Misspecification-aware schedule: lambda = log(n)/n and
// mu = n^{-2/3} / model_error when model_error > 0, else mu = 1/log(n).
RegularizationParams speedup_schedule(std::size_t n, double model_error);

}  // namespace piml
