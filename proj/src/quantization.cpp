#include "piml/quantization.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace piml {

using std::numbers::pi;

namespace {

// Bisection + Newton polish for a strictly bracketed root of f on (lo, hi),
// f(lo) < 0 < f(hi) or the reverse.  Bisection runs to `tol`, then a few
// Newton steps (clamped to the bracket) tighten the root toward machine
// precision; the interface residual checks need that extra accuracy.
template <typename F, typename DF>
double solve_bracketed(F f, DF df, double lo, double hi, double tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (!(flo == 0.0 || fhi == 0.0 || (flo < 0.0) != (fhi < 0.0)))
    throw std::logic_error("quantization: lost the root bracket");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 4; ++it) {
    const double g = df(t);
    if (g == 0.0) break;
    double step = f(t) / g;
    double next = t - step;
    if (!(next > lo && next < hi)) break;
    t = next;
    if (std::abs(step) < 1e-17 * (1.0 + t)) break;
  }
  return t;
}

constexpr double kPoleMargin = 1e-9;

}  // namespace

std::vector<double> quantization_roots_symmetric(
    const RegularizationParams& reg, double L, int count) {
  reg.validate();
  if (!(L > 0.0) || count < 1)
    throw std::invalid_argument("quantization: need L > 0, count >= 1");
  // t tan(t) = C with t = xi L; C > 0 puts one root in each upper
  // half-interval (k pi, (k+1/2) pi).
  const double C = reg.lambda / (reg.lambda + reg.mu) * L * std::tanh(L);
  auto f = [C](double t) { return t * std::tan(t) - C; };
  auto df = [](double t) {
    const double c = std::cos(t);
    return std::tan(t) + t / (c * c);
  };
  std::vector<double> roots;
  roots.reserve(std::size_t(count));
  const double tol = 1e-12 * pi;
  for (int k = 0; k < count; ++k) {
    const double lo = k * pi + (k == 0 ? kPoleMargin * pi : 0.0);
    const double hi = (k + 0.5) * pi - kPoleMargin * pi;
    roots.push_back(solve_bracketed(f, df, lo, hi, tol) / L);
  }
  return roots;
}

std::vector<double> quantization_roots_antisymmetric(
    const RegularizationParams& reg, double L, int count) {
  reg.validate();
  if (!(L > 0.0) || count < 1)
    throw std::invalid_argument("quantization: need L > 0, count >= 1");
  // tan(t)/t = -(1 + mu/lambda) tanh(L)/L, i.e. tan(t) + Ca t = 0 with
  // Ca > 0: one root per lower half-interval ((k-1/2) pi, k pi), k >= 1.
  const double Ca =
      (1.0 + reg.mu / reg.lambda) * std::tanh(L) / L;
  auto f = [Ca](double t) { return std::tan(t) + Ca * t; };
  auto df = [Ca](double t) {
    const double c = std::cos(t);
    return 1.0 / (c * c) + Ca;
  };
  std::vector<double> roots;
  roots.reserve(std::size_t(count));
  const double tol = 1e-12 * pi;
  for (int k = 1; k <= count; ++k) {
    const double lo = (k - 0.5) * pi + kPoleMargin * pi;
    const double hi = k * pi - kPoleMargin * pi;
    roots.push_back(solve_bracketed(f, df, lo, hi, tol) / L);
  }
  return roots;
}

double bracket_lower(int m, const RegularizationParams& reg, double L) {
  if (m < 3) throw std::invalid_argument("bracket: only stated for m >= 3");
  const double c = 4.0 * L * L / ((reg.lambda + reg.mu) * pi * pi);
  return c / (double(m + 4) * double(m + 4));
}

double bracket_upper(int m, const RegularizationParams& reg, double L) {
  if (m < 3) throw std::invalid_argument("bracket: only stated for m >= 3");
  const double c = 4.0 * L * L / ((reg.lambda + reg.mu) * pi * pi);
  return c / (double(m - 2) * double(m - 2));
}

Spectrum exact_spectrum_1d(const RegularizationParams& reg, double L,
                           int count) {
  reg.validate();
  if (count < 6)
    throw std::invalid_argument("exact_spectrum_1d: count must be >= 6");
  const int n_sym = (count + 1) / 2;
  const int n_anti = count / 2;
  const auto sym = quantization_roots_symmetric(reg, L, n_sym);
  const auto anti = quantization_roots_antisymmetric(reg, L, n_anti);

  Spectrum spec;
  spec.params = {reg.lambda, reg.mu, L, 1, 1, true};
  const double c = reg.lambda + reg.mu;
  double prev_xi = -1.0;
  for (int m = 0; m < count; ++m) {
    // Branches interlace exactly: even ranks are symmetric roots, odd
    // ranks antisymmetric.
    const bool is_sym = m % 2 == 0;
    const int idx = m / 2;
    const double xi = is_sym ? sym[std::size_t(idx)] : anti[std::size_t(idx)];
    if (!(xi > prev_xi))
      throw std::runtime_error(
          "exact_spectrum_1d: branch interlacing violated");
    prev_xi = xi;
    spec.eigenvalues.push_back(1.0 / (reg.lambda + c * xi * xi));
    spec.provenance.push_back({is_sym ? EigSource::quant_symmetric
                                      : EigSource::quant_antisymmetric,
                               idx});
  }
  for (int m = 3; m < count; ++m) {
    const double a = spec.eigenvalues[std::size_t(m)];
    if (a < bracket_lower(m, reg, L) || a > bracket_upper(m, reg, L))
      throw std::runtime_error(
          "exact_spectrum_1d: eigenvalue bracket violated at m=" +
          std::to_string(m));
  }
  spec.validate();
  return spec;
}

QuantEigenfunction QuantEigenfunction::make(Parity parity, double xi,
                                            double L) {
  QuantEigenfunction w;
  w.parity = parity;
  w.xi = xi;
  w.L = L;
  // Continuity at +L fixes the exterior amplitude.
  if (parity == Parity::symmetric) {
    w.outside_amp = std::cos(xi * L) / std::cosh(L);
  } else {
    w.outside_amp = -std::sin(xi * L) / std::sinh(L);
  }
  return w;
}

double QuantEigenfunction::eval(double x) const {
  if (std::abs(x) > 2.0 * L + 1e-12)
    throw std::invalid_argument("eigenfunction: point outside the box");
  if (std::abs(x) <= L) {
    return parity == Parity::symmetric ? std::cos(xi * x) : std::sin(xi * x);
  }
  const double t = x > 0.0 ? x - 2.0 * L : x + 2.0 * L;
  if (parity == Parity::symmetric) return outside_amp * std::cosh(t);
  return outside_amp * std::sinh(t);
}

double QuantEigenfunction::deriv(double x) const {
  if (std::abs(x) > 2.0 * L + 1e-12)
    throw std::invalid_argument("eigenfunction: point outside the box");
  if (std::abs(x) <= L) {
    return parity == Parity::symmetric ? -xi * std::sin(xi * x)
                                       : xi * std::cos(xi * x);
  }
  const double t = x > 0.0 ? x - 2.0 * L : x + 2.0 * L;
  if (parity == Parity::symmetric) return outside_amp * std::sinh(t);
  return outside_amp * std::cosh(t);
}

double boundary_matching_check(const QuantEigenfunction& w,
                               const RegularizationParams& reg, double L) {
  reg.validate();
  const double scale = (reg.lambda + reg.mu) * (1.0 + std::abs(w.xi));
  double worst = 0.0;
  for (const double sgn : {1.0, -1.0}) {
    const double xb = sgn * L;
    // Interior-side value and derivative.
    const double vin = w.parity == QuantEigenfunction::Parity::symmetric
                           ? std::cos(w.xi * xb)
                           : std::sin(w.xi * xb);
    const double din = w.parity == QuantEigenfunction::Parity::symmetric
                           ? -w.xi * std::sin(w.xi * xb)
                           : w.xi * std::cos(w.xi * xb);
    // Exterior side.
    const double t = xb > 0.0 ? xb - 2.0 * L : xb + 2.0 * L;
    const double vout = w.parity == QuantEigenfunction::Parity::symmetric
                            ? w.outside_amp * std::cosh(t)
                            : w.outside_amp * std::sinh(t);
    const double dout = w.parity == QuantEigenfunction::Parity::symmetric
                            ? w.outside_amp * std::sinh(t)
                            : w.outside_amp * std::cosh(t);
    const double cont = std::abs(vin - vout);
    const double flux =
        std::abs((reg.lambda + reg.mu) * din - reg.lambda * dout) / scale;
    worst = std::max(worst, std::max(cont, flux));
  }
  return worst;
}

}  // namespace piml
