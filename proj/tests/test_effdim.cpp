#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "piml/effdim.hpp"
#include "piml/quantization.hpp"

using namespace piml;
using std::numbers::pi;

namespace {

Spectrum synthetic(const std::vector<double>& a, int s = 1, int d = 1) {
  Spectrum spec;
  spec.eigenvalues = a;
  for (std::size_t m = 0; m < a.size(); ++m)
    spec.provenance.push_back({EigSource::galerkin, int(m)});
  spec.params.known = false;  // no metadata: forces the fitted-envelope path
  spec.params.s = s;
  spec.params.d = d;
  spec.validate();
  return spec;
}

}  // namespace

TEST_CASE("single eigenvalue, no metadata: plain Lorentzian term") {
  const auto spec = synthetic({1.0});
  const auto rep = effective_dimension(spec, 1.0);
  CHECK(rep.value == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(rep.truncation_tail_bound == 0.0);
  CHECK(rep.kappa == 1.0);
  // Two entries sum termwise.
  const auto rep2 = effective_dimension(synthetic({1.0, 0.25}), 2.0);
  const double want = 1.0 / (1.0 + 1.0 / 2.0) + 1.0 / (1.0 + 1.0 / 0.5);
  CHECK(rep2.value == doctest::Approx(want).epsilon(1e-15));
}

TEST_CASE("monotone in kappa and in the spectrum") {
  const auto spec = synthetic({2.0, 1.0, 0.5, 0.1});
  const double lo = effective_dimension(spec, 0.5).value;
  const double hi = effective_dimension(spec, 2.0).value;
  CHECK(lo < hi);
  const auto bigger = synthetic({3.0, 2.0, 1.0, 0.2});
  CHECK(effective_dimension(spec, 1.0).value <
        effective_dimension(bigger, 1.0).value);
}

TEST_CASE("frozen sweep over the penalty scale") {
  // lambda = mu = t/2 on the interval spectrum, kappa = 1, head of 400.
  const double ts[4] = {1e-1, 1e-2, 1e-3, 1e-4};
  const double want[4] = {3.432694334021, 10.42445961315, 32.10489135881,
                          100.5546276900};
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < 4; ++i) {
    const auto spec =
        exact_spectrum_1d(RegularizationParams{ts[i] / 2, ts[i] / 2}, 1.0, 400);
    const auto rep = effective_dimension(spec, 1.0);
    CHECK(rep.value == doctest::Approx(want[i]).epsilon(1e-8));
    CHECK(rep.truncation_tail_bound > 0.0);
    const double x = std::log(ts[i]), y = std::log(rep.value);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  // N ~ t^{-1/2}: the log-log slope of the sweep.
  const double slope = (4.0 * sxy - sx * sy) / (4.0 * sxx - sx * sx);
  CHECK(slope == doctest::Approx(-0.4888818441).epsilon(1e-6));
  CHECK(slope > -0.6);
  CHECK(slope < -0.4);
}

TEST_CASE("known-metadata tail shrinks as the head grows") {
  const RegularizationParams reg{0.05, 0.05};
  const auto short_spec = exact_spectrum_1d(reg, 1.0, 50);
  const auto long_spec = exact_spectrum_1d(reg, 1.0, 400);
  const auto rs = effective_dimension(short_spec, 1.0);
  const auto rl = effective_dimension(long_spec, 1.0);
  CHECK(rl.truncation_tail_bound < rs.truncation_tail_bound);
  // Totals agree once the tail is accounted for: the short-head total is
  // an upper estimate of the long-head one.
  CHECK(rl.value <= rs.value * (1.0 + 1e-9));
  CHECK(rs.value - rl.value < 0.05 * rl.value);
}

TEST_CASE("fitted envelope, quadratic decay: tail tracks the true remainder") {
  // a_m = m^-2 exactly (with a large a_0), so the fitted constant is 1 and
  // the tail should approximate sum_{m >= 40} 1/(1 + m^2).
  std::vector<double> a = {2.0};
  for (int m = 1; m < 40; ++m) a.push_back(1.0 / double(m * m));
  const auto rep = effective_dimension(synthetic(a), 1.0);
  CHECK(rep.truncation_tail_bound > 0.0);
  double remainder = 0.0;
  for (int m = 5000000; m >= 40; --m)
    remainder += 1.0 / (1.0 + double(m) * double(m));
  CHECK(rep.truncation_tail_bound ==
        doctest::Approx(remainder).epsilon(0.05));
}

TEST_CASE("fitted envelope, quartic decay: power-integral branch") {
  std::vector<double> a = {2.0};
  for (int m = 1; m < 40; ++m) {
    const double m2 = double(m) * double(m);
    a.push_back(1.0 / (m2 * m2));
  }
  const auto rep = effective_dimension(synthetic(a, 2, 1), 1.0);
  // Envelope C = 1, p = 4: tail = 39^-3 / 3.
  CHECK(rep.truncation_tail_bound ==
        doctest::Approx(std::pow(39.0, -3.0) / 3.0).epsilon(1e-9));
  double remainder = 0.0;
  for (int m = 2000; m >= 40; --m) {
    const double m2 = double(m) * double(m);
    remainder += 1.0 / (1.0 + m2 * m2);
  }
  CHECK(rep.truncation_tail_bound ==
        doctest::Approx(remainder).epsilon(0.1));
}

TEST_CASE("heads too short to fit an envelope get a zero tail") {
  std::vector<double> a;
  for (int m = 1; m <= 10; ++m) a.push_back(1.0 / double(m * m));
  const auto rep = effective_dimension(synthetic(a), 1.0);
  CHECK(rep.truncation_tail_bound == 0.0);
}

TEST_CASE("schedules: frozen values and scaling identities") {
  {
    const auto reg = minimax_schedule(1000, 1, 1);
    CHECK(reg.lambda ==
          doctest::Approx(0.026282608848784667).epsilon(1e-15));
    CHECK(reg.mu ==
          doctest::Approx(reg.lambda * std::sqrt(std::log(1000.0)))
              .epsilon(1e-15));
    CHECK(minimax_schedule(8, 1, 1).lambda ==
          doctest::Approx(0.36050672165022074).epsilon(1e-15));
    // Higher smoothness decays faster in n.
    CHECK(minimax_schedule(1000, 2, 1).lambda < reg.lambda);
  }
  {
    CHECK(speedup_schedule(100, 0.0).mu ==
          doctest::Approx(0.21714724095162588).epsilon(1e-15));
    const auto reg = speedup_schedule(10000, std::sqrt(2.0 / 300.0));
    CHECK(reg.mu == doctest::Approx(0.02638632837364678).epsilon(1e-15));
    CHECK(reg.lambda ==
          doctest::Approx(0.0009210340371976184).epsilon(1e-15));
  }
}

TEST_CASE("input validation") {
  Spectrum empty;
  empty.params.known = false;
  CHECK_THROWS_AS(effective_dimension(empty, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(effective_dimension(synthetic({1.0}), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(effective_dimension(synthetic({1.0}), -2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(minimax_schedule(1, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(minimax_schedule(100, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(speedup_schedule(1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(speedup_schedule(100, -0.1), std::invalid_argument);
}

TEST_CASE("each Lorentzian term is squeezed by the eigenvalue brackets") {
  // x -> 1 / (1 + 1/(kappa x)) is increasing, so the enclosure of a_m by
  // the closed-form brackets transfers to the effective-dimension terms.
  const double kappa = 0.5;
  for (const auto& [lambda, mu] : {std::pair{1.0, 1.0},
                                   std::pair{0.05, 0.4},
                                   std::pair{2.0, 0.0}}) {
    const RegularizationParams reg{lambda, mu};
    const double L = 1.0;
    const auto spec = exact_spectrum_1d(reg, L, 101);
    auto term = [&](double a) { return 1.0 / (1.0 + 1.0 / (kappa * a)); };
    for (int m = 3; m <= 100; ++m) {
      const double a = spec.eigenvalues[std::size_t(m)];
      CHECK(term(a) <= term(bracket_upper(m, reg, L)) * (1.0 + 1e-12));
      CHECK(term(a) >= term(bracket_lower(m, reg, L)) * (1.0 - 1e-12));
    }
  }
}
