#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "piml/quadrature.hpp"
#include "piml/quantization.hpp"

using namespace piml;
using std::numbers::pi;

namespace {
constexpr double kRootTol = 1e-12;
}

TEST_CASE("interface quantization roots: frozen references") {
  const RegularizationParams reg{1.0, 1.0};
  const auto sym = quantization_roots_symmetric(reg, 1.0, 3);
  REQUIRE(sym.size() == 3);
  CHECK(sym[0] == doctest::Approx(0.580538231530099).epsilon(kRootTol));
  CHECK(sym[1] == doctest::Approx(3.257947228704382).epsilon(kRootTol));
  CHECK(sym[2] == doctest::Approx(6.343146184123982).epsilon(kRootTol));

  const auto anti = quantization_roots_antisymmetric(reg, 1.0, 3);
  REQUIRE(anti.size() == 3);
  CHECK(anti[0] == doctest::Approx(1.903001485946610).epsilon(kRootTol));
  CHECK(anti[1] == doctest::Approx(4.847017425763517).epsilon(kRootTol));
  CHECK(anti[2] == doctest::Approx(7.936514874424463).epsilon(kRootTol));

  // mu = 0 changes only the antisymmetric branch constant.
  const auto anti0 =
      quantization_roots_antisymmetric(RegularizationParams{1.0, 0.0}, 1.0, 2);
  CHECK(anti0[0] == doctest::Approx(2.124399385449238).epsilon(kRootTol));
  CHECK(anti0[1] == doctest::Approx(4.970647600321128).epsilon(kRootTol));
}

TEST_CASE("roots satisfy their transcendental equations") {
  const RegularizationParams reg{0.3, 1.7};
  const double L = 1.4;
  const double Cs = reg.lambda / (reg.lambda + reg.mu) * L * std::tanh(L);
  for (double xi : quantization_roots_symmetric(reg, L, 6)) {
    const double t = xi * L;
    CHECK(std::abs(t * std::tan(t) - Cs) < 1e-9);
  }
  const double Ca = (1.0 + reg.mu / reg.lambda) * std::tanh(L) / L;
  for (double xi : quantization_roots_antisymmetric(reg, L, 6)) {
    const double t = xi * L;
    CHECK(std::abs(std::tan(t) + Ca * t) < 1e-9);
  }
}

TEST_CASE("exact spectrum: frozen heads for three parameter settings") {
  struct Case {
    double lambda, mu;
    double a0, a1, a3, a10;
  };
  const Case cases[] = {
      {1.0, 1.0, 5.973539811618e-01, 1.213175673384e-01, 2.083890954276e-02,
       2.016121147865e-03},
      {1e-2, 1e-1, 5.732834298330e+01, 3.256794052380e+00, 4.034027117439e-01,
       3.680984970979e-02},
      {1e-3, 1.0, 5.677298773290e+02, 4.042864267813e-01, 4.497931344077e-02,
       4.048757185563e-03},
  };
  for (const auto& c : cases) {
    const auto spec =
        exact_spectrum_1d(RegularizationParams{c.lambda, c.mu}, 1.0, 11);
    REQUIRE(spec.size() == 11);
    CHECK(spec.eigenvalues[0] == doctest::Approx(c.a0).epsilon(1e-10));
    CHECK(spec.eigenvalues[1] == doctest::Approx(c.a1).epsilon(1e-10));
    CHECK(spec.eigenvalues[3] == doctest::Approx(c.a3).epsilon(1e-10));
    CHECK(spec.eigenvalues[10] == doctest::Approx(c.a10).epsilon(1e-10));
  }
}

TEST_CASE("spectrum bookkeeping: alternation, monotonicity, metadata") {
  const RegularizationParams reg{1.0, 1.0};
  const double L = 1.0;
  const auto spec = exact_spectrum_1d(reg, L, 21);
  CHECK(spec.params.lambda == 1.0);
  CHECK(spec.params.mu == 1.0);
  CHECK(spec.params.L == 1.0);
  CHECK(spec.params.s == 1);
  CHECK(spec.params.d == 1);
  CHECK(spec.params.known);
  double prev_xi = -1.0;
  for (std::size_t m = 0; m < spec.size(); ++m) {
    const auto& p = spec.provenance[m];
    // Even ranks come from the symmetric branch, odd from the antisymmetric.
    CHECK(p.source == (m % 2 == 0 ? EigSource::quant_symmetric
                                  : EigSource::quant_antisymmetric));
    CHECK(p.branch_index == int(m / 2));
    if (m > 0)
      CHECK(spec.eigenvalues[m] < spec.eigenvalues[m - 1]);
    // Recover xi from a_m and confirm it lands in the m-th lattice cell.
    const double a = spec.eigenvalues[m];
    const double xi =
        std::sqrt((1.0 / a - reg.lambda) / (reg.lambda + reg.mu));
    CHECK(xi > prev_xi);
    CHECK(xi > double(m) * pi / (2.0 * L));
    CHECK(xi < double(m + 1) * pi / (2.0 * L));
    prev_xi = xi;
  }
  // The frozen root ties rank 0 to its eigenvalue.
  const double r0 = 0.580538231530099;
  CHECK(spec.eigenvalues[0] ==
        doctest::Approx(1.0 / (1.0 + 2.0 * r0 * r0)).epsilon(1e-12));
}

TEST_CASE("two-sided eigenvalue brackets hold for m in [3, 200]") {
  const double L = 1.0;
  const RegularizationParams settings[] = {{1.0, 1.0}, {1e-2, 1e-1}, {1e-3, 1.0}};
  for (const auto& reg : settings) {
    const auto spec = exact_spectrum_1d(reg, L, 201);
    int violations = 0;
    for (int m = 3; m <= 200; ++m) {
      const double a = spec.eigenvalues[std::size_t(m)];
      if (a < bracket_lower(m, reg, L) || a > bracket_upper(m, reg, L))
        ++violations;
    }
    CHECK(violations == 0);
  }
}

TEST_CASE("bracket endpoints are the stated rational expressions") {
  const RegularizationParams reg{0.5, 1.5};
  const double L = 1.25;
  const double c = 4.0 * L * L / ((reg.lambda + reg.mu) * pi * pi);
  CHECK(bracket_lower(7, reg, L) == doctest::Approx(c / 121.0).epsilon(1e-15));
  CHECK(bracket_upper(7, reg, L) == doctest::Approx(c / 25.0).epsilon(1e-15));
  CHECK_THROWS_AS(bracket_lower(2, reg, L), std::invalid_argument);
  CHECK_THROWS_AS(bracket_upper(2, reg, L), std::invalid_argument);
}

TEST_CASE("eigenfunctions: continuity, derivatives, domain guard") {
  const double L = 1.0;
  const auto ws = QuantEigenfunction::make(
      QuantEigenfunction::Parity::symmetric, 3.257947228704382, L);
  const auto wa = QuantEigenfunction::make(
      QuantEigenfunction::Parity::antisymmetric, 1.903001485946610, L);
  for (const auto& w : {ws, wa}) {
    // Value continuity across the interface.
    CHECK(std::abs(w.eval(L - 1e-13) - w.eval(L + 1e-13)) < 1e-10);
    CHECK(std::abs(w.eval(-L + 1e-13) - w.eval(-L - 1e-13)) < 1e-10);
    // deriv() against central differences, inside and outside Omega.
    for (double x : {-1.7, -0.4, 0.9, 1.3}) {
      const double h = 1e-6;
      const double fd = (w.eval(x + h) - w.eval(x - h)) / (2.0 * h);
      CHECK(w.deriv(x) == doctest::Approx(fd).epsilon(1e-7));
    }
    CHECK_THROWS_AS(w.eval(2.0 * L + 0.1), std::invalid_argument);
    CHECK_THROWS_AS(w.deriv(-2.0 * L - 0.1), std::invalid_argument);
  }
  // Parity.
  CHECK(ws.eval(0.7) == doctest::Approx(ws.eval(-0.7)).epsilon(1e-14));
  CHECK(wa.eval(0.7) == doctest::Approx(-wa.eval(-0.7)).epsilon(1e-14));
}

TEST_CASE("boundary matching vanishes exactly at quantization roots") {
  const RegularizationParams reg{1.0, 1.0};
  const double L = 1.0;
  const auto sym = quantization_roots_symmetric(reg, L, 3);
  const auto anti = quantization_roots_antisymmetric(reg, L, 3);
  for (double xi : sym) {
    const auto w =
        QuantEigenfunction::make(QuantEigenfunction::Parity::symmetric, xi, L);
    CHECK(boundary_matching_check(w, reg, L) < 1e-10);
    const auto off = QuantEigenfunction::make(
        QuantEigenfunction::Parity::symmetric, xi * 1.001, L);
    CHECK(boundary_matching_check(off, reg, L) > 1e-7);
  }
  for (double xi : anti) {
    const auto w = QuantEigenfunction::make(
        QuantEigenfunction::Parity::antisymmetric, xi, L);
    CHECK(boundary_matching_check(w, reg, L) < 1e-10);
    const auto off = QuantEigenfunction::make(
        QuantEigenfunction::Parity::antisymmetric, xi * 1.001, L);
    CHECK(boundary_matching_check(off, reg, L) > 1e-7);
  }
}

TEST_CASE("distinct eigenfunctions are L2(Omega)-orthogonal") {
  // Compression to Omega makes the quantization eigenfunctions orthogonal
  // in L2(Omega) exactly, not just approximately - a sharp correctness
  // check on the transcendental roots.
  const RegularizationParams reg{1.0, 1.0};
  const double L = 1.0;
  const auto sym = quantization_roots_symmetric(reg, L, 2);
  const auto anti = quantization_roots_antisymmetric(reg, L, 2);
  std::vector<QuantEigenfunction> ws;
  for (double xi : sym)
    ws.push_back(QuantEigenfunction::make(
        QuantEigenfunction::Parity::symmetric, xi, L));
  for (double xi : anti)
    ws.push_back(QuantEigenfunction::make(
        QuantEigenfunction::Parity::antisymmetric, xi, L));
  auto inner = [&](const QuantEigenfunction& a, const QuantEigenfunction& b) {
    return integrate_panels(
        [&](double x) { return a.eval(x) * b.eval(x); }, {-L, 0.0, L}, 40);
  };
  for (std::size_t i = 0; i < ws.size(); ++i) {
    for (std::size_t j = 0; j < ws.size(); ++j) {
      const double q = inner(ws[i], ws[j]);
      if (i == j)
        CHECK(q > 0.1);  // nondegenerate norms
      else
        CHECK(std::abs(q) < 1e-12);
    }
  }
}

TEST_CASE("spectrum constructor rejects tiny truncations") {
  CHECK_THROWS_AS(exact_spectrum_1d(RegularizationParams{1.0, 1.0}, 1.0, 5),
                  std::invalid_argument);
}
