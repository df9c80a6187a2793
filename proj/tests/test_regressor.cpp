#include "doctest.h"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "piml/effdim.hpp"
#include "piml/regressor.hpp"
#include "piml/rng.hpp"

using namespace piml;
using std::numbers::pi;

namespace {

KernelConfig standard(double L, double lambda, double mu,
                      KernelBackend backend = KernelBackend::closed_form()) {
  return KernelConfig::standard_1d(L, lambda, mu, backend);
}

Dataset sample_dataset(int n, std::uint64_t seed,
                       const std::function<double(double)>& f,
                       double noise_scale, double L = 1.0) {
  Rng rng(seed);
  Dataset data;
  data.xs.resize(n, 1);
  data.ys.resize(n);
  for (int i = 0; i < n; ++i) data.xs(i, 0) = rng.uniform(-L, L);
  for (int i = 0; i < n; ++i)
    data.ys[i] = f(data.xs(i, 0)) + noise_scale * rng.normal();
  return data;
}

}  // namespace

TEST_CASE("one-point fit has the scalar closed form") {
  const auto cfg = standard(1.0, 1.0, 1.0);
  const double x0 = 0.25, y0 = 2.0;
  Dataset data;
  data.xs.resize(1, 1);
  data.xs(0, 0) = x0;
  data.ys.resize(1);
  data.ys[0] = y0;
  const KernelModel model = fit(cfg, data);
  const double g = KernelEngine(cfg).eval(x0, x0);
  REQUIRE(model.dual_coeffs.size() == 1);
  CHECK(model.dual_coeffs[0] ==
        doctest::Approx(y0 / (g + 1.0)).epsilon(1e-12));
  CHECK(predict(model, x0) ==
        doctest::Approx(g * y0 / (g + 1.0)).epsilon(1e-12));
  CHECK(model.fit_diagnostics.solver == "dual");
  CHECK(model.fit_diagnostics.condition_estimate >= 1.0);
}

TEST_CASE("duplicated training points stay well posed") {
  const auto cfg = standard(1.0, 1.0, 0.5);
  Dataset data;
  data.xs.resize(3, 1);
  data.xs << 0.4, 0.4, 0.4;
  data.ys.resize(3);
  data.ys << 1.0, 1.0, 1.0;
  const KernelModel model = fit(cfg, data);
  CHECK(std::isfinite(predict(model, 0.4)));
  CHECK(std::isfinite(predict(model, -0.9)));
  CHECK(model.fit_diagnostics.solver_residual <= 1e-8 * data.ys.norm());
}

TEST_CASE("predictions are linear in Y") {
  const auto cfg = standard(1.0, 0.5, 0.5);
  Dataset data = sample_dataset(25, 3, [](double x) { return std::sin(x); },
                                0.1);
  const KernelModel m1 = fit(cfg, data);
  Dataset doubled = data;
  doubled.ys *= 2.0;
  const KernelModel m2 = fit(cfg, doubled);
  for (double x : {-0.8, -0.1, 0.33, 0.9})
    CHECK(predict(m2, x) == doctest::Approx(2.0 * predict(m1, x)).epsilon(1e-10));
}

TEST_CASE("fitted coefficients minimize the penalized objective") {
  const auto cfg = standard(1.0, 0.2, 0.8);
  Dataset data = sample_dataset(
      40, 17, [](double x) { return 1.0 + 0.3 * x * x; }, 0.2);
  const KernelModel model = fit(cfg, data);
  const Eigen::MatrixXd G = model.engine->gram(data.xs);
  const double n = double(data.size());
  auto objective = [&](const Eigen::VectorXd& c) {
    const Eigen::VectorXd r = G * c - data.ys;
    return r.squaredNorm() / n + c.dot(G * c);
  };
  const double at_min = objective(model.dual_coeffs);
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd delta(model.dual_coeffs.size());
    for (Eigen::Index i = 0; i < delta.size(); ++i)
      delta[i] = 1e-3 * rng.uniform(-1.0, 1.0);
    CHECK(objective(model.dual_coeffs + delta) >= at_min - 1e-9);
  }
  CHECK(model.fit_diagnostics.solver_residual <= 1e-8 * data.ys.norm());
}

TEST_CASE("200-point null-space target: mean prediction near one") {
  // Y = 1 + eps with the misspecification-aware schedule at model_error 0.
  const auto reg = speedup_schedule(200, 0.0);
  const auto cfg = standard(1.0, reg.lambda, reg.mu);
  const Dataset data =
      sample_dataset(200, 0, [](double) { return 1.0; }, 1.0);
  const KernelModel model = fit(cfg, data);
  double mean = 0.0;
  for (int i = 0; i <= 100; ++i)
    mean += predict(model, -1.0 + 2.0 * i / 100.0);
  mean /= 101.0;
  CHECK(std::abs(mean - 1.0) < 0.15);
}

TEST_CASE("dual and low-rank solvers agree on a 500-point fixture") {
  const auto cfg = standard(1.0, 1.0, 1.0);
  const Dataset data = sample_dataset(
      500, 5, [](double x) { return 1.0 + 0.4 * std::sin(pi * x); }, 0.3);
  FitOptions dual_opts;
  dual_opts.solver = SolverKind::dual;
  const KernelModel md = fit(cfg, data, dual_opts);
  FitOptions lr_opts;
  lr_opts.solver = SolverKind::low_rank;
  lr_opts.low_rank_modes = 4096;
  const KernelModel ml = fit(cfg, data, lr_opts);
  CHECK(md.fit_diagnostics.solver == "dual");
  CHECK(ml.fit_diagnostics.solver == "low_rank");
  double scale = 0.0, worst = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double x = -1.0 + 2.0 * i / 100.0;
    const double pd = predict(md, x);
    scale = std::max(scale, std::abs(pd));
    worst = std::max(worst, std::abs(pd - predict(ml, x)));
  }
  CHECK(worst <= 1e-6 * std::max(scale, 1.0));
}

TEST_CASE("auto solver selection respects the cutoff") {
  const auto cfg = standard(1.0, 0.5, 0.5);
  const Dataset data = sample_dataset(60, 21, [](double x) { return x; }, 0.1);
  FitOptions opts;  // default: dual up to 3000
  CHECK(fit(cfg, data, opts).fit_diagnostics.solver == "dual");
  opts.dual_cutoff = 50;
  opts.low_rank_modes = 256;
  const KernelModel ml = fit(cfg, data, opts);
  CHECK(ml.fit_diagnostics.solver == "low_rank");
  CHECK(ml.dual_coeffs.size() == 0);
  CHECK(ml.spectral_coeffs.size() == 256);
  // cosine_expand pads or truncates a low-rank model's own coefficients.
  const Eigen::VectorXd padded = cosine_expand(ml, 300);
  REQUIRE(padded.size() == 300);
  CHECK(padded.head(256) == ml.spectral_coeffs);
  CHECK(padded.tail(44).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::VectorXd cut = cosine_expand(ml, 100);
  REQUIRE(cut.size() == 100);
  CHECK(cut == ml.spectral_coeffs.head(100));
  // Above the mode count the whitened-primal branch takes over; both
  // low-rank branches approximate the same dual fit.
  FitOptions small;
  small.solver = SolverKind::low_rank;
  small.low_rank_modes = 32;
  const KernelModel mw = fit(cfg, data, small);
  CHECK(mw.fit_diagnostics.solver == "low_rank");
  FitOptions dual_opts;
  dual_opts.solver = SolverKind::dual;
  const KernelModel md = fit(cfg, data, dual_opts);
  for (double x : {-0.7, 0.0, 0.6})
    CHECK(predict(mw, x) == doctest::Approx(predict(md, x)).epsilon(2e-3));
}

TEST_CASE("low-rank solver refuses non-diagonal configurations") {
  const auto cfg =
      standard(1.0, 1.0, 1.0, KernelBackend::spectral(65, true));
  const Dataset data = sample_dataset(20, 2, [](double) { return 1.0; }, 0.1);
  FitOptions opts;
  opts.solver = SolverKind::low_rank;
  CHECK_THROWS_AS(fit(cfg, data, opts), std::invalid_argument);
}

TEST_CASE("RKHS-norm accounting: c'Gc equals the spectral energy") {
  const auto cfg = standard(1.0, 0.5, 0.7);
  const Dataset data = sample_dataset(
      60, 8, [](double x) { return 1.0 + 0.2 * std::cos(pi * x); }, 0.2);
  const KernelModel model = fit(cfg, data);
  const Eigen::MatrixXd G = model.engine->gram(data.xs);
  const double quad = model.dual_coeffs.dot(G * model.dual_coeffs);
  const int N = 4096;
  const Eigen::VectorXd theta = cosine_expand(model, N);
  const double c = cfg.reg.lambda + cfg.mu_effective();
  double energy = 0.0;
  for (int m = 0; m < N; ++m) {
    const double xi = m * pi / 2.0;
    energy += theta[m] * theta[m] * (cfg.reg.lambda + c * xi * xi);
  }
  CHECK(energy == doctest::Approx(quad).epsilon(1e-4));
}

TEST_CASE("physics seminorm is non-increasing along a mu sweep") {
  const Dataset data = sample_dataset(
      120, 31, [](double x) { return 1.0 + 0.1 * std::abs(x); }, 0.05);
  const double mus[5] = {0.0, 0.1, 1.0, 10.0, 100.0};
  std::vector<double> seminorm;
  for (double mu : mus) {
    const KernelModel model = fit(standard(1.0, 0.01, mu), data);
    seminorm.push_back(physics_seminorm(model, 2048));
  }
  int soft = 0, hard = 0;
  for (int i = 0; i + 1 < 5; ++i) {
    if (seminorm[std::size_t(i + 1)] > seminorm[std::size_t(i)]) ++soft;
    if (seminorm[std::size_t(i + 1)] > seminorm[std::size_t(i)] + 1e-6) ++hard;
  }
  CHECK(hard == 0);
  CHECK(soft <= 1);
  // The sweep actually bites: two decades of mu shrink the seminorm a lot.
  CHECK(seminorm.back() < 0.5 * seminorm.front());
}

TEST_CASE("l2_error: exactness, constant gap, stream consumption") {
  const auto cfg = standard(1.0, 1.0, 1.0);
  const Dataset data = sample_dataset(30, 12, [](double x) { return x; }, 0.1);
  const KernelModel model = fit(cfg, data);
  // Against its own prediction the error is exactly zero.
  const TargetFn self = [&](const Eigen::VectorXd& x) {
    return predict(model, x);
  };
  CHECK(l2_error(model, self, cfg.dom, 200, 7u) == 0.0);
  // A zero model against the constant-one target integrates to exactly 1.
  Dataset zeros = data;
  zeros.ys.setZero();
  const KernelModel zero_model = fit(cfg, zeros);
  const TargetFn one = [](const Eigen::VectorXd&) { return 1.0; };
  // Dual coefficients from Y=0 are identically zero.
  CHECK(zero_model.dual_coeffs.cwiseAbs().maxCoeff() == 0.0);
  CHECK(l2_error(zero_model, one, cfg.dom, 123, 99u) == 1.0);
  // The Rng overload consumes exactly n_eval draws in point order, so two
  // back-to-back calls continue the stream deterministically.
  Rng a(42), b(42);
  const double e1 = l2_error(model, one, cfg.dom, 50, a);
  const double e2 = l2_error(model, one, cfg.dom, 50, a);
  Rng skip(42);
  for (int i = 0; i < 50; ++i) skip.uniform(-1.0, 1.0);
  const double e2b = l2_error(model, one, cfg.dom, 50, skip);
  CHECK(e2 == e2b);
  CHECK(e1 == l2_error(model, one, cfg.dom, 50, b));
}

TEST_CASE("Monte Carlo variance halves when n_eval doubles") {
  const auto cfg = standard(1.0, 0.5, 0.5);
  const Dataset data = sample_dataset(40, 4, [](double x) { return x * x; },
                                      0.2);
  const KernelModel model = fit(cfg, data);
  const TargetFn target = [](const Eigen::VectorXd& x) {
    return x[0] * x[0];
  };
  auto variance_of = [&](std::size_t n_eval, std::uint64_t base) {
    std::vector<double> errs;
    for (int r = 0; r < 50; ++r)
      errs.push_back(l2_error(model, target, cfg.dom, n_eval, base + r));
    double mean = 0.0;
    for (double e : errs) mean += e;
    mean /= double(errs.size());
    double var = 0.0;
    for (double e : errs) var += (e - mean) * (e - mean);
    return var / double(errs.size() - 1);
  };
  const double v250 = variance_of(250, 1000);
  const double v500 = variance_of(500, 2000);
  const double ratio = v250 / v500;
  CHECK(ratio > 1.5);
  CHECK(ratio < 2.5);
}

TEST_CASE("dataset: validation and CSV round trip") {
  Dataset data;
  data.xs.resize(2, 1);
  data.xs << 0.5, -0.25;
  data.ys.resize(2);
  data.ys << 1.75, -0.125;
  const auto dom = DomainSpec::interval(1.0);
  CHECK_NOTHROW(data.validate(dom));
  const std::string csv = data.to_csv();
  CHECK(csv == "x,y\n0.5,1.75\n-0.25,-0.125\n");
  const Dataset back = Dataset::from_csv(csv);
  CHECK(back.xs(0, 0) == data.xs(0, 0));
  CHECK(back.ys[1] == data.ys[1]);
  CHECK(back.to_csv() == csv);  // byte-identical round trip

  Dataset outside = data;
  outside.xs(1, 0) = 1.5;
  CHECK_THROWS_AS(outside.validate(dom), std::invalid_argument);
  Dataset mismatched = data;
  mismatched.ys.resize(3);
  CHECK_THROWS_AS(mismatched.validate(dom), std::invalid_argument);
  Dataset empty;
  empty.xs.resize(0, 1);
  empty.ys.resize(0);
  CHECK_THROWS_AS(empty.validate(dom), std::invalid_argument);
  CHECK_THROWS_AS(Dataset::from_csv("a,b\n1,2\n"), std::runtime_error);
}

TEST_CASE("model JSON: byte-stable round trip, equal predictions") {
  const auto cfg = standard(1.0, 0.3, 0.9);
  const Dataset data = sample_dataset(15, 77, [](double x) { return x; }, 0.1);
  const KernelModel model = fit(cfg, data);
  const std::string text = model_to_json(model);
  const KernelModel back = model_from_json(text);
  CHECK(model_to_json(back) == text);
  for (double x : {-0.95, -0.2, 0.0, 0.41, 1.0})
    CHECK(predict(back, x) == doctest::Approx(predict(model, x)).epsilon(1e-12));
  CHECK(back.fit_diagnostics.solver == "dual");
  // Low-rank models carry spectral coefficients through the same file.
  FitOptions opts;
  opts.solver = SolverKind::low_rank;
  opts.low_rank_modes = 128;
  const KernelModel lr = fit(cfg, data, opts);
  const KernelModel lr_back = model_from_json(model_to_json(lr));
  CHECK(model_to_json(lr_back) == model_to_json(lr));
  for (double x : {-0.6, 0.3})
    CHECK(predict(lr_back, x) ==
          doctest::Approx(predict(lr, x)).epsilon(1e-12));
  // Junk input is rejected.
  CHECK_THROWS_AS(model_from_json("{\"schema\":\"nope\"}"),
                  std::invalid_argument);
}
