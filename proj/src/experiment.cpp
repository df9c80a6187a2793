#include "piml/experiment.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "piml/io.hpp"
#include "piml/threads.hpp"

namespace piml {

using ordered_json = nlohmann::ordered_json;

// -------------------------------------------------------------- scenarios

double NoiseModel::sample(Rng& rng) const {
  switch (kind) {
    case Kind::gaussian:
      return sigma * rng.normal();
    case Kind::bounded:
      return rng.uniform(-bound, bound);
    case Kind::custom:
      if (!sampler) throw std::logic_error("noise: custom sampler missing");
      return sampler(rng);
  }
  throw std::logic_error("noise: unreachable");
}

NoiseModel NoiseModel::gaussian_model(double sigma) {
  if (!(sigma > 0.0))
    throw std::invalid_argument("noise: gaussian sigma must be > 0");
  NoiseModel nm;
  nm.kind = Kind::gaussian;
  nm.sigma = sigma;
  return nm;
}

NoiseModel NoiseModel::bounded_model(double half_width) {
  if (!(half_width > 0.0))
    throw std::invalid_argument("noise: bound must be > 0");
  NoiseModel nm;
  nm.kind = Kind::bounded;
  nm.bound = half_width;
  nm.sigma = half_width / std::sqrt(3.0);
  return nm;
}

Scenario Scenario::perfect() {
  Scenario sc;
  sc.name = "perfect";
  sc.target = [](const Eigen::VectorXd&) { return 1.0; };
  sc.noise = NoiseModel::gaussian_model(1.0);
  sc.model_error = 0.0;
  sc.dom = DomainSpec::interval(1.0, 0.5);
  return sc;
}

Scenario Scenario::imperfect() {
  Scenario sc;
  sc.name = "imperfect";
  sc.target = [](const Eigen::VectorXd& x) {
    return 1.0 + 0.1 * std::abs(x[0]);
  };
  sc.noise = NoiseModel::gaussian_model(1.0);
  // The schedule keys on the L2 size of the target's non-constant part:
  // ||0.1 x||^2 over [-1,1] = 2/300.  (The misspecification residual
  // ||D f||^2 = ||0.1 sign||^2 = 0.02 is the same order; which bookkeeping
  // value feeds mu only shifts the schedule by a constant factor.)
  sc.model_error = std::sqrt(2.0 / 300.0);
  sc.dom = DomainSpec::interval(1.0, 0.5);
  return sc;
}

// ------------------------------------------------------------- experiment

std::vector<std::size_t> default_n_grid() {
  std::vector<std::size_t> grid;
  for (int i = 0; i < 12; ++i)
    grid.push_back(std::size_t(
        std::llround(std::pow(10.0, 1.0 + 3.0 * double(i) / 11.0))));
  return grid;
}

ExperimentResult run_experiment(const Scenario& scenario,
                                const ExperimentOptions& opts) {
  if (!scenario.target) throw std::invalid_argument("experiment: no target");
  if (opts.replicates < 1)
    throw std::invalid_argument("experiment: replicates must be >= 1");
  if (opts.mc_eval < 1)
    throw std::invalid_argument("experiment: mc_eval must be >= 1");
  std::vector<std::size_t> grid =
      opts.n_grid.empty() ? default_n_grid() : opts.n_grid;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (grid[i] >= grid[i + 1])
      throw std::invalid_argument("experiment: n_grid must strictly increase");
  if (grid.front() < 2)
    throw std::invalid_argument("experiment: n_grid entries must be >= 2");

  const auto t0 = std::chrono::steady_clock::now();
  ExperimentResult result;
  result.scenario = scenario.name;
  result.n_grid = grid;
  result.seed = opts.seed;
  result.replicates = opts.replicates;
  result.mc_eval = opts.mc_eval;
  result.records.resize(grid.size() * opts.replicates);

  parallel_for(result.records.size(), [&](std::size_t t) {
    const std::size_t n_idx = t / opts.replicates;
    const std::size_t rep = t % opts.replicates;
    const std::size_t n = grid[n_idx];
    ReplicateRecord& rec = result.records[t];
    rec.n = n;
    rec.replicate = rep;
    rec.seed = child_seed(opts.seed, std::uint64_t(n), std::uint64_t(rep));
    const RegularizationParams reg =
        speedup_schedule(n, scenario.model_error);
    rec.lambda = reg.lambda;
    rec.mu = reg.mu;
    Rng rng(rec.seed);
    try {
      Dataset data;
      data.xs.resize(Eigen::Index(n), scenario.dom.d);
      data.ys.resize(Eigen::Index(n));
      for (std::size_t i = 0; i < n; ++i)
        for (int k = 0; k < scenario.dom.d; ++k)
          data.xs(Eigen::Index(i), k) =
              rng.uniform(scenario.dom.omega_lo[std::size_t(k)],
                          scenario.dom.omega_hi[std::size_t(k)]);
      for (std::size_t i = 0; i < n; ++i)
        data.ys[Eigen::Index(i)] =
            scenario.target(data.xs.row(Eigen::Index(i)).transpose()) +
            scenario.noise.sample(rng);

      KernelConfig cfg;
      cfg.op = MultiIndexOperator::first_derivative();
      cfg.reg = reg;
      cfg.dom = scenario.dom;
      cfg.backend = KernelBackend::closed_form();
      const KernelModel model = fit(cfg, data, opts.fit);
      rec.err = l2_error(model, scenario.target, scenario.dom, opts.mc_eval,
                         rng);
    } catch (const std::exception& ex) {
      rec.failed = true;
      rec.message = ex.what();
    }
  });

  for (const auto& rec : result.records)
    if (rec.failed) ++result.failures;
  if (10 * result.failures > result.records.size())
    throw std::runtime_error(
        "experiment: more than 10% of replicates failed to fit (" +
        std::to_string(result.failures) + "/" +
        std::to_string(result.records.size()) + ")");

  std::vector<double> series(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double sum = 0.0, sum_log = 0.0;
    std::size_t count = 0;
    for (std::size_t r = 0; r < opts.replicates; ++r) {
      const ReplicateRecord& rec = result.records[g * opts.replicates + r];
      if (rec.failed) continue;
      sum += rec.err;
      if (rec.err > 0.0) sum_log += std::log(rec.err);
      ++count;
    }
    const double mean = count ? sum / double(count) : 0.0;
    double var = 0.0;
    for (std::size_t r = 0; r < opts.replicates; ++r) {
      const ReplicateRecord& rec = result.records[g * opts.replicates + r];
      if (rec.failed) continue;
      var += (rec.err - mean) * (rec.err - mean);
    }
    var = count > 1 ? var / double(count - 1) : 0.0;
    result.err_mean.push_back(mean);
    result.err_std.push_back(std::sqrt(var));
    result.err_stderr.push_back(
        count ? std::sqrt(var / double(count)) : 0.0);
    series[g] = opts.mean_of_logs && count
                    ? std::exp(sum_log / double(count))
                    : mean;
  }

  result.rate = fit_rate(grid, series);
  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return result;
}

RateFit fit_rate(const std::vector<std::size_t>& n_grid,
                 const std::vector<double>& err) {
  if (n_grid.size() != err.size())
    throw std::invalid_argument("fit_rate: length mismatch");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < err.size(); ++i) {
    if (!(err[i] > 0.0)) continue;  // excluded, cannot take the log
    xs.push_back(std::log(double(n_grid[i])));
    ys.push_back(std::log(err[i]));
  }
  if (xs.size() < 3)
    throw std::runtime_error(
        "fit_rate: fewer than 3 grid points with positive error");
  const double n = double(xs.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  RateFit rate;
  rate.slope = sxy / sxx;
  rate.intercept = my - rate.slope * mx;
  rate.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return rate;
}

// ------------------------------------------------------------ serializers

std::string experiment_csv(const ExperimentResult& result) {
  std::string out = "n,replicate,err,lambda,mu,seed\n";
  for (const auto& rec : result.records) {
    if (rec.failed) continue;
    out += std::to_string(rec.n);
    out += ',';
    out += std::to_string(rec.replicate);
    out += ',';
    out += format_double(rec.err);
    out += ',';
    out += format_double(rec.lambda);
    out += ',';
    out += format_double(rec.mu);
    out += ',';
    out += std::to_string(rec.seed);
    out += '\n';
  }
  return out;
}

std::string experiment_summary_json(const ExperimentResult& result) {
  ordered_json j;
  j["scenario"] = result.scenario;
  j["seed"] = result.seed;
  j["replicates"] = result.replicates;
  j["mc_eval"] = result.mc_eval;
  j["n_grid"] = result.n_grid;
  j["err_mean"] = result.err_mean;
  j["err_std"] = result.err_std;
  j["err_stderr"] = result.err_stderr;
  j["slope"] = result.rate.slope;
  j["intercept"] = result.rate.intercept;
  j["r2"] = result.rate.r2;
  j["failures"] = result.failures;
  return j.dump(2) + "\n";
}

}  // namespace piml
