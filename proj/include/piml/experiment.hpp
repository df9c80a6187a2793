#pragma once
// Convergence-rate study: for each sample size n, draw datasets, fit with
// the misspecification-aware schedule, measure Monte Carlo L2 errors, and
// regress log(err) on log(n).
//
// Determinism contract: every (n, replicate) task owns an RNG stream seeded
// by child_seed(root_seed, n, replicate) and draws, in order, the n sample
// points, the n noise values, then the mc_eval evaluation points.  Tasks
// are embarrassingly parallel; results are stored by task index, so thread
// scheduling cannot reorder anything observable.

#include <cstdint>
#include <string>
#include <vector>

#include "piml/effdim.hpp"
#include "piml/regressor.hpp"

namespace piml {

struct NoiseModel {
  enum class Kind { gaussian, bounded, custom };
  Kind kind = Kind::gaussian;
  double sigma = 1.0;  // gaussian standard deviation (M^2/3 for bounded)
  double bound = 0.0;  // support half-width for bounded
  std::function<double(Rng&)> sampler;  // custom draws

  double sample(Rng& rng) const;
  static NoiseModel gaussian_model(double sigma);
  static NoiseModel bounded_model(double half_width);
};

struct Scenario {
  std::string name;  // "perfect", "imperfect", or "custom"
  TargetFn target;
  NoiseModel noise;
  double model_error = 0.0;  // ||D target||_{L2(Omega)}, fed to the schedule
  DomainSpec dom = DomainSpec::interval(1.0, 0.5);

  // Y = 1 + eps on [-1, 1]; the target is in the penalty null space.
  static Scenario perfect();
  // Y = 1 + 0.1|X| + eps; ||D target||^2 = 2/300.
  static Scenario imperfect();
};

struct ExperimentOptions {
  std::vector<std::size_t> n_grid;  // empty -> default_n_grid()
  std::size_t replicates = 10;
  std::size_t mc_eval = 500;
  std::uint64_t seed = 0;
  // false: regress log(mean_r err) on log n (the default bookkeeping);
  // true: regress mean_r log(err) instead (sensitivity variant).
  bool mean_of_logs = false;
  FitOptions fit;
};

struct ReplicateRecord {
  std::size_t n = 0;
  std::size_t replicate = 0;
  double err = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string message;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

struct ExperimentResult {
  std::string scenario;
  std::vector<std::size_t> n_grid;
  std::vector<double> err_mean;    // over successful replicates, per n
  std::vector<double> err_std;     // sample standard deviation
  std::vector<double> err_stderr;  // err_std / sqrt(#successes)
  std::vector<ReplicateRecord> records;  // (n, replicate) order
  RateFit rate;
  std::uint64_t seed = 0;
  std::size_t replicates = 0;
  std::size_t mc_eval = 0;
  std::size_t failures = 0;
  double wall_time_seconds = 0.0;  // never serialized (not reproducible)
};

// 12 points, log-spaced over [10, 10^4].
std::vector<std::size_t> default_n_grid();

ExperimentResult run_experiment(const Scenario& scenario,
                                const ExperimentOptions& opts);

// OLS of log(err) against log(n); non-positive errors are dropped and
// fewer than 3 survivors is an error.
RateFit fit_rate(const std::vector<std::size_t>& n_grid,
                 const std::vector<double>& err);

// results.csv body: columns n,replicate,err,lambda,mu,seed (failed
// replicates are excluded; their count lives in the summary).
std::string experiment_csv(const ExperimentResult& result);
std::string experiment_summary_json(const ExperimentResult& result);

}  // namespace piml
