// piml - command-line front end.
//
// Subcommands: kernel, spectrum, effdim, fit, predict, experiment.
// Exit codes: 0 success, 2 validation error (bad flag/parameter), 1 runtime
// failure.  All file outputs are written atomically; identical seeds give
// byte-identical files.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "piml/effdim.hpp"
#include "piml/experiment.hpp"
#include "piml/io.hpp"
#include "piml/kernel.hpp"
#include "piml/quantization.hpp"
#include "piml/regressor.hpp"
#include "piml/threads.hpp"

namespace {

using namespace piml;

struct BackendFlags {
  std::string kind = "closed";
  int n_max = 512;
  bool force_galerkin = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--backend", kind,
                    "kernel backend: closed (exact 1-D form) or spectral")
        ->check(CLI::IsMember({"closed", "spectral"}))
        ->capture_default_str();
    cmd->add_option("--n-max", n_max,
                    "spectral backend: number of retained modes")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_flag("--force-galerkin", force_galerkin,
                  "spectral backend: periodic-box Galerkin route even when "
                  "the diagonal form applies");
  }

  KernelBackend resolve() const {
    if (kind == "closed") {
      if (force_galerkin)
        throw std::invalid_argument(
            "--force-galerkin requires --backend spectral");
      return KernelBackend::closed_form();
    }
    return KernelBackend::spectral(n_max, force_galerkin);
  }
};

void apply_threads(int threads) {
  if (threads > 0) set_thread_limit(std::size_t(threads));
}

Spectrum head_of(Spectrum spec, std::size_t count) {
  if (spec.eigenvalues.size() > count) {
    spec.eigenvalues.resize(count);
    spec.provenance.resize(count);
  }
  return spec;
}

// --------------------------------------------------------------- handlers

struct KernelCmd {
  double L = 1.0, lambda = 1.0, mu = 1.0;
  double x = 0.0, y = 0.0;
  bool have_x = false, have_y = false;
  int grid = 101;
  std::string out;
  BackendFlags backend;
  int threads = 0;

  int run() const {
    apply_threads(threads);
    const KernelConfig cfg =
        KernelConfig::standard_1d(L, lambda, mu, backend.resolve());
    KernelEngine engine(cfg);
    if (out.empty()) {
      if (!have_x || !have_y)
        throw std::invalid_argument(
            "kernel: give --x and --y for a point value, or --out for a grid");
      std::cout << format_double(engine.eval(x, y)) << "\n";
      return 0;
    }
    if (grid < 2) throw std::invalid_argument("kernel: --grid must be >= 2");
    std::string csv = "x,y,K\n";
    for (int i = 0; i < grid; ++i) {
      const double xi = -L + 2.0 * L * double(i) / double(grid - 1);
      for (int j = 0; j < grid; ++j) {
        const double yj = -L + 2.0 * L * double(j) / double(grid - 1);
        csv += format_double(xi);
        csv += ',';
        csv += format_double(yj);
        csv += ',';
        csv += format_double(engine.eval(xi, yj));
        csv += '\n';
      }
    }
    atomic_write_file(out, csv);
    return 0;
  }
};

struct SpectrumCmd {
  double L = 1.0, lambda = 1.0, mu = 1.0;
  std::size_t count = 10;
  std::string method = "exact";
  int n_max = 257;
  std::string out;
  int threads = 0;

  int run() const {
    apply_threads(threads);
    RegularizationParams reg{lambda, mu};
    reg.validate();
    Spectrum spec;
    if (method == "exact") {
      spec = head_of(exact_spectrum_1d(reg, L, std::max<std::size_t>(count, 6)),
                     count);
    } else {
      const auto sys = assemble_galerkin(MultiIndexOperator::first_derivative(),
                                         reg, DomainSpec::interval(L), n_max);
      spec = head_of(truncated_spectrum_compressed(sys), count);
    }
    const std::string csv = spectrum_to_csv(spec);
    if (out.empty())
      std::cout << csv;
    else
      atomic_write_file(out, csv);
    return 0;
  }
};

struct EffdimCmd {
  std::string spectrum_path;
  double kappa = 0.5;
  std::string out;
  int threads = 0;

  int run() const {
    apply_threads(threads);
    const Spectrum spec = spectrum_from_csv(read_file(spectrum_path));
    const EffDimReport report = effective_dimension(spec, kappa);
    std::string json = "{\n  \"value\": " + format_double(report.value) +
                       ",\n  \"kappa\": " + format_double(report.kappa) +
                       ",\n  \"truncation_tail_bound\": " +
                       format_double(report.truncation_tail_bound) + "\n}\n";
    if (out.empty())
      std::cout << json;
    else
      atomic_write_file(out, json);
    return 0;
  }
};

struct FitCmd {
  std::string data_path;
  double L = 1.0, lambda = 1.0, mu = 1.0;
  std::string solver = "auto";
  int low_rank_modes = 1024;
  std::string out = "model.json";
  BackendFlags backend;
  int threads = 0;

  int run() const {
    apply_threads(threads);
    const KernelConfig cfg =
        KernelConfig::standard_1d(L, lambda, mu, backend.resolve());
    const Dataset data = Dataset::from_csv(read_file(data_path));
    FitOptions opts;
    if (solver == "dual")
      opts.solver = SolverKind::dual;
    else if (solver == "low-rank")
      opts.solver = SolverKind::low_rank;
    opts.low_rank_modes = low_rank_modes;
    const KernelModel model = fit(cfg, data, opts);
    atomic_write_file(out, model_to_json(model));
    std::cerr << "fit: n=" << data.size() << " solver="
              << model.fit_diagnostics.solver << " residual="
              << format_double(model.fit_diagnostics.solver_residual)
              << " condition="
              << format_double(model.fit_diagnostics.condition_estimate)
              << "\n";
    return 0;
  }
};

struct PredictCmd {
  std::string model_path;
  double x = 0.0;
  bool have_x = false;
  int grid = 101;
  std::string out;
  int threads = 0;

  int run() const {
    apply_threads(threads);
    const KernelModel model = model_from_json(read_file(model_path));
    if (out.empty()) {
      if (!have_x)
        throw std::invalid_argument(
            "predict: give --x for a point value, or --out for a grid");
      std::cout << format_double(predict(model, x)) << "\n";
      return 0;
    }
    if (grid < 2) throw std::invalid_argument("predict: --grid must be >= 2");
    const double L = model.cfg.dom.L;
    std::string csv = "x,prediction\n";
    for (int i = 0; i < grid; ++i) {
      const double xi = -L + 2.0 * L * double(i) / double(grid - 1);
      csv += format_double(xi);
      csv += ',';
      csv += format_double(predict(model, xi));
      csv += '\n';
    }
    atomic_write_file(out, csv);
    return 0;
  }
};

struct ExperimentCmd {
  std::string scenario = "perfect";
  std::uint64_t seed = 0;
  std::size_t replicates = 10;
  std::size_t mc_eval = 500;
  std::vector<std::size_t> n_grid;
  bool mean_of_logs = false;
  int low_rank_modes = 1024;
  std::string out = "results.csv";
  std::string summary;
  int threads = 0;

  int run() const {
    apply_threads(threads);
    Scenario sc;
    if (scenario == "perfect")
      sc = Scenario::perfect();
    else if (scenario == "imperfect")
      sc = Scenario::imperfect();
    else
      throw std::invalid_argument(
          "experiment: --scenario must be perfect or imperfect");
    ExperimentOptions opts;
    opts.n_grid = n_grid;
    opts.replicates = replicates;
    opts.mc_eval = mc_eval;
    opts.seed = seed;
    opts.mean_of_logs = mean_of_logs;
    opts.fit.low_rank_modes = low_rank_modes;
    const ExperimentResult result = run_experiment(sc, opts);
    atomic_write_file(out, experiment_csv(result));
    const std::string json = experiment_summary_json(result);
    if (summary.empty())
      std::cout << json;
    else
      atomic_write_file(summary, json);
    std::cerr << "experiment: slope=" << format_double(result.rate.slope)
              << " failures=" << result.failures << " wall_time="
              << format_double(result.wall_time_seconds) << "s\n";
    return 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "piml - kernel regression with differential-operator penalties"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "key=value config file with [subcommand] sections; "
                 "precedence: flags > config file > defaults");
  app.footer(
      "Environment: PIML_THREADS caps the worker pool when --threads is "
      "not given.");

  KernelCmd kc;
  auto* kernel_cmd = app.add_subcommand(
      "kernel", "Evaluate the kernel at a point or emit an (x,y,K) grid");
  kernel_cmd->add_option("--L", kc.L, "half-width of Omega = [-L, L]")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  kernel_cmd->add_option("--lambda", kc.lambda, "Sobolev penalty weight (> 0)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  kernel_cmd
      ->add_option("--mu", kc.mu, "physics penalty weight (>= 0)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  kernel_cmd->add_option("--x", kc.x, "first argument, in [-L, L]")
      ->each([&kc](const std::string&) { kc.have_x = true; });
  kernel_cmd->add_option("--y", kc.y, "second argument, in [-L, L]")
      ->each([&kc](const std::string&) { kc.have_y = true; });
  kernel_cmd
      ->add_option("--grid", kc.grid,
                   "points per axis for the --out grid (default 101)")
      ->capture_default_str();
  kernel_cmd->add_option("--out", kc.out, "write x,y,K CSV here");
  kc.backend.attach(kernel_cmd);
  kernel_cmd->add_option("--threads", kc.threads, "worker thread cap");

  SpectrumCmd sc;
  auto* spectrum_cmd = app.add_subcommand(
      "spectrum", "Operator eigenvalues a_m as CSV (m,a_m,provenance)");
  spectrum_cmd->add_option("--L", sc.L, "half-width of Omega")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  spectrum_cmd->add_option("--lambda", sc.lambda, "Sobolev penalty weight")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  spectrum_cmd->add_option("--mu", sc.mu, "physics penalty weight")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  spectrum_cmd->add_option("--count", sc.count, "number of eigenvalues")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  spectrum_cmd
      ->add_option("--method", sc.method,
                   "exact (transcendental roots) or galerkin "
                   "(Omega-compressed discretization)")
      ->check(CLI::IsMember({"exact", "galerkin"}))
      ->capture_default_str();
  spectrum_cmd
      ->add_option("--n-max", sc.n_max, "galerkin method: retained modes")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  spectrum_cmd->add_option("--out", sc.out,
                           "output CSV path (default: stdout)");
  spectrum_cmd->add_option("--threads", sc.threads, "worker thread cap");

  EffdimCmd ec;
  auto* effdim_cmd = app.add_subcommand(
      "effdim", "Effective dimension of a spectrum CSV, as JSON");
  effdim_cmd
      ->add_option("--spectrum", ec.spectrum_path, "spectrum CSV to read")
      ->required();
  effdim_cmd->add_option("--kappa", ec.kappa, "design density bound (> 0)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  effdim_cmd->add_option("--out", ec.out, "output path (default: stdout)");
  effdim_cmd->add_option("--threads", ec.threads, "worker thread cap");

  FitCmd fc;
  auto* fit_cmd =
      app.add_subcommand("fit", "Fit the penalized regressor to x,y data");
  fit_cmd->add_option("--data", fc.data_path, "training CSV with columns x,y")
      ->required();
  fit_cmd->add_option("--L", fc.L, "half-width of Omega")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fit_cmd->add_option("--lambda", fc.lambda, "Sobolev penalty weight (> 0)")
      ->capture_default_str();
  fit_cmd->add_option("--mu", fc.mu, "physics penalty weight (>= 0)")
      ->capture_default_str();
  fit_cmd
      ->add_option("--solver", fc.solver,
                   "auto (dual to n=3000, low-rank above), dual, or low-rank")
      ->check(CLI::IsMember({"auto", "dual", "low-rank"}))
      ->capture_default_str();
  fit_cmd
      ->add_option("--low-rank-modes", fc.low_rank_modes,
                   "basis size for the low-rank solver")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fit_cmd->add_option("--out", fc.out, "model JSON path")
      ->capture_default_str();
  fc.backend.attach(fit_cmd);
  fit_cmd->add_option("--threads", fc.threads, "worker thread cap");

  PredictCmd pc;
  auto* predict_cmd = app.add_subcommand(
      "predict", "Evaluate a fitted model at a point or over a grid");
  predict_cmd->add_option("--model", pc.model_path, "model JSON from fit")
      ->required();
  predict_cmd->add_option("--x", pc.x, "evaluation point")
      ->each([&pc](const std::string&) { pc.have_x = true; });
  predict_cmd
      ->add_option("--grid", pc.grid,
                   "points across [-L, L] for the --out grid")
      ->capture_default_str();
  predict_cmd->add_option("--out", pc.out, "write x,prediction CSV here");
  predict_cmd->add_option("--threads", pc.threads, "worker thread cap");

  ExperimentCmd xc;
  auto* experiment_cmd = app.add_subcommand(
      "experiment", "Convergence-rate study with Monte Carlo error curves");
  experiment_cmd
      ->add_option("--scenario", xc.scenario, "perfect or imperfect")
      ->check(CLI::IsMember({"perfect", "imperfect"}))
      ->capture_default_str();
  experiment_cmd->add_option("--seed", xc.seed, "root seed")
      ->capture_default_str();
  experiment_cmd
      ->add_option("--replicates", xc.replicates, "datasets per sample size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  experiment_cmd
      ->add_option("--mc-eval", xc.mc_eval,
                   "Monte Carlo points per error estimate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  experiment_cmd
      ->add_option("--n-grid", xc.n_grid,
                   "comma-separated sample sizes (default: 12 log-spaced "
                   "in [10, 10000])")
      ->delimiter(',');
  experiment_cmd->add_flag(
      "--mean-of-logs", xc.mean_of_logs,
      "regress the mean of log errors instead of the log of mean errors");
  experiment_cmd
      ->add_option("--low-rank-modes", xc.low_rank_modes,
                   "basis size for fits above the dual cutoff")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  experiment_cmd->add_option("--out", xc.out, "replicate CSV path")
      ->capture_default_str();
  experiment_cmd->add_option("--summary", xc.summary,
                             "summary JSON path (default: stdout)");
  experiment_cmd->add_option("--threads", xc.threads, "worker thread cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*kernel_cmd) return kc.run();
    if (*spectrum_cmd) return sc.run();
    if (*effdim_cmd) return ec.run();
    if (*fit_cmd) return fc.run();
    if (*predict_cmd) return pc.run();
    if (*experiment_cmd) return xc.run();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
