#include "piml/regressor.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "piml/io.hpp"
#include "piml/threads.hpp"

namespace piml {

using std::numbers::pi;
using ordered_json = nlohmann::ordered_json;

// ------------------------------------------------------------------ Dataset

void Dataset::validate(const DomainSpec& dom) const {
  if (ys.size() < 1) throw std::invalid_argument("dataset: need n >= 1");
  if (xs.rows() != ys.size())
    throw std::invalid_argument("dataset: xs/ys length mismatch");
  if (xs.cols() != dom.d)
    throw std::invalid_argument("dataset: point dimension mismatch");
  for (Eigen::Index i = 0; i < xs.rows(); ++i)
    if (!dom.omega_contains(xs.row(i).transpose()))
      throw std::invalid_argument("dataset: point " + std::to_string(i) +
                                  " outside Omega");
}

Dataset Dataset::from_csv(const std::string& text) {
  CsvTable table = parse_csv(text);
  const std::size_t cx = table.column("x");
  const std::size_t cy = table.column("y");
  Dataset data;
  data.xs.resize(Eigen::Index(table.rows.size()), 1);
  data.ys.resize(Eigen::Index(table.rows.size()));
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    data.xs(Eigen::Index(i), 0) = parse_double(table.rows[i][cx]);
    data.ys[Eigen::Index(i)] = parse_double(table.rows[i][cy]);
  }
  return data;
}

std::string Dataset::to_csv() const {
  if (xs.cols() != 1)
    throw std::invalid_argument("dataset csv: one spatial column only");
  std::string out = "x,y\n";
  for (Eigen::Index i = 0; i < ys.size(); ++i) {
    out += format_double(xs(i, 0));
    out += ',';
    out += format_double(ys[i]);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------- fitting

namespace {

// One step of iterative refinement, then enforce the residual contract.
template <class Solver>
Eigen::VectorXd solve_checked(const Solver& llt, const Eigen::MatrixXd& A,
                              const Eigen::VectorXd& rhs, double scale,
                              double* residual_out) {
  Eigen::VectorXd z = llt.solve(rhs);
  double residual = (A * z - rhs).norm();
  if (residual > 1e-8 * scale) {
    z += llt.solve(rhs - A * z);
    residual = (A * z - rhs).norm();
  }
  if (residual > 1e-8 * scale)
    throw std::runtime_error("fit: solver residual " +
                             std::to_string(residual) +
                             " exceeds 1e-8 * " + std::to_string(scale));
  *residual_out = residual;
  return z;
}

double condition_from(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  const double rc = llt.rcond();
  return rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
}

// a_m and Phi for the diagonal cosine form (1-D interval configurations).
Eigen::VectorXd diagonal_eigenvalues(const KernelConfig& cfg, int N) {
  Eigen::VectorXd a(N);
  const double c = cfg.reg.lambda + cfg.mu_effective();
  for (int m = 0; m < N; ++m) {
    const double xi = m * pi / (2.0 * cfg.dom.L);
    a[m] = 1.0 / (cfg.reg.lambda + c * xi * xi);
  }
  return a;
}

Eigen::MatrixXd cosine_design(const KernelEngine& engine,
                              const Eigen::MatrixXd& xs, int N) {
  const Eigen::Index n = xs.rows();
  Eigen::MatrixXd phi(n, N);
  parallel_for(std::size_t(n), [&](std::size_t i) {
    for (int m = 0; m < N; ++m)
      phi(Eigen::Index(i), m) = engine.cosine_basis(m, xs(Eigen::Index(i), 0));
  });
  return phi;
}

}  // namespace

KernelModel fit(const KernelConfig& cfg, const Dataset& data,
                const FitOptions& opts) {
  data.validate(cfg.dom);
  const std::size_t n = data.size();
  SolverKind solver = opts.solver;
  if (solver == SolverKind::auto_select)
    solver = n <= opts.dual_cutoff ? SolverKind::dual : SolverKind::low_rank;

  KernelModel model;
  model.cfg = cfg;
  model.xs = data.xs;
  model.engine = std::make_shared<const KernelEngine>(cfg);
  const double dn = double(n);

  if (solver == SolverKind::dual) {
    Eigen::MatrixXd G = model.engine->gram(data.xs);
    Eigen::MatrixXd A =
        G + dn * Eigen::MatrixXd::Identity(G.rows(), G.cols());
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) {
      // psd_floor either repairs roundoff negatives or throws carrying the
      // offending eigenvalue.
      A = psd_floor(G) + dn * Eigen::MatrixXd::Identity(G.rows(), G.cols());
      llt.compute(A);
      if (llt.info() != Eigen::Success)
        throw std::runtime_error("fit: Cholesky failed after PSD repair");
    }
    model.dual_coeffs = solve_checked(llt, A, data.ys, data.ys.norm(),
                                      &model.fit_diagnostics.solver_residual);
    model.fit_diagnostics.condition_estimate = condition_from(llt);
    model.fit_diagnostics.solver = "dual";
    return model;
  }

  // The low-rank expansion lives in the compressed cosine diagonalization;
  // the forced-Galerkin backend evaluates a different kernel entirely.
  if (!cfg.closed_form_compatible() || cfg.backend.force_galerkin)
    throw std::invalid_argument(
        "fit: low-rank solver needs the 1-D interval configuration with a "
        "diagonal spectral form");
  const int N = opts.low_rank_modes;
  if (N < 1) throw std::invalid_argument("fit: low_rank_modes must be >= 1");
  const Eigen::VectorXd a = diagonal_eigenvalues(cfg, N);
  const Eigen::MatrixXd phi = cosine_design(*model.engine, data.xs, N);

  if (n <= std::size_t(N)) {
    // Few points: dual solve against the truncated kernel, then lift.
    Eigen::MatrixXd GN = phi * a.asDiagonal() * phi.transpose();
    GN = 0.5 * (GN + GN.transpose());
    Eigen::MatrixXd A =
        GN + dn * Eigen::MatrixXd::Identity(GN.rows(), GN.cols());
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("fit: truncated dual Cholesky failed");
    const Eigen::VectorXd c =
        solve_checked(llt, A, data.ys, data.ys.norm(),
                      &model.fit_diagnostics.solver_residual);
    model.spectral_coeffs = a.asDiagonal() * (phi.transpose() * c);
    model.fit_diagnostics.condition_estimate = condition_from(llt);
  } else {
    // Many points: whitened N x N normal equations.
    const Eigen::VectorXd sqrt_a = a.cwiseSqrt();
    const Eigen::MatrixXd psi = phi * sqrt_a.asDiagonal();
    Eigen::MatrixXd M = psi.transpose() * psi / dn;
    M = 0.5 * (M + M.transpose());
    M.diagonal().array() += 1.0;
    const Eigen::VectorXd rhs = psi.transpose() * data.ys / dn;
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("fit: whitened normal equations not PD");
    const Eigen::VectorXd w =
        solve_checked(llt, M, rhs, std::max(rhs.norm(), 1e-300),
                      &model.fit_diagnostics.solver_residual);
    model.spectral_coeffs = sqrt_a.asDiagonal() * w;
    model.fit_diagnostics.condition_estimate = condition_from(llt);
  }
  model.fit_diagnostics.solver = "low_rank";
  return model;
}

// ------------------------------------------------------------- prediction

double predict(const KernelModel& model, const Eigen::VectorXd& x) {
  if (model.spectral_coeffs.size() > 0) {
    if (x.size() != 1)
      throw std::invalid_argument("predict: expected a 1-D point");
    double s = 0.0;
    for (Eigen::Index m = 0; m < model.spectral_coeffs.size(); ++m)
      s += model.spectral_coeffs[m] * model.engine->cosine_basis(int(m), x[0]);
    return s;
  }
  double s = 0.0;
  for (Eigen::Index i = 0; i < model.dual_coeffs.size(); ++i)
    s += model.dual_coeffs[i] *
         model.engine->eval(model.xs.row(i).transpose(), x);
  return s;
}

double predict(const KernelModel& model, double x) {
  Eigen::VectorXd v(1);
  v[0] = x;
  return predict(model, v);
}

Eigen::VectorXd predict_many(const KernelModel& model,
                             const Eigen::MatrixXd& xs) {
  Eigen::VectorXd out(xs.rows());
  parallel_for(std::size_t(xs.rows()), [&](std::size_t i) {
    out[Eigen::Index(i)] = predict(model, xs.row(Eigen::Index(i)).transpose());
  });
  return out;
}

double l2_error(const KernelModel& model, const TargetFn& target,
                const DomainSpec& dom, std::size_t n_eval, Rng& rng) {
  if (n_eval < 1) throw std::invalid_argument("l2_error: n_eval >= 1");
  Eigen::MatrixXd pts(Eigen::Index(n_eval), dom.d);
  for (std::size_t j = 0; j < n_eval; ++j)
    for (int k = 0; k < dom.d; ++k)
      pts(Eigen::Index(j), k) =
          rng.uniform(dom.omega_lo[std::size_t(k)],
                      dom.omega_hi[std::size_t(k)]);
  const Eigen::VectorXd pred = predict_many(model, pts);
  double acc = 0.0;
  for (std::size_t j = 0; j < n_eval; ++j) {
    const double diff =
        pred[Eigen::Index(j)] - target(pts.row(Eigen::Index(j)).transpose());
    acc += diff * diff;
  }
  return acc / double(n_eval);
}

double l2_error(const KernelModel& model, const TargetFn& target,
                const DomainSpec& dom, std::size_t n_eval,
                std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  return l2_error(model, target, dom, n_eval, rng);
}

// ---------------------------------------------------- spectral accounting

Eigen::VectorXd cosine_expand(const KernelModel& model, int n_modes) {
  if (n_modes < 1)
    throw std::invalid_argument("cosine_expand: n_modes >= 1");
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(n_modes);
  if (model.spectral_coeffs.size() > 0) {
    const Eigen::Index keep =
        std::min<Eigen::Index>(n_modes, model.spectral_coeffs.size());
    theta.head(keep) = model.spectral_coeffs.head(keep);
    return theta;
  }
  if (!model.cfg.closed_form_compatible())
    throw std::invalid_argument(
        "cosine_expand: needs the 1-D interval configuration");
  const Eigen::VectorXd a = diagonal_eigenvalues(model.cfg, n_modes);
  for (int m = 0; m < n_modes; ++m) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < model.dual_coeffs.size(); ++i)
      s += model.dual_coeffs[i] *
           model.engine->cosine_basis(m, model.xs(i, 0));
    theta[m] = a[m] * s;
  }
  return theta;
}

double physics_seminorm(const KernelModel& model, int n_modes) {
  const Eigen::VectorXd theta = cosine_expand(model, n_modes);
  const double coeff =
      model.cfg.op.terms().at(0).coeff.constant_value();
  double acc = 0.0;
  for (int m = 0; m < n_modes; ++m) {
    const double xi = m * pi / (2.0 * model.cfg.dom.L);
    acc += theta[m] * theta[m] * xi * xi;
  }
  return std::abs(coeff) * std::sqrt(acc);
}

// --------------------------------------------------------- serialization

namespace {

void require_standard(const KernelConfig& cfg, const char* what) {
  const double kappa = 1.0 / (2.0 * cfg.dom.L);
  if (!cfg.closed_form_compatible() ||
      cfg.op.terms().at(0).coeff.constant_value() != 1.0 ||
      cfg.dom.kappa != kappa)
    throw std::invalid_argument(
        std::string(what) +
        ": only the standard 1-D interval configuration is supported");
}

}  // namespace

std::string model_to_json(const KernelModel& model) {
  require_standard(model.cfg, "model_to_json");
  ordered_json j;
  j["schema"] = "piml-model-v1";
  j["config"]["L"] = model.cfg.dom.L;
  j["config"]["lambda"] = model.cfg.reg.lambda;
  j["config"]["mu"] = model.cfg.reg.mu;
  j["config"]["backend"]["kind"] =
      model.cfg.backend.kind == KernelBackend::Kind::closed_form_1d
          ? "closed_form_1d"
          : "spectral";
  j["config"]["backend"]["n_max"] = model.cfg.backend.n_max;
  j["config"]["backend"]["force_galerkin"] = model.cfg.backend.force_galerkin;
  j["solver"] = model.fit_diagnostics.solver;
  auto dump_vec = [](const auto& v) {
    ordered_json arr = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
  };
  j["xs"] = dump_vec(model.xs.col(0));
  j["dual_coeffs"] = dump_vec(model.dual_coeffs);
  j["spectral_coeffs"] = dump_vec(model.spectral_coeffs);
  j["diagnostics"]["solver_residual"] =
      model.fit_diagnostics.solver_residual;
  j["diagnostics"]["condition_estimate"] =
      model.fit_diagnostics.condition_estimate;
  return j.dump(2) + "\n";
}

KernelModel model_from_json(const std::string& text) {
  const auto j = ordered_json::parse(text);
  if (j.value("schema", "") != "piml-model-v1")
    throw std::invalid_argument("model_from_json: unknown schema");
  KernelBackend backend;
  const auto& jb = j.at("config").at("backend");
  const std::string kind = jb.at("kind").get<std::string>();
  if (kind == "closed_form_1d") {
    backend = KernelBackend::closed_form();
  } else if (kind == "spectral") {
    backend = KernelBackend::spectral(jb.at("n_max").get<int>(),
                                      jb.at("force_galerkin").get<bool>());
  } else {
    throw std::invalid_argument("model_from_json: unknown backend kind");
  }
  KernelModel model;
  model.cfg = KernelConfig::standard_1d(
      j.at("config").at("L").get<double>(),
      j.at("config").at("lambda").get<double>(),
      j.at("config").at("mu").get<double>(), backend);
  auto load_vec = [](const ordered_json& arr) {
    Eigen::VectorXd v(Eigen::Index(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i)
      v[Eigen::Index(i)] = arr[i].get<double>();
    return v;
  };
  const Eigen::VectorXd xs = load_vec(j.at("xs"));
  model.xs.resize(xs.size(), 1);
  model.xs.col(0) = xs;
  model.dual_coeffs = load_vec(j.at("dual_coeffs"));
  model.spectral_coeffs = load_vec(j.at("spectral_coeffs"));
  model.fit_diagnostics.solver = j.at("solver").get<std::string>();
  model.fit_diagnostics.solver_residual =
      j.at("diagnostics").at("solver_residual").get<double>();
  model.fit_diagnostics.condition_estimate =
      j.at("diagnostics").at("condition_estimate").get<double>();
  model.engine = std::make_shared<const KernelEngine>(model.cfg);
  return model;
}

}  // namespace piml
