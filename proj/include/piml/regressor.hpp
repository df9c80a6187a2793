#pragma once
// Kernel ridge fitting of the penalized empirical risk
//   (1/n) sum_i |f(X_i) - Y_i|^2 + ||f||_K^2
// where ||.||_K is the norm induced by the configured kernel.  The
// representer theorem reduces this to the dual system (G + n I) c = Y;
// see docs/dual-system.md for the two-line derivation, including where
// the factor n comes from.
//
// Two solvers:
//   dual     - exact, O(n^3), any backend;
//   low_rank - expands f in the leading N cosine modes of the diagonal
//              spectral form and solves N x N normal equations
//              (Phi^T Phi / n + S) theta = Phi^T Y / n with S the diagonal
//              penalty.  Internally the system is whitened with S^{-1/2}
//              so the factored matrix has spectrum in [1, 1 + ||Psi||^2/n].
// `auto_select` uses dual up to 3000 points and low_rank beyond, which is
// what keeps the largest convergence-study fits tractable.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "piml/kernel.hpp"
#include "piml/rng.hpp"

namespace piml {

struct Dataset {
  Eigen::MatrixXd xs;  // n x d, points as rows
  Eigen::VectorXd ys;  // n

  void validate(const DomainSpec& dom) const;
  std::size_t size() const { return std::size_t(ys.size()); }

  // CSV with header "x,y" (one spatial column).
  static Dataset from_csv(const std::string& text);
  std::string to_csv() const;
};

enum class SolverKind { auto_select, dual, low_rank };

struct FitOptions {
  SolverKind solver = SolverKind::auto_select;
  int low_rank_modes = 1024;       // N for the low-rank expansion
  std::size_t dual_cutoff = 3000;  // auto_select switches above this n
};

struct FitDiagnostics {
  double solver_residual = 0.0;     // ||A z - rhs|| of the linear system solved
  double condition_estimate = 0.0;  // 1 / rcond of the factored matrix
  std::string solver;               // "dual" or "low_rank"
};

struct KernelModel {
  KernelConfig cfg;
  Eigen::MatrixXd xs;               // training points, n x d
  Eigen::VectorXd dual_coeffs;      // c (empty for low-rank fits)
  Eigen::VectorXd spectral_coeffs;  // theta over cosine modes (low-rank fits)
  FitDiagnostics fit_diagnostics;

  // Shared so copies of a model reuse one assembled kernel.
  std::shared_ptr<const KernelEngine> engine;
};

KernelModel fit(const KernelConfig& cfg, const Dataset& data,
                const FitOptions& opts = {});

double predict(const KernelModel& model, const Eigen::VectorXd& x);
double predict(const KernelModel& model, double x);
Eigen::VectorXd predict_many(const KernelModel& model,
                             const Eigen::MatrixXd& xs);

using TargetFn = std::function<double(const Eigen::VectorXd&)>;

// Monte Carlo estimate of int |f_hat - target|^2 dP_X with P_X uniform on
// Omega.  The Rng overload consumes n_eval * d uniforms from the caller's
// stream, in point order, so experiment replicates stay reproducible.
double l2_error(const KernelModel& model, const TargetFn& target,
                const DomainSpec& dom, std::size_t n_eval, Rng& rng);
double l2_error(const KernelModel& model, const TargetFn& target,
                const DomainSpec& dom, std::size_t n_eval,
                std::uint64_t rng_seed);

// Coefficients of f_hat in the first n_modes L2(Omega)-orthonormal cosine
// modes.  Exact for low-rank fits; for dual fits uses the diagonal spectral
// form theta_m = a_m sum_i c_i v_m(X_i), which needs a configuration the
// diagonal form covers (1-D, first-order, interval domain).
Eigen::VectorXd cosine_expand(const KernelModel& model, int n_modes);

// ||D f_hat||_{L2(Omega)} from the cosine expansion (same restrictions).
double physics_seminorm(const KernelModel& model, int n_modes);

// Round-trippable model file (config + points + coefficients + diagnostics).
std::string model_to_json(const KernelModel& model);
KernelModel model_from_json(const std::string& text);

}  // namespace piml
