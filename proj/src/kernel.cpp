#include "piml/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "piml/quadrature.hpp"
#include "piml/threads.hpp"

namespace piml {

using std::numbers::pi;
using cd = std::complex<double>;

// ------------------------------------------------------------ KernelConfig

bool KernelConfig::closed_form_compatible() const {
  if (dom.d != 1 || op.dimension() != 1 || op.order() != 1) return false;
  if (dom.omega_lo[0] != -dom.L || dom.omega_hi[0] != dom.L) return false;
  if (op.terms().size() != 1) return false;
  const OperatorTerm& t = op.terms()[0];
  return t.alpha == std::vector<int>{1} && t.coeff.is_constant();
}

double KernelConfig::mu_effective() const {
  if (!closed_form_compatible()) return reg.mu;
  const double c = op.terms()[0].coeff.constant_value();
  return reg.mu * c * c;
}

double KernelConfig::gamma() const {
  return std::sqrt(reg.lambda / (reg.lambda + mu_effective()));
}

KernelConfig KernelConfig::standard_1d(double L, double lambda, double mu,
                                       KernelBackend backend) {
  KernelConfig cfg;
  cfg.op = MultiIndexOperator::first_derivative();
  cfg.reg = {lambda, mu};
  cfg.reg.validate();
  cfg.dom = DomainSpec::interval(L, 1.0 / (2.0 * L));
  cfg.backend = backend;
  return cfg;
}

// ------------------------------------------------------------ engine state

struct KernelEngine::State {
  enum class Route { closed, cosine, galerkin };
  Route route = Route::closed;

  // closed + cosine
  double gamma = 1.0;
  double mu_eff = 0.0;

  // cosine route: a_m = 1/(lambda + c xi_m^2), xi_m = m pi / 2L
  std::vector<double> cosine_a;

  // galerkin route
  std::optional<GalerkinSystem> sys;
  std::optional<RealGalerkin> red;
  std::optional<Eigen::LLT<Eigen::MatrixXd>> llt;
};

KernelEngine::~KernelEngine() = default;
KernelEngine::KernelEngine(KernelEngine&&) noexcept = default;
KernelEngine& KernelEngine::operator=(KernelEngine&&) noexcept = default;

KernelEngine::KernelEngine(KernelConfig cfg)
    : cfg_(std::move(cfg)), state_(std::make_unique<State>()) {
  cfg_.reg.validate();
  cfg_.dom.validate();
  state_->gamma = cfg_.gamma();
  state_->mu_eff = cfg_.mu_effective();

  const bool compatible = cfg_.closed_form_compatible();
  if (cfg_.backend.kind == KernelBackend::Kind::closed_form_1d) {
    if (!compatible)
      throw std::invalid_argument(
          "kernel: closed_form_1d needs d=1, s=1, D=c*d/dx, Omega=[-L,L]");
    state_->route = State::Route::closed;
    return;
  }
  if (cfg_.backend.n_max < 1)
    throw std::invalid_argument("kernel: spectral n_max must be >= 1");
  if (compatible && !cfg_.backend.force_galerkin) {
    state_->route = State::Route::cosine;
    const double c = cfg_.reg.lambda + state_->mu_eff;
    state_->cosine_a.resize(std::size_t(cfg_.backend.n_max));
    for (int m = 0; m < cfg_.backend.n_max; ++m) {
      const double xi = m * pi / (2.0 * cfg_.dom.L);
      state_->cosine_a[std::size_t(m)] =
          1.0 / (cfg_.reg.lambda + c * xi * xi);
    }
    return;
  }
  state_->route = State::Route::galerkin;
  state_->sys =
      assemble_galerkin(cfg_.op, cfg_.reg, cfg_.dom, cfg_.backend.n_max);
  state_->red = real_reduction(*state_->sys);
  state_->llt.emplace(state_->red->b);
  if (state_->llt->info() != Eigen::Success)
    throw std::runtime_error("kernel: Galerkin B matrix not positive definite");
}

// --------------------------------------------------------- closed form 1D

namespace {

// Hyperbolic closed form, written exactly as stated: prefactor
// gamma / (2 lambda sinh(2 gamma L)) times
//   (cosh(2gL) + cosh(2gx)) cosh(g(x-y))
// + ((1 - 2*[x>y]) sinh(2gL) - sinh(2gx)) sinh(g(x-y)).
double closed_form_direct(double g, double lambda, double L, double x,
                          double y) {
  const double S = x > y ? -1.0 : 1.0;
  const double d = x - y;
  return g / (2.0 * lambda * std::sinh(2.0 * g * L)) *
         ((std::cosh(2.0 * g * L) + std::cosh(2.0 * g * x)) *
              std::cosh(g * d) +
          (S * std::sinh(2.0 * g * L) - std::sinh(2.0 * g * x)) *
              std::sinh(g * d));
}

// Same function in overflow-safe form (all exponents <= 0):
//   (g/2lambda) [ e^{-g|d|}
//                 + (e^{g|d|-4gL} + e^{-g|d|-4gL}
//                    + e^{g s-2gL} + e^{-g s-2gL}) / (1 - e^{-4gL}) ]
// with d = x - y, s = x + y.  Algebraically identical to the direct form.
double closed_form_stable(double g, double lambda, double L, double x,
                          double y) {
  const double ad = std::abs(x - y);
  const double s = x + y;
  const double denom = -std::expm1(-4.0 * g * L);
  const double bracket =
      std::exp(-g * ad) +
      (std::exp(g * ad - 4.0 * g * L) + std::exp(-g * ad - 4.0 * g * L) +
       std::exp(g * s - 2.0 * g * L) + std::exp(-g * s - 2.0 * g * L)) /
          denom;
  return g / (2.0 * lambda) * bracket;
}

// d/dy of the closed form, from the symmetric representation
// (g/2lambda)[coth(2gL) cosh(gd) + S sinh(gd) + cosh(gs)/sinh(2gL)].
double closed_form_dy(double g, double lambda, double L, double x, double y) {
  const double S = x > y ? -1.0 : 1.0;
  const double d = x - y;
  const double s = x + y;
  if (g * L <= 30.0) {
    return g * g / (2.0 * lambda) *
           (-std::cosh(2.0 * g * L) / std::sinh(2.0 * g * L) *
                std::sinh(g * d) -
            S * std::cosh(g * d) + std::sinh(g * s) / std::sinh(2.0 * g * L));
  }
  const double ad = std::abs(d);
  const double denom = -std::expm1(-4.0 * g * L);
  // d|d|/dy = S; d s/dy = 1.
  const double t1 = -S * std::exp(-g * ad);
  const double t2 = (S * (std::exp(g * ad - 4.0 * g * L) -
                          std::exp(-g * ad - 4.0 * g * L)) +
                     std::exp(g * s - 2.0 * g * L) -
                     std::exp(-g * s - 2.0 * g * L)) /
                    denom;
  return g * g / (2.0 * lambda) * (t1 + t2);
}

// sum_{m>=1} cos(m t)/m^2 for t in [0, 2 pi].
double clausen2(double t) {
  return pi * pi / 6.0 - pi * t / 2.0 + t * t / 4.0;
}

double fold_0_2pi(double t) {
  t = std::fabs(t);
  while (t > 2.0 * pi) t -= 2.0 * pi;
  return t;
}

}  // namespace

// ------------------------------------------------------------- evaluation

double KernelEngine::eval(double x, double y) const {
  const double L = cfg_.dom.L;
  const double lambda = cfg_.reg.lambda;
  const double g = state_->gamma;
  switch (state_->route) {
    case State::Route::closed:
    case State::Route::cosine: {
      if (std::abs(x) > L || std::abs(y) > L)
        throw std::invalid_argument(
            "kernel: point outside Omega = [-L, L] for this backend");
      if (state_->route == State::Route::closed) {
        return g * L > 30.0 ? closed_form_stable(g, lambda, L, x, y)
                            : closed_form_direct(g, lambda, L, x, y);
      }
      // Cosine eigen-sum, completed with the analytic 1/m^2 envelope tail.
      const int N = int(state_->cosine_a.size());
      const double c = lambda + state_->mu_eff;
      const double alpha = pi * (x + L) / (2.0 * L);
      const double beta = pi * (y + L) / (2.0 * L);
      const double t1 = alpha - beta, t2 = alpha + beta;
      double sum = state_->cosine_a[0] / (2.0 * L);
      double s1 = 0.0, s2 = 0.0;  // partial sums of cos(m t)/m^2
      const double c1 = std::cos(t1), c2 = std::cos(t2);
      double c1m = c1, c1p = 1.0, c2m = c2, c2p = 1.0;
      for (int m = 1; m < N; ++m) {
        sum += state_->cosine_a[std::size_t(m)] * (c1m + c2m) / (2.0 * L);
        s1 += c1m / double(m) / double(m);
        s2 += c2m / double(m) / double(m);
        const double n1 = 2.0 * c1 * c1m - c1p;
        c1p = c1m;
        c1m = n1;
        const double n2 = 2.0 * c2 * c2m - c2p;
        c2p = c2m;
        c2m = n2;
      }
      const double tail = 2.0 * L / (c * pi * pi) *
                          ((clausen2(fold_0_2pi(t1)) - s1) +
                           (clausen2(fold_0_2pi(t2)) - s2));
      return sum + tail;
    }
    case State::Route::galerkin: {
      Eigen::VectorXd vx(1), vy(1);
      vx[0] = x;
      vy[0] = y;
      return eval(vx, vy);
    }
  }
  throw std::logic_error("kernel: unreachable");
}

double KernelEngine::eval(const Eigen::VectorXd& x,
                          const Eigen::VectorXd& y) const {
  if (state_->route != State::Route::galerkin) {
    if (x.size() != 1 || y.size() != 1)
      throw std::invalid_argument("kernel: expected one-dimensional points");
    return eval(x[0], y[0]);
  }
  const double box = 2.0 * cfg_.dom.L;
  for (const auto* p : {&x, &y}) {
    if (p->size() != cfg_.dom.d)
      throw std::invalid_argument("kernel: point dimension mismatch");
    for (Eigen::Index j = 0; j < p->size(); ++j)
      if (std::abs((*p)[j]) > box)
        throw std::invalid_argument("kernel: point outside the periodic box");
  }
  const Eigen::VectorXd rx = state_->red->basis_eval(x, cfg_.dom.L);
  const Eigen::VectorXd ry = state_->red->basis_eval(y, cfg_.dom.L);
  return rx.dot(state_->llt->solve(ry));
}

Eigen::MatrixXd KernelEngine::gram(const Eigen::MatrixXd& xs) const {
  const Eigen::Index n = xs.rows();
  Eigen::MatrixXd G(n, n);
  if (state_->route == State::Route::galerkin) {
    // One basis evaluation and one triangular solve per point, then a
    // single symmetric product.
    const Eigen::Index nb = Eigen::Index(state_->red->modes.size());
    Eigen::MatrixXd P(nb, n);
    for (Eigen::Index i = 0; i < n; ++i)
      P.col(i) = state_->red->basis_eval(xs.row(i).transpose(), cfg_.dom.L);
    Eigen::MatrixXd U = state_->llt->solve(P);
    G.noalias() = P.transpose() * U;
    return 0.5 * (G + G.transpose());
  }
  parallel_for(std::size_t(n), [&](std::size_t i) {
    const double xi = xs(Eigen::Index(i), 0);
    for (Eigen::Index j = 0; j <= Eigen::Index(i); ++j)
      G(Eigen::Index(i), j) = eval(xi, xs(j, 0));
  });
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) G(i, j) = G(j, i);
  return G;
}

// ------------------------------------------------- spectral introspection

bool KernelEngine::cosine_diagonal() const {
  return state_->route == State::Route::cosine;
}

int KernelEngine::cosine_mode_count() const {
  return int(state_->cosine_a.size());
}

double KernelEngine::cosine_eigenvalue(int m) const {
  return state_->cosine_a.at(std::size_t(m));
}

double KernelEngine::cosine_basis(int m, double x) const {
  const double L = cfg_.dom.L;
  if (m == 0) return 1.0 / std::sqrt(2.0 * L);
  return std::cos(m * pi * (x + L) / (2.0 * L)) / std::sqrt(L);
}

double KernelEngine::cosine_basis_deriv(int m, double x) const {
  const double L = cfg_.dom.L;
  if (m == 0) return 0.0;
  const double xi = m * pi / (2.0 * L);
  return -xi * std::sin(m * pi * (x + L) / (2.0 * L)) / std::sqrt(L);
}

const GalerkinSystem* KernelEngine::galerkin_system() const {
  return state_->sys ? &*state_->sys : nullptr;
}

// ------------------------------------------------------ weak-form residual

namespace {

// Subdivide [a, b] so that an oscillation budget of `freq` rad/length gets
// at least ~6 quadrature points per period with 40-point panels.
void subdivide(std::vector<double>& out, double a, double b, double freq) {
  const double periods = freq * (b - a) / (2.0 * pi);
  const int pieces = std::max(1, int(std::ceil(periods * 6.0 / 40.0)));
  for (int i = 1; i <= pieces; ++i)
    out.push_back(a + (b - a) * double(i) / double(pieces));
}

std::vector<double> panels_for(double lo, double hi,
                               std::vector<double> kinks, double freq) {
  std::vector<double> cuts;
  cuts.push_back(lo);
  std::sort(kinks.begin(), kinks.end());
  double prev = lo;
  for (double k : kinks) {
    if (k <= prev || k >= hi) continue;
    subdivide(cuts, prev, k, freq);
    prev = k;
  }
  subdivide(cuts, prev, hi, freq);
  return cuts;
}

}  // namespace

double KernelEngine::weak_form_residual(const Eigen::VectorXd& x,
                                        int test_order) const {
  if (cfg_.dom.d != 1)
    throw std::invalid_argument("weak_form_residual: implemented for d=1");
  if (test_order < 0)
    throw std::invalid_argument("weak_form_residual: test_order >= 0");
  const double L = cfg_.dom.L;
  const double lambda = cfg_.reg.lambda;
  const double x0 = x[0];

  // Pointwise kernel/derivative evaluators for the representation whose
  // defect we are measuring (plain truncated sums for spectral routes).
  std::function<double(double)> Kv, Kd;
  double kernel_freq = 0.0;
  std::vector<cd> mode_coef;        // galerkin route: K(x,.) over sys.freqs
  const std::vector<Frequency>* freqs = nullptr;
  switch (state_->route) {
    case State::Route::closed: {
      const double g = state_->gamma;
      Kv = [=, this](double y) {
        return g * L > 30.0 ? closed_form_stable(g, lambda, L, x0, y)
                            : closed_form_direct(g, lambda, L, x0, y);
      };
      Kd = [=](double y) { return closed_form_dy(g, lambda, L, x0, y); };
      break;
    }
    case State::Route::cosine: {
      const int N = int(state_->cosine_a.size());
      kernel_freq = (N - 1) * pi / (2.0 * L);
      Kv = [this, N, x0](double y) {
        double s = 0.0;
        for (int m = 0; m < N; ++m)
          s += state_->cosine_a[std::size_t(m)] * cosine_basis(m, x0) *
               cosine_basis(m, y);
        return s;
      };
      Kd = [this, N, x0](double y) {
        double s = 0.0;
        for (int m = 1; m < N; ++m)
          s += state_->cosine_a[std::size_t(m)] * cosine_basis(m, x0) *
               cosine_basis_deriv(m, y);
        return s;
      };
      break;
    }
    case State::Route::galerkin: {
      // Complex mode expansion of K(x, .): coefficients from the real
      // solve c_real = B^-1 r(x), carried back to complex modes.
      const RealGalerkin& red = *state_->red;
      const GalerkinSystem& sys = *state_->sys;
      freqs = &sys.freqs;
      Eigen::VectorXd rx = red.basis_eval(x, L);
      Eigen::VectorXd u = state_->llt->solve(rx);
      std::map<Frequency, int> index;
      for (int j = 0; j < sys.mode_count(); ++j)
        index[sys.freqs[std::size_t(j)]] = j;
      mode_coef.assign(sys.freqs.size(), cd(0.0, 0.0));
      const double vol = cfg_.dom.box_volume();
      const double inv_sqrt_vol = 1.0 / std::sqrt(vol);
      const double r = 1.0 / std::sqrt(2.0 * vol);
      for (std::size_t q = 0; q < red.modes.size(); ++q) {
        const RealMode& mq = red.modes[q];
        if (mq.kind == RealMode::Kind::constant) {
          mode_coef[std::size_t(index.at(mq.freq))] +=
              u[Eigen::Index(q)] * inv_sqrt_vol;
          continue;
        }
        const int jk = index.at(mq.freq);
        const int jn = index.at(negate(mq.freq));
        if (mq.kind == RealMode::Kind::cosine) {
          mode_coef[std::size_t(jk)] += u[Eigen::Index(q)] * r;
          mode_coef[std::size_t(jn)] += u[Eigen::Index(q)] * r;
        } else {
          mode_coef[std::size_t(jk)] += u[Eigen::Index(q)] * cd(0.0, -r);
          mode_coef[std::size_t(jn)] += u[Eigen::Index(q)] * cd(0.0, r);
        }
      }
      int kmax = 0;
      for (const auto& k : sys.freqs) kmax = std::max(kmax, norm1(k));
      kernel_freq = kmax * pi / (2.0 * L);
      break;
    }
  }

  const int s = cfg_.op.order();
  const auto alphas = multi_indices_up_to(1, s);
  double worst = 0.0;
  Eigen::VectorXd pt(1);
  for (int j = 0; j <= test_order; ++j) {
    const Frequency kj = index_map(std::size_t(j), 1);
    const double test_freq = std::abs(kj[0]) * pi / (2.0 * L);
    cd acc(0.0, 0.0);
    if (state_->route != State::Route::galerkin) {
      // Omega-restricted form: lambda (sum_a int_O d^a K d^a conj(phi))
      // + mu int_O K' conj(phi').
      auto integrand_real = [&](auto component) {
        return integrate_panels(component,
                                panels_for(-L, L, {x0},
                                           kernel_freq + test_freq),
                                40);
      };
      for (const auto& alpha : alphas) {
        const cd tf = std::conj(mode_deriv_factor(kj, alpha, L));
        if (tf == cd(0.0, 0.0)) continue;
        const auto& Kref = alpha[0] == 0 ? Kv : Kd;
        cd unit = tf * lambda;
        if (alpha[0] == 1) unit += tf * state_->mu_eff;
        acc += unit * cd(integrand_real([&](double y) {
                 pt[0] = y;
                 return Kref(y) * mode_eval(kj, pt, L).real();
               }),
                         -integrand_real([&](double y) {
                           pt[0] = y;
                           return Kref(y) * mode_eval(kj, pt, L).imag();
                         }));
      }
    } else {
      // Periodic-box form: Sobolev terms over the box, physics term on
      // Omega, all from the complex mode expansion.
      auto eval_expansion = [&](double y,
                                const std::vector<cd>& coef) {
        cd v(0.0, 0.0);
        pt[0] = y;
        for (std::size_t l = 0; l < coef.size(); ++l) {
          if (coef[l] == cd(0.0, 0.0)) continue;
          v += coef[l] * mode_eval((*freqs)[l], pt, L);
        }
        return v;
      };
      const double bound = 2.0 * L;
      for (const auto& alpha : alphas) {
        const cd tf = std::conj(mode_deriv_factor(kj, alpha, L));
        if (tf == cd(0.0, 0.0)) continue;
        std::vector<cd> dcoef(mode_coef.size());
        for (std::size_t l = 0; l < mode_coef.size(); ++l)
          dcoef[l] = mode_coef[l] * mode_deriv_factor((*freqs)[l], alpha, L);
        const auto cuts =
            panels_for(-bound, bound, {-L, x0, L}, kernel_freq + test_freq);
        const cd integral(
            integrate_panels(
                [&](double y) {
                  pt[0] = y;
                  return (eval_expansion(y, dcoef) *
                          std::conj(mode_eval(kj, pt, L)))
                      .real();
                },
                cuts, 40),
            integrate_panels(
                [&](double y) {
                  pt[0] = y;
                  return (eval_expansion(y, dcoef) *
                          std::conj(mode_eval(kj, pt, L)))
                      .imag();
                },
                cuts, 40));
        acc += lambda * tf * integral;
      }
      // physics penalty on Omega
      if (cfg_.reg.mu > 0.0) {
        std::vector<cd> opK(mode_coef.size(), cd(0.0, 0.0));
        std::map<Frequency, cd> shifted;
        for (std::size_t l = 0; l < mode_coef.size(); ++l) {
          if (mode_coef[l] == cd(0.0, 0.0)) continue;
          for (const auto& [q, amp] :
               cfg_.op.apply_to_mode((*freqs)[l], L))
            shifted[q] += mode_coef[l] * amp;
        }
        const auto op_test = cfg_.op.apply_to_mode(kj, L);
        const auto cuts =
            panels_for(-L, L, {x0}, kernel_freq + test_freq);
        auto DK = [&](double y) {
          cd v(0.0, 0.0);
          pt[0] = y;
          for (const auto& [q, amp] : shifted)
            v += amp * mode_eval(q, pt, L);
          return v;
        };
        auto Dphi = [&](double y) {
          cd v(0.0, 0.0);
          pt[0] = y;
          for (const auto& [q, amp] : op_test) v += amp * mode_eval(q, pt, L);
          return v;
        };
        acc += cfg_.reg.mu *
               cd(integrate_panels(
                      [&](double y) {
                        return (DK(y) * std::conj(Dphi(y))).real();
                      },
                      cuts, 40),
                  integrate_panels(
                      [&](double y) {
                        return (DK(y) * std::conj(Dphi(y))).imag();
                      },
                      cuts, 40));
      }
    }
    pt[0] = x0;
    worst = std::max(worst, std::abs(acc - std::conj(mode_eval(kj, pt, L))));
  }
  return worst;
}

// ------------------------------------------------------------ free helpers

double kernel_eval(const KernelConfig& cfg, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y) {
  return KernelEngine(cfg).eval(x, y);
}

double kernel_eval(const KernelConfig& cfg, double x, double y) {
  return KernelEngine(cfg).eval(x, y);
}

Eigen::MatrixXd gram_matrix(const KernelConfig& cfg,
                            const Eigen::MatrixXd& xs) {
  return KernelEngine(cfg).gram(xs);
}

double weak_form_residual(const KernelConfig& cfg, const Eigen::VectorXd& x,
                          int test_order) {
  return KernelEngine(cfg).weak_form_residual(x, test_order);
}

Eigen::MatrixXd psd_floor(const Eigen::MatrixXd& gram) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (gram + gram.transpose()));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("psd_floor: eigendecomposition failed");
  const double tol = 1e-8 * std::max(0.0, gram.trace());
  Eigen::VectorXd ev = es.eigenvalues();
  if (ev.minCoeff() < -tol)
    throw std::runtime_error(
        "psd_floor: Gram matrix has eigenvalue " +
        std::to_string(ev.minCoeff()) +
        " below the -1e-8*trace tolerance (kernel bug, not roundoff)");
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev[i] < 0.0) ev[i] = 0.0;
  Eigen::MatrixXd out =
      es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

int suggested_n_max(const MultiIndexOperator& op,
                    const RegularizationParams& reg, double L, int cap) {
  reg.validate();
  const double threshold = 1e6 * (reg.lambda + reg.mu);
  FrequencyOrdering ordering(op.dimension());
  for (int j = 0; j < cap; ++j) {
    const double w = sobolev_weight(ordering.at(std::size_t(j)), op.order(), L);
    if (reg.lambda * w > threshold) return j + 1;
  }
  return cap;
}

}  // namespace piml
