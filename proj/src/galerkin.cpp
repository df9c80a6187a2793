#include "piml/galerkin.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <stdexcept>

#include "piml/threads.hpp"

namespace piml {

using std::numbers::pi;
using cd = std::complex<double>;

double spectral_eigenvalue(const Frequency& k, const MultiIndexOperator& op,
                           const RegularizationParams& reg, double L) {
  reg.validate();
  if (int(k.size()) != op.dimension())
    throw std::invalid_argument("spectral_eigenvalue: dimension mismatch");
  if (!op.is_constant_coefficient())
    throw std::invalid_argument(
        "spectral_eigenvalue: non-constant coefficients need the Galerkin "
        "path");
  const double w = sobolev_weight(k, op.order(), L);
  const double sym = std::norm(op.symbol(k, L));
  return 1.0 / (reg.lambda * w + reg.mu * sym);
}

Eigen::MatrixXcd GalerkinSystem::b_matrix_normalized() const {
  return b_matrix / dom.box_volume();
}

GalerkinSystem assemble_galerkin(const MultiIndexOperator& op,
                                 const RegularizationParams& reg,
                                 const DomainSpec& dom, int n_max,
                                 std::size_t memory_budget_bytes) {
  reg.validate();
  dom.validate();
  if (op.dimension() != dom.d)
    throw std::invalid_argument("assemble_galerkin: dimension mismatch");
  if (n_max < 1)
    throw std::invalid_argument("assemble_galerkin: n_max must be >= 1");

  // Retained modes, closed under k -> -k so the real reformulation exists.
  std::vector<Frequency> freqs = FrequencyOrdering(dom.d).prefix(n_max);
  {
    std::map<Frequency, int> seen;
    for (int j = 0; j < int(freqs.size()); ++j) seen[freqs[j]] = j;
    for (std::size_t j = 0; j < freqs.size(); ++j) {
      Frequency m = negate(freqs[j]);
      if (!seen.count(m)) {
        seen[m] = int(freqs.size());
        freqs.push_back(std::move(m));
      }
    }
  }
  const int n = int(freqs.size());

  const std::size_t bytes = 2u * sizeof(cd) * std::size_t(n) * std::size_t(n);
  if (bytes > memory_budget_bytes)
    throw std::runtime_error(
        "assemble_galerkin: matrices exceed the memory budget (" +
        std::to_string(bytes >> 20) + " MiB needed)");

  GalerkinSystem sys{n_max, std::move(freqs), Eigen::MatrixXcd::Zero(n, n),
                     Eigen::MatrixXcd::Zero(n, n), op, reg, dom};

  const double box_vol = dom.box_volume();
  const int s = op.order();
  const double L = dom.L;

  // Box part: diagonal by orthogonality.
  for (int j = 0; j < n; ++j)
    sys.b_matrix(j, j) = reg.lambda * sobolev_weight(sys.freqs[j], s, L) *
                         box_vol;

  // Omega part couples modes.  Precompute D e_k expansions once.
  std::vector<std::vector<std::pair<Frequency, cd>>> expansion(static_cast<std::size_t>(n));
  if (reg.mu > 0.0) {
    for (int j = 0; j < n; ++j)
      expansion[std::size_t(j)] = op.apply_to_mode(sys.freqs[j], L);
  }

  // entry (j, l) = B(trial e_l, test e_j); fill the lower triangle in
  // parallel over rows, mirror afterwards.
  parallel_for(std::size_t(n), [&](std::size_t j) {
    for (int l = 0; l <= int(j); ++l) {
      sys.mass_omega(Eigen::Index(j), l) =
          mode_inner_omega(sys.freqs[std::size_t(l)], sys.freqs[j], dom);
      if (reg.mu > 0.0) {
        cd acc(0.0, 0.0);
        for (const auto& [qa, amp_a] : expansion[std::size_t(l)])
          for (const auto& [qb, amp_b] : expansion[j])
            acc += amp_a * std::conj(amp_b) * mode_inner_omega(qa, qb, dom);
        sys.b_matrix(Eigen::Index(j), l) += reg.mu * acc;
      }
    }
  });
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < j; ++l) {
      sys.b_matrix(l, j) = std::conj(sys.b_matrix(j, l));
      sys.mass_omega(l, j) = std::conj(sys.mass_omega(j, l));
    }
    sys.b_matrix(j, j) = cd(sys.b_matrix(j, j).real(), 0.0);
    sys.mass_omega(j, j) = cd(sys.mass_omega(j, j).real(), 0.0);
  }
  return sys;
}

RealGalerkin real_reduction(const GalerkinSystem& sys) {
  const int n = sys.mode_count();
  std::map<Frequency, int> index;
  for (int j = 0; j < n; ++j) index[sys.freqs[std::size_t(j)]] = j;

  // Real basis: one constant for k=0, a (cos, sin) pair per canonical
  // frequency pair, listed in the global ordering of the canonical member.
  RealGalerkin red;
  struct Col {
    int j0, j1;      // complex mode indices touched (j1 = -1 for constant)
    cd c0, c1;       // their coefficients
  };
  std::vector<Col> cols;
  const double box_vol = sys.dom.box_volume();
  const double inv_sqrt_vol = 1.0 / std::sqrt(box_vol);
  const double r = 1.0 / std::sqrt(2.0 * box_vol);
  for (int j = 0; j < n; ++j) {
    const Frequency& k = sys.freqs[std::size_t(j)];
    if (norm1(k) == 0) {
      red.modes.push_back({RealMode::Kind::constant, k});
      cols.push_back({j, -1, cd(inv_sqrt_vol, 0.0), cd(0.0, 0.0)});
      continue;
    }
    const Frequency neg = negate(k);
    if (!FrequencyOrdering::before(k, neg)) continue;  // partner handles it
    const int jn = index.at(neg);
    red.modes.push_back({RealMode::Kind::cosine, k});
    cols.push_back({j, jn, cd(r, 0.0), cd(r, 0.0)});
    red.modes.push_back({RealMode::Kind::sine, k});
    cols.push_back({j, jn, cd(0.0, -r), cd(0.0, r)});
  }
  const int nr = int(cols.size());

  auto reduce = [&](const Eigen::MatrixXcd& A) {
    Eigen::MatrixXd out(nr, nr);
    for (int q = 0; q < nr; ++q) {
      // u = A * T(:,q), a combination of at most two columns of A.
      Eigen::VectorXcd u = cols[std::size_t(q)].c0 *
                           A.col(cols[std::size_t(q)].j0);
      if (cols[std::size_t(q)].j1 >= 0)
        u += cols[std::size_t(q)].c1 * A.col(cols[std::size_t(q)].j1);
      for (int p = 0; p < nr; ++p) {
        cd v = std::conj(cols[std::size_t(p)].c0) *
               u[cols[std::size_t(p)].j0];
        if (cols[std::size_t(p)].j1 >= 0)
          v += std::conj(cols[std::size_t(p)].c1) *
               u[cols[std::size_t(p)].j1];
        out(p, q) = v.real();
      }
    }
    return Eigen::MatrixXd(0.5 * (out + out.transpose()));
  };
  red.b = reduce(sys.b_matrix);
  red.mass = reduce(sys.mass_omega);
  return red;
}

Eigen::VectorXd RealGalerkin::basis_eval(const Eigen::VectorXd& x,
                                         double L) const {
  Eigen::VectorXd out(Eigen::Index(modes.size()));
  double box_vol = 1.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) box_vol *= 4.0 * L;
  const double c_const = 1.0 / std::sqrt(box_vol);
  const double c_pair = std::sqrt(2.0 / box_vol);
  for (std::size_t q = 0; q < modes.size(); ++q) {
    const RealMode& m = modes[q];
    if (m.kind == RealMode::Kind::constant) {
      out[Eigen::Index(q)] = c_const;
      continue;
    }
    double phase = 0.0;
    for (Eigen::Index j = 0; j < x.size(); ++j)
      phase += double(m.freq[std::size_t(j)]) * x[j];
    phase *= pi / (2.0 * L);
    out[Eigen::Index(q)] = m.kind == RealMode::Kind::cosine
                               ? c_pair * std::cos(phase)
                               : c_pair * std::sin(phase);
  }
  return out;
}

namespace {

SpectrumParams params_of(const GalerkinSystem& sys) {
  SpectrumParams p;
  p.lambda = sys.reg.lambda;
  p.mu = sys.reg.mu;
  p.L = sys.dom.L;
  p.s = sys.op.order();
  p.d = sys.dom.d;
  return p;
}

[[noreturn]] void eig_failure(const Eigen::MatrixXd& m, const char* what) {
  const double dmin = m.diagonal().minCoeff();
  const double dmax = m.diagonal().maxCoeff();
  throw std::runtime_error(std::string(what) +
                           ": eigendecomposition failed (diagonal range " +
                           std::to_string(dmin) + " .. " +
                           std::to_string(dmax) + ")");
}

}  // namespace

Spectrum truncated_spectrum(const GalerkinSystem& sys) {
  // real_reduction already works in the L2(box)-orthonormal basis, so the
  // eigenvalues of red.b are exactly the 1/a_m.
  RealGalerkin red = real_reduction(sys);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(red.b);
  if (es.info() != Eigen::Success) eig_failure(red.b, "truncated_spectrum");
  Spectrum spec;
  spec.params = params_of(sys);
  const auto& beta = es.eigenvalues();  // ascending
  for (Eigen::Index i = 0; i < beta.size(); ++i) {
    if (!(beta[i] > 0.0))
      throw std::runtime_error(
          "truncated_spectrum: B matrix not positive definite");
    spec.eigenvalues.push_back(1.0 / beta[i]);
    spec.provenance.push_back({EigSource::galerkin, int(i)});
  }
  spec.validate();
  return spec;
}

Spectrum truncated_spectrum_compressed(const GalerkinSystem& sys) {
  RealGalerkin red = real_reduction(sys);
  Eigen::LLT<Eigen::MatrixXd> llt(red.b);
  if (llt.info() != Eigen::Success)
    eig_failure(red.b, "truncated_spectrum_compressed");
  // a = eig(L^-1 M L^-T) with B = L L^T: the compressed-operator spectrum.
  Eigen::MatrixXd X = llt.matrixL().solve(red.mass);
  Eigen::MatrixXd A = llt.matrixL().solve(X.transpose());
  A = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success)
    eig_failure(A, "truncated_spectrum_compressed");
  Spectrum spec;
  spec.params = params_of(sys);
  const auto& a = es.eigenvalues();  // ascending
  for (Eigen::Index i = a.size() - 1; i >= 0; --i) {
    if (!(a[i] > 0.0)) break;  // discard the numerically zero tail
    spec.eigenvalues.push_back(a[i]);
    spec.provenance.push_back({EigSource::galerkin, int(a.size() - 1 - i)});
  }
  spec.validate();
  return spec;
}

}  // namespace piml
