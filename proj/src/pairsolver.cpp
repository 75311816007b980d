#include "qedmb/pairsolver.hpp"

#include <lapacke.h>

#include <cmath>
#include <cstdlib>

namespace qedmb::pairsolver {

namespace {

// The distro openblas picks AVX-512 kernels that corrupt blocked GEMM on
// some microarchitectures (eigenvalues fine, eigenvectors garbage).  Pin
// a mature kernel set before the first BLAS call; users can still
// override.  A one-time residual check falls back to Eigen if the
// library still misbehaves.
struct BlasEnvGuard {
  BlasEnvGuard() { setenv("OPENBLAS_CORETYPE", "HASWELL", 0); }
};
const BlasEnvGuard blas_env_guard;

bool lapack_eigen_healthy() {
  static const bool ok = [] {
    const int n = 220;
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        a(i, j) = std::sin(0.37 * i + 1.3) * std::cos(0.11 * j);
    Eigen::MatrixXd h = 0.5 * (a + a.transpose());
    Eigen::MatrixXd evecs = h;
    Eigen::VectorXd evals(n);
    const int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                    evecs.data(), n, evals.data());
    if (info != 0) return false;
    const double res =
        (h * evecs.col(0) - evals[0] * evecs.col(0)).norm();
    return res < 1e-10 * std::max(1.0, std::abs(evals[0]));
  }();
  return ok;
}

}  // namespace

Eigen::VectorXd CoulombPairSolution::rho(int column) const {
  Eigen::VectorXd out = amplitudes.col(column);
  out[model_rows[column]] += 1.0;
  return out;
}

CoulombPairSolution solve_coulomb_pair(const Eigen::MatrixXd& v,
                                       const channels::PairBasis& pb,
                                       const std::vector<int>& model_rows,
                                       const Options& opt) {
  const int n = pb.size();
  const int m = int(model_rows.size());
  if (m == 0) throw std::invalid_argument("solve_coulomb_pair: empty model");

  // Q-space denominators must stay clear of the reference energies
  for (int col = 0; col < m; ++col) {
    const double e_ref = pb.energies[model_rows[col]];
    for (int q = 0; q < n; ++q) {
      bool is_model = false;
      for (int r : model_rows) is_model |= (q == r);
      if (is_model) continue;
      if (std::abs(e_ref - pb.energies[q]) <
          1e-9 * std::max(1.0, std::abs(e_ref)))
        throw SingularDenominator(
            "solve_coulomb_pair: Q pair degenerate with the reference");
    }
  }

  CoulombPairSolution sol;
  sol.model_rows = model_rows;
  sol.amplitudes = Eigen::MatrixXd::Zero(n, m);
  sol.v_eff = Eigen::MatrixXd::Zero(m, m);

  double prev_res = std::numeric_limits<double>::max();
  bool damped = false;
  for (int it = 1; it <= opt.max_iter; ++it) {
    // t = V rho per model column, V_eff from the model rows
    Eigen::MatrixXd t(n, m);
    for (int col = 0; col < m; ++col)
      t.col(col) = opt.lambda * (v * sol.rho(col));
    Eigen::MatrixXd v_eff(m, m);
    for (int row = 0; row < m; ++row)
      for (int col = 0; col < m; ++col)
        v_eff(row, col) = t(model_rows[row], col);

    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(n, m);
    double residual = 0.0;
    for (int col = 0; col < m; ++col) {
      const double e_ref = pb.energies[model_rows[col]];
      for (int q = 0; q < n; ++q) {
        bool is_model = false;
        for (int r : model_rows) is_model |= (q == r);
        if (is_model) continue;
        double rhs = t(q, col);
        for (int g = 0; g < m; ++g)
          rhs -= sol.amplitudes(q, g) * v_eff(g, col);
        const double den = e_ref - pb.energies[q];
        next(q, col) = rhs / den;
        residual = std::max(residual,
                            std::abs(den * sol.amplitudes(q, col) - rhs));
      }
    }
    sol.v_eff = v_eff;
    if (opt.fixed_iterations > 0 && it >= opt.fixed_iterations) {
      sol.iterations = it;
      sol.residual = residual;
      sol.amplitudes = next;
      return sol;
    }
    if (opt.fixed_iterations == 0 && residual < opt.tol) {
      sol.iterations = it;
      sol.residual = residual;
      return sol;
    }
    if (residual > prev_res) damped = true;
    prev_res = residual;
    sol.amplitudes = damped
                         ? (opt.damping * sol.amplitudes +
                            (1.0 - opt.damping) * next).eval()
                         : next;
  }
  throw NoConvergence("solve_coulomb_pair: not converged", opt.max_iter,
                      prev_res);
}

void symmetric_eigen(const Eigen::MatrixXd& m, Eigen::VectorXd& evals,
                     Eigen::MatrixXd& evecs) {
  const int n = int(m.rows());
  if (lapack_eigen_healthy()) {
    evecs = m;
    evals.resize(n);
    const int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                    evecs.data(), n, evals.data());
    if (info == 0) return;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("symmetric_eigen: eigensolver failed");
  evals = es.eigenvalues();
  evecs = es.eigenvectors();
}

double ci_matched_energy(const Eigen::MatrixXd& v,
                         const channels::PairBasis& pb, int model_row) {
  Eigen::MatrixXd h = v;
  h.diagonal() += pb.energies;
  Eigen::VectorXd evals;
  Eigen::MatrixXd evecs;
  symmetric_eigen(h, evals, evecs);
  int best = 0;
  double best_ov = -1.0;
  for (int k = 0; k < evals.size(); ++k) {
    const double ov = std::abs(evecs(model_row, k));
    if (ov > best_ov) {
      best_ov = ov;
      best = k;
    }
  }
  return evals[best];
}

}  // namespace qedmb::pairsolver
