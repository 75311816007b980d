#include "qedmb/modelspace.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qedmb::modelspace {

namespace {

// Distance from any model-space H0 energy to the nearest Q-space H0
// energy; sets the analytic radius of Obar(e).
double model_q_gap(const MatrixModel& model) {
  std::set<int> p(model.model_indices.begin(), model.model_indices.end());
  double gap = std::numeric_limits<double>::max();
  for (int a : model.model_indices)
    for (int q = 0; q < model.dim(); ++q)
      if (!p.count(q))
        gap = std::min(gap, std::abs(model.h0[a] - model.h0[q]));
  return gap;
}

Matrix veff_small(const MatrixModel& model, const Matrix& v_eff) {
  const int m = int(model.model_indices.size());
  Matrix out(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      out(i, j) = v_eff(model.model_indices[i], model.model_indices[j]);
  return out;
}

// All length-n chains over model-state positions, with the product of
// V_eff links and the visited energy tuple.
void for_each_chain(const MatrixModel& model, const Matrix& veff_m, int n,
                    int alpha_pos,
                    const std::function<void(const std::vector<int>&, double)>&
                        visit) {
  const int m = int(model.model_indices.size());
  std::vector<int> chain(n);
  std::function<void(int, double)> rec = [&](int depth, double coeff) {
    if (depth == n) {
      visit(chain, coeff);
      return;
    }
    const int prev = depth == 0 ? alpha_pos : chain[depth - 1];
    for (int b = 0; b < m; ++b) {
      chain[depth] = b;
      rec(depth + 1, coeff * veff_m(b, prev));
    }
  };
  rec(0, 1.0);
}

}  // namespace

MatrixModel::MatrixModel(Vector h0_diag, Matrix v_full,
                         std::vector<int> p_indices)
    : h0(std::move(h0_diag)), v(std::move(v_full)),
      model_indices(std::move(p_indices)) {
  if (v.rows() != v.cols() || v.rows() != h0.size())
    throw std::invalid_argument("MatrixModel: dimension mismatch");
  if ((v - v.transpose()).cwiseAbs().maxCoeff() >
      1e-14 * std::max(1.0, v.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("MatrixModel: V not symmetric");
  std::set<int> seen;
  for (int i : model_indices) {
    if (i < 0 || i >= dim() || !seen.insert(i).second)
      throw std::invalid_argument("MatrixModel: bad model-space indices");
  }
  if (model_indices.empty())
    throw std::invalid_argument("MatrixModel: empty model space");
}

Projectors build_projectors(const MatrixModel& model) {
  const int d = model.dim();
  Projectors proj{Matrix::Zero(d, d), Matrix::Identity(d, d)};
  for (int i : model.model_indices) {
    proj.p(i, i) = 1.0;
    proj.q(i, i) = 0.0;
  }
  return proj;
}

Matrix resolvent(double e, const MatrixModel& model, const Projectors& proj) {
  const int d = model.dim();
  Matrix gamma = Matrix::Zero(d, d);
  for (int q = 0; q < d; ++q) {
    if (proj.q(q, q) == 0.0) continue;
    const double den = e - model.h0[q];
    if (std::abs(den) < 1e-12 * std::max(1.0, std::abs(e)))
      throw SingularResolvent("resolvent: e collides with Q-space energy", q);
    gamma(q, q) = 1.0 / den;
  }
  return gamma;
}

BlochSolution solve_bloch_instantaneous(const MatrixModel& model,
                                        const BlochOptions& opt) {
  const int d = model.dim();
  const auto proj = build_projectors(model);
  Matrix omega = proj.p;  // intermediate normalization
  double prev_res = std::numeric_limits<double>::max();
  bool damped = false;

  for (int it = 1; it <= opt.max_iter; ++it) {
    const Matrix v_eff = proj.p * model.v * omega * proj.p;
    const Matrix rhs = model.v * omega - omega * v_eff;
    Matrix next = proj.p;
    double residual = 0.0;
    for (int a : model.model_indices) {
      const Matrix gamma = resolvent(model.h0[a], model, proj);
      next.col(a) += gamma * rhs.col(a);
      // Bloch residual on Q rows: (E_a - h0_q) Omega_qa - rhs_qa
      for (int q = 0; q < d; ++q) {
        if (proj.q(q, q) == 0.0) continue;
        residual = std::max(residual,
                            std::abs((model.h0[a] - model.h0[q]) *
                                         omega(q, a) - rhs(q, a)));
      }
    }
    if (residual < opt.tol)
      return {omega, veff_small(model, proj.p * model.v * omega * proj.p),
              it, residual};
    if (residual > prev_res) damped = true;
    prev_res = residual;
    omega = damped ? (opt.damping * omega + (1.0 - opt.damping) * next)
                   : next;
  }
  throw NoConvergence("solve_bloch_instantaneous: no fixed point",
                      opt.max_iter, prev_res);
}

diffcalc::EnergyFunction obar_function(const MatrixModel& model) {
  const auto proj = build_projectors(model);
  const double gap = model_q_gap(model);
  diffcalc::EnergyFunction f;
  f.analytic_radius = gap;
  f.eval = [model, proj](double e) -> Matrix {
    const int d = model.dim();
    const Matrix gamma = resolvent(e, model, proj);
    return (Matrix::Identity(d, d) - gamma * model.v).inverse();
  };
  return f;
}

FoldReport fold_series_check(const MatrixModel& model, int n_max) {
  const auto proj = build_projectors(model);
  const auto sol = solve_bloch_instantaneous(model);
  const auto obar = obar_function(model);
  const Matrix& veff_m = sol.v_eff;
  const int m = int(model.model_indices.size());

  FoldReport report;
  Matrix series = Matrix::Zero(model.dim(), model.dim());
  for (int apos = 0; apos < m; ++apos) {
    const int a = model.model_indices[apos];
    series.col(a) = obar(model.h0[a]).col(a);
  }
  auto record = [&](int /*order*/) {
    double dev = 0.0;
    for (int apos = 0; apos < m; ++apos) {
      const int a = model.model_indices[apos];
      dev = std::max(dev, (proj.q * (series.col(a) - sol.omega.col(a)))
                              .cwiseAbs()
                              .maxCoeff());
    }
    report.deviation_by_order.push_back(dev);
  };
  record(0);

  for (int n = 1; n <= n_max; ++n) {
    for (int apos = 0; apos < m; ++apos) {
      const int a = model.model_indices[apos];
      std::vector<double> tuple(n + 1);
      tuple[0] = model.h0[a];
      for_each_chain(model, veff_m, n, apos,
                     [&](const std::vector<int>& chain, double coeff) {
                       if (coeff == 0.0) return;
                       for (int i = 0; i < n; ++i)
                         tuple[i + 1] =
                             model.h0[model.model_indices[chain[i]]];
                       const Matrix dd = diffcalc::diff_ratio_n(obar, tuple);
                       series.col(a) +=
                           coeff *
                           dd.col(model.model_indices[chain[n - 1]]);
                     });
    }
    record(n);
  }
  report.final_deviation = report.deviation_by_order.back();
  return report;
}

Eq116Report eq116_check(const MatrixModel& model, int n_max) {
  const auto proj = build_projectors(model);
  const auto sol = solve_bloch_instantaneous(model);
  const auto obar = obar_function(model);
  const Matrix& veff_m = sol.v_eff;
  const int m = int(model.model_indices.size());

  // Vbar_R(e) = V Obar(e); Q Obar = Gamma_Q Vbar_R holds by construction.
  diffcalc::EnergyFunction vbar_r;
  vbar_r.analytic_radius = obar.analytic_radius;
  vbar_r.eval = [&model, obar](double e) -> Matrix {
    return model.v * obar(e);
  };

  Matrix v_eff_full = Matrix::Zero(model.dim(), model.dim());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      v_eff_full(model.model_indices[i], model.model_indices[j]) =
          veff_m(i, j);

  Eq116Report report;
  for (int apos = 0; apos < m; ++apos) {
    const int a = model.model_indices[apos];
    const Matrix gamma = resolvent(model.h0[a], model, proj);
    Eigen::VectorXd rhs = proj.q * obar(model.h0[a]).col(a) -
                          gamma * (sol.omega * v_eff_full).col(a);
    std::vector<double> tuple;
    for (int n = 1; n <= n_max; ++n) {
      tuple.assign(n + 1, 0.0);
      tuple[0] = model.h0[a];
      for_each_chain(model, veff_m, n, apos,
                     [&](const std::vector<int>& chain, double coeff) {
                       if (coeff == 0.0) return;
                       for (int i = 0; i < n; ++i)
                         tuple[i + 1] =
                             model.h0[model.model_indices[chain[i]]];
                       const Matrix dd =
                           diffcalc::diff_ratio_n(vbar_r, tuple);
                       rhs += coeff * (gamma *
                                       dd.col(model.model_indices[chain[n - 1]]));
                     });
    }
    const Eigen::VectorXd lhs = proj.q * sol.omega.col(a);
    report.max_deviation =
        std::max(report.max_deviation, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  return report;
}

Vector matched_exact_eigenvalues(const MatrixModel& model) {
  Matrix h = model.v;
  h.diagonal() += model.h0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("matched_exact_eigenvalues: eigensolver failed");
  const int m = int(model.model_indices.size());
  Vector out(m);
  std::set<int> used;
  for (int i = 0; i < m; ++i) {
    const int a = model.model_indices[i];
    int best = -1;
    double best_ov = -1.0;
    for (int k = 0; k < model.dim(); ++k) {
      if (used.count(k)) continue;
      const double ov = std::abs(es.eigenvectors()(a, k));
      if (ov > best_ov) {
        best_ov = ov;
        best = k;
      }
    }
    used.insert(best);
    out[i] = es.eigenvalues()[best];
  }
  return out;
}

}  // namespace qedmb::modelspace
