#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "qedmb/diffcalc.hpp"

// Finite matrix models for the partitioned eigenvalue problem
// H = H0 + V with a (possibly quasidegenerate) model space: projectors,
// resolvents, the iterated Bloch equation, and checks of the fold
// expansion of the wave operator against exact diagonalization.
namespace qedmb::modelspace {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct SingularResolvent : std::runtime_error {
  int index;
  SingularResolvent(const std::string& what, int idx)
      : std::runtime_error(what), index(idx) {}
};

struct NoConvergence : std::runtime_error {
  int iterations;
  double residual;
  NoConvergence(const std::string& what, int it, double res)
      : std::runtime_error(what), iterations(it), residual(res) {}
};

// H0 diagonal, V real symmetric, both in Hartree.
struct MatrixModel {
  Vector h0;
  Matrix v;
  std::vector<int> model_indices;

  MatrixModel(Vector h0_diag, Matrix v_full, std::vector<int> p_indices);
  int dim() const { return int(h0.size()); }
};

struct Projectors {
  Matrix p;  // diagonal 0/1
  Matrix q;
};

Projectors build_projectors(const MatrixModel& model);

// Gamma_Q(e) = Q / (e - H0), diagonal.  Throws SingularResolvent when e
// collides with a Q-space H0 value.
Matrix resolvent(double e, const MatrixModel& model, const Projectors& proj);

struct BlochOptions {
  double tol = 1e-12;       // max-norm residual of the Bloch equation
  int max_iter = 10000;
  double damping = 0.5;     // applied once the residual oscillates
};

struct BlochSolution {
  Matrix omega;   // wave operator, P-block = identity
  Matrix v_eff;   // P V Omega P restricted to model-space rows/cols
  int iterations = 0;
  double residual = 0.0;
};

// Fixed-point iteration Omega <- P + Gamma_Q (V Omega - Omega V_eff) with
// V_eff = P V Omega P.  Eigenvalues of P H0 P + V_eff are exact
// eigenvalues of H0 + V.
BlochSolution solve_bloch_instantaneous(const MatrixModel& model,
                                        const BlochOptions& opt = {});

// MSC-free wave operator Obar(e) = [1 - Gamma_Q(e) V]^{-1} as an energy
// function (acting on model-space columns).
diffcalc::EnergyFunction obar_function(const MatrixModel& model);

struct FoldReport {
  // max |Omega_series - Omega| over Q-block entries, per series order
  // 0..n_max (order 0 = Obar only).
  std::vector<double> deviation_by_order;
  double final_deviation = 0.0;
};

// Builds the fold expansion Omega P = Obar P + sum_n d^n Obar (V_eff)^n
// column by column and compares with the converged Bloch solution.
FoldReport fold_series_check(const MatrixModel& model, int n_max);

struct Eq116Report {
  double max_deviation = 0.0;
};

// Checks Q Omega P = Q Obar P - Gamma_Q Omega V_eff
//                  + Gamma_Q sum_n d^n Vbar_R (V_eff)^n
// with Vbar_R(e) = V Obar(e) and all resolvents anchored at the energy of
// the reference column.
Eq116Report eq116_check(const MatrixModel& model, int n_max);

// Exact eigenvalues of H0 + V paired to model states by maximal overlap
// of the eigenvectors with the model basis vectors.
Vector matched_exact_eigenvalues(const MatrixModel& model);

}  // namespace qedmb::modelspace
