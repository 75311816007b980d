#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "qedmb/slater.hpp"

// All-order instantaneous Coulomb pair equation over a coupled pair
// basis: iterates the Q-space amplitudes with folds through the
// effective interaction, for one- or multi-dimensional model spaces.
namespace qedmb::pairsolver {

struct NoConvergence : std::runtime_error {
  int iterations;
  double residual;
  NoConvergence(const std::string& w, int it, double r)
      : std::runtime_error(w), iterations(it), residual(r) {}
};

struct SingularDenominator : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  double tol = 1e-11;    // max-norm residual of the pair equation
  int max_iter = 5000;
  double damping = 0.5;  // engaged when the residual oscillates
  double lambda = 1.0;   // scale factor on V12 (order-by-order hooks)
  // > 0: run exactly this many sweeps and return without the
  // convergence check (order-by-order inspection)
  int fixed_iterations = 0;
};

struct CoulombPairSolution {
  std::vector<int> model_rows;   // positions of model pairs in the basis
  Eigen::MatrixXd amplitudes;    // [basis x n_model], zero on model rows
  Eigen::MatrixXd v_eff;         // [n_model x n_model]
  int iterations = 0;
  double residual = 0.0;

  // rho for one model column: unit on its own pair plus amplitudes
  Eigen::VectorXd rho(int column) const;
};

// Iterates s <- Gamma_Q (V rho - rho_model V_eff) on the precomputed
// Coulomb matrix.  The first sweep from zero amplitudes reproduces the
// plain second-order sum.
CoulombPairSolution solve_coulomb_pair(const Eigen::MatrixXd& v,
                                       const channels::PairBasis& pb,
                                       const std::vector<int>& model_rows,
                                       const Options& opt = {});

// Dense symmetric eigensolver (LAPACK divide-and-conquer).
void symmetric_eigen(const Eigen::MatrixXd& m, Eigen::VectorXd& evals,
                     Eigen::MatrixXd& evecs);

// Configuration-interaction oracle: eigenvalue of diag(E) + V whose
// eigenvector has maximal overlap with the given model pair.
double ci_matched_energy(const Eigen::MatrixXd& v,
                         const channels::PairBasis& pb, int model_row);

}  // namespace qedmb::pairsolver
