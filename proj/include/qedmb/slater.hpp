#pragma once

#include <Eigen/Dense>
#include <unordered_map>

#include "qedmb/channels.hpp"

// Coulomb matrix engine over coupled pair bases: cached relativistic
// Slater integrals assembled with the 6j recoupling of the multipole
// expansion.
namespace qedmb::slater {

using channels::BasisSet;
using channels::OrbitalRef;
using channels::Pair;
using channels::PairBasis;

class SlaterEngine {
 public:
  explicit SlaterEngine(const BasisSet& basis, int l_multipole_max = 8);

  const BasisSet& basis() const { return *basis_; }

  // R^L(ac; bd): kernel r_<^L / r_>^{L+1} over (F_a F_c + G_a G_c) and
  // (F_b F_d + G_b G_d); Y-functions cached per (a, c, L).
  double rk(OrbitalRef a, OrbitalRef c, OrbitalRef b, OrbitalRef d, int L);

  // <a b; J| sum_L C^L.C^L r_<^L/r_>^{L+1} |c d; J>, straight coupled.
  double coulomb_straight(const Pair& ab, const Pair& cd, int two_j);
  double coulomb_straight(OrbitalRef a, OrbitalRef b, OrbitalRef c,
                          OrbitalRef d, int two_j);

  // Antisymmetrized / sector element: 2 N_ab N_cd (direct + s * phase *
  // exchange), s = -1 for the physical (fermion) sector.
  double coulomb_element(const Pair& ab, const Pair& cd, int two_j,
                         int sector = -1);

  // Dense symmetric Coulomb matrix over a pair basis (sector taken from
  // the basis construction).
  Eigen::MatrixXd coulomb_matrix(const PairBasis& pb, int sector = -1);

 private:
  const Eigen::VectorXd& y_function(OrbitalRef a, OrbitalRef c, int L);

  const BasisSet* basis_;
  int lmax_;
  std::unordered_map<long long, Eigen::VectorXd> y_cache_;
};

// Fourth-order cumulative integral in the log variable (exposed for the
// vertex and oracle code).
void cumulative_log_integral(const Eigen::VectorXd& g, double h,
                             Eigen::VectorXd& out);

}  // namespace qedmb::slater
