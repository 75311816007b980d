#pragma once

#include <map>
#include <optional>
#include <vector>

#include "qedmb/angular.hpp"
#include "qedmb/pairsolver.hpp"
#include "qedmb/quadrature.hpp"
#include "qedmb/slater.hpp"

// One retarded Coulomb-gauge photon over the discrete pair basis: the
// closed single-photon potential with both time orderings, the photonic
// pair equations with an uncontracted photon (momentum k, multipole l),
// absorption with continued Coulomb iteration, and the Feynman-gauge
// closed form for cross checks.
//
// Sign conventions: energy denominators are the resolvents
// 1/(E - eps - eps - k) exactly as the pair equations produce them.  The
// separated Coulomb-gauge interaction enters with coulomb_gauge_sign
// relative to the tabulated f(k) weights; this is the overall sign fixed
// by requiring the unretarded Gaunt series to reproduce the instantaneous
// magnetic interaction -a1.a2/r12 (the Feynman-gauge form needs no such
// flip).  Odd vertices carry pure-imaginary reduced elements; every
// two-vertex contraction therefore includes one factor i^2 = -1.
namespace qedmb::photon {

using channels::BasisSet;
using channels::OrbitalRef;
using channels::Pair;
using channels::PairBasis;

inline constexpr double coulomb_gauge_sign = -1.0;

// --- single-particle vertex values (i stripped) ---

double gaunt_vertex(const BasisSet& basis, OrbitalRef x, OrbitalRef y,
                    int l, int tensor_rank, double k);
double sr_vertex(const BasisSet& basis, OrbitalRef x, OrbitalRef y, int l,
                 double k);
// j_L(kr)-weighted even vertex integral with the C^L angular factor.
double even_vertex(const BasisSet& basis, OrbitalRef x, OrbitalRef y, int L,
                   double k);

// --- straight coupled operator products at fixed k (i^2 included) ---

// <a b; J| V^l(k r1) . V^l(k r2) |c d; J> for one separated term.
double pair_term_straight(const BasisSet& basis, OrbitalRef a, OrbitalRef b,
                          OrbitalRef c, OrbitalRef d, int two_j,
                          angular::Kind kind, int l, double k);

// <a b; J| j_L(kr1) j_L(kr2) C^L . C^L |c d; J> (one multipole of the
// spherical-wave expansion of sin(k r12)/(k r12)).
double even_term_straight(const BasisSet& basis, OrbitalRef a, OrbitalRef b,
                          OrbitalRef c, OrbitalRef d, int two_j, int L,
                          double k);

struct OnePhotonOptions {
  int l_max = 6;
  int k_nodes = 140;
  double k0 = 4.0;
  enum class Gauge { coulomb, feynman };
  Gauge gauge = Gauge::coulomb;
};

// <a b; J| V_ret(E) |c d; J>: both time orderings, principal-value poles.
// In the Feynman gauge the result is the full one-photon exchange
// (including the retarded Coulomb part); in the Coulomb gauge it is the
// transverse (Breit) part only, and the named kind can restrict it.
double retarded_element_straight(
    const BasisSet& basis, OrbitalRef a, OrbitalRef b, OrbitalRef c,
    OrbitalRef d, int two_j, double e_ref, const OnePhotonOptions& opt,
    std::optional<angular::Kind> only_kind = std::nullopt);

// Antisymmetrized diagonal <{AB} J| V_ret(E) |{AB} J>.
double one_photon_energy(const BasisSet& basis, const Pair& ab, int two_j,
                         double e_ref, const OnePhotonOptions& opt,
                         std::optional<angular::Kind> only_kind);

// Instantaneous Coulomb expectation <{AB} J| 1/r12 |{AB} J> (for the
// gauge cross-check).
double instantaneous_coulomb_energy(slater::SlaterEngine& engine,
                                    const Pair& ab, int two_j);

// --- dressed (correlated) one-photon machinery ---

struct DressedOptions {
  int l_max = 4;
  int k_nodes = 80;
  double k0 = 4.0;
  double lambda = 1.0;  // scale on V12 everywhere
  pairsolver::Options pair_opt{};
};

struct CorrelatedResult {
  double energy = 0.0;        // Hartree; emission+absorption dressed total
  double one_photon = 0.0;    // undressed value on the same grids
  double l_tail = 0.0;        // geometric tail estimate from the last l's
  std::map<int, double> by_l;
  int k_nodes = 0;
  int iterations = 0;         // instantaneous pair iterations
};

// Solves the coupled photonic pair equations for one reference state and
// one interaction kind and integrates the photon away: the full
// one-retarded-photon, all-order-Coulomb contribution to V_eff.
class CorrelatedPhoton {
 public:
  CorrelatedPhoton(slater::SlaterEngine& engine, const PairBasis& physical,
                   int model_row, const DressedOptions& opt);

  double reference_energy() const { return e_ref_; }
  double coulomb_v_eff() const { return v_eff_; }
  double correlated_energy_total() const { return e_ref_ + v_eff_; }

  CorrelatedResult run(angular::Kind kind);

  // undressed consistency value: the photonic cascade with lambda = 0,
  // which must match the closed one-photon element
  double undressed_energy(angular::Kind kind);

 private:
  struct Block {
    PairBasis basis;
    Eigen::VectorXd lambda_eigs;
    Eigen::MatrixXd u;
  };
  const Block& block(int two_j12, int parity, int sector, double lambda);

  double photon_pass(angular::Kind kind, double lambda,
                     CorrelatedResult* detail);

  slater::SlaterEngine* engine_;
  const PairBasis* physical_;
  int model_row_;
  DressedOptions opt_;
  Eigen::MatrixXd v_phys_;
  Eigen::VectorXd rho_;      // correlated pair function (unit + amplitudes)
  double e_ref_ = 0.0;
  double v_eff_ = 0.0;
  int iterations_ = 0;
  std::map<long long, Block> blocks_;
};

// Angular recoupling factor of the photon contraction
// sum_q (-1)^q V^K_{-q}(2) G V^K_q(1) through an intermediate pair
// momentum J12 (computed once from Clebsch-Gordan sums and cached).
double x_factor(int two_j, int two_j12, int tensor_rank);

// Spectator reduced-matrix-element factors (exposed for the tests):
// <(t u) J12 || T^K(1) || (x y) J> = delta_{uy} a1_factor * <t||T||x>
// <(t u) J12 || T^K(2) || (x y) J> = delta_{tx} a2_factor * <u||T||y>
double a1_factor(double jt, double jx, double jy, int two_j12, int two_j,
                 int tensor_rank);
double a2_factor(double ju, double jy, double jx, int two_j12, int two_j,
                 int tensor_rank);

}  // namespace qedmb::photon
