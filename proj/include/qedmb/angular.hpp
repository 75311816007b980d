#pragma once

#include <string>
#include <vector>

#include "qedmb/radial.hpp"

// Multipole algebra for the separated Coulomb-gauge photon interaction:
// spinor-spherical-harmonic reduced matrix elements, the Gaunt and
// scalar-retardation single-particle vertex functions, Coulomb multipole
// strengths, and the one place where the f(k) weights live.
//
// Conventions: Condon-Shortley phases, C^l = sqrt(4pi/(2l+1)) Y^l,
// Wigner-Eckart <j m|T^K_q|j' m'> = (-1)^{j-m} 3j(j K j'; -m q m') <j||T||j'>.
// Odd (alpha-type) operators have pure-imaginary reduced elements with the
// spinor convention (F, iG); the functions below return the real factor
// with the i stripped, so two-vertex contractions carry an overall factor
// i^2 = -1 (applied where the vertices are contracted).
namespace qedmb::angular {

enum class Kind { coulomb, gaunt, scalar_retardation };

struct Multipole {
  int l = 0;          // photon angular momentum
  double k = 0.0;     // photon momentum (1/Bohr); ignored for coulomb
  Kind kind = Kind::coulomb;
};

struct ReducedMatrixElement {
  int kappa_bra = 0, n_bra = 0;
  int kappa_ket = 0, n_ket = 0;
  Multipole multipole;
  double radial = 0.0;    // grid radial integral
  double angular = 0.0;   // spinor angular factor (when factorizable)
  double value = 0.0;     // the reduced matrix element
  bool selection_zero = false;
  std::string zero_reason;
};

// <kappa_a || C^L || kappa_b> between spinor spherical harmonics; zero
// unless the large-component parities satisfy l_a + L + l_b even.
double cl_reduced(int kappa_a, int kappa_b, int L);

// <kappa_a || {sigma C^lambda}^K || kappa_b> (sigma coupled first).
double sigma_cl_reduced(int kappa_a, int kappa_b, int lambda, int K);

// Rank-K component of the Gaunt vertex alpha j_l(kr) C^l,
// K in {l-1, l, l+1}.  value = (1/i) <a || j_l {alpha C^l}^K || b>.
ReducedMatrixElement gaunt_potential_rme(const radial::Orbital& a,
                                         const radial::Orbital& b, int l,
                                         int tensor_rank, double k,
                                         const radial::RadialGrid& grid);

// Scalar-retardation vertex (rank l):
//   sqrt((l+1)(2l+3)) j_{l+1}(kr) {alpha C^{l+1}}^l
// + sqrt(l(2l-1))     j_{l-1}(kr) {alpha C^{l-1}}^l,
// the second branch absent for l = 0.
ReducedMatrixElement scalar_retardation_rme(const radial::Orbital& a,
                                            const radial::Orbital& b, int l,
                                            double k,
                                            const radial::RadialGrid& grid);

// Slater radial integral R^L(ac, bd) with the r_<^L / r_>^{L+1} kernel
// over the densities (F_a F_c + G_a G_c)(r1) and (F_b F_d + G_b G_d)(r2).
double slater_rl(const radial::Orbital& a, const radial::Orbital& c,
                 const radial::Orbital& b, const radial::Orbital& d, int L,
                 const radial::RadialGrid& grid);

// Multipole strength <a||C^L||c> <b||C^L||d> R^L(ac, bd) entering the
// coupled Coulomb matrix elements.
double coulomb_multipole_rme(const radial::Orbital& a,
                             const radial::Orbital& c,
                             const radial::Orbital& b,
                             const radial::Orbital& d, int L,
                             const radial::RadialGrid& grid);

// One term of the separated interaction f(k): the coefficient multiplies
// (e^2 k / 4 pi^2) V^l(k r_1) . V^l(k r_2) with e^2 k / 4 pi^2 = k / pi
// in Hartree atomic units.
struct FTerm {
  Kind kind;
  int l;
  double coefficient;  // -(2l+1) for Gaunt, +1/(2l+1) for scalar ret.
};

std::vector<FTerm> coulomb_gauge_f_assemble(int l_max);

// e^2 k / (4 pi^2) in atomic units.
inline double f_prefactor(double k) { return k / M_PI; }

}  // namespace qedmb::angular
