#pragma once

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

// Exponential radial grid and the discretized point-nucleus Dirac
// spectrum per symmetry kappa (Furry picture), including the
// negative-energy branch.
namespace qedmb::radial {

using Vector = Eigen::VectorXd;

inline constexpr double default_c = 137.035999;  // inverse fine-structure

struct InvalidGrid : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct SupercriticalZ : std::domain_error {
  using std::domain_error::domain_error;
};
struct DiagonalizationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RadialGrid {
  int n = 0;
  Vector r;       // strictly increasing, r[0] > 0 (Bohr)
  Vector w;       // integration weights, sum w_i f(r_i) ~ int_0^inf f dr
  double r_min = 0.0, r_max = 0.0;
  double h = 0.0;  // exponential step in ln r
};

// r_i = r_min exp(h (i-1)), h = ln(r_max/r_min)/(n-1).  Trapezoidal
// weights in the logarithmic variable; the first weight carries the
// geometric tail sum for [0, r_min) so smooth integrands keep their full
// integral, the last is halved.
RadialGrid make_grid(int n, double r_min, double r_max);

// Orbital angular momentum of the large component for symmetry kappa.
inline int kappa_to_l(int kappa) { return kappa > 0 ? kappa : -kappa - 1; }
inline double kappa_to_j(int kappa) { return std::abs(kappa) - 0.5; }
// Lowest principal quantum number carrying this kappa.
inline int kappa_n_min(int kappa) { return kappa > 0 ? kappa + 1 : -kappa; }

struct Orbital {
  int kappa = 0;
  int index = 0;            // position within the kappa spectrum
  double energy = 0.0;      // Hartree, rest mass subtracted
  double raw_energy = 0.0;  // pre-shift discrete eigenvalue
  Vector f, g;              // large/small reduced radial components
  bool negative_energy = false;
  int n_principal = 0;      // 0 unless identified as a bound state

  std::string label() const;
};

// Point-nucleus Sommerfeld energy (rest mass subtracted).
double sommerfeld_energy(double z, int n, int kappa, double c = default_c);

// Discretizes the radial Dirac operator on the grid (staggered two-point
// differences in ln r, symmetric 2N x 2N matrix, hard wall at r_max),
// diagonalizes, normalizes with the grid weights, and shifts identified
// bound-state energies onto the Sommerfeld values (raw values retained).
std::vector<Orbital> dirac_spectrum(double z, int kappa,
                                    const RadialGrid& grid,
                                    double c = default_c);

struct SpectrumSet {
  double z = 0.0;
  double c = default_c;
  std::shared_ptr<const RadialGrid> grid;
  std::map<int, std::vector<Orbital>> by_kappa;
  bool includes_negative = true;

  const Orbital& bound(int n, int kappa) const;  // by principal number
};

SpectrumSet build_spectrum(double z, const std::vector<int>& kappas,
                           const RadialGrid& grid, double c = default_c);

// Positive-energy view when include_negative is off; idempotent.
SpectrumSet nvp_filter(const SpectrumSet& spec, bool include_negative);

// Plain-text per-kappa table of (index, energy, branch flag).
void dump_spectrum(const SpectrumSet& spec, std::ostream& os);

}  // namespace qedmb::radial
