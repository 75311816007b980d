#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

// Difference-ratio calculus for matrix-valued functions of a real energy
// parameter.  The n-th difference ratio is the Newton divided difference
// over an energy tuple; degenerate tuples reduce to factorial-weighted
// derivatives.  These are the building blocks of model-space (fold)
// contributions.
namespace qedmb::diffcalc {

using Matrix = Eigen::MatrixXd;

// |e - e'| below this is treated as degenerate (Hartree).
inline constexpr double degeneracy_threshold = 1e-8;

struct DegenerateEnergies : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A(E): pure function of the energy argument.  Evaluations must be
// reproducible; the matrix dimension may not change with E.
struct EnergyFunction {
  std::function<Matrix(double)> eval;
  // Smoothness order the caller vouches for (>= n for degenerate limits).
  int smooth_order = 8;
  // Separation scale over which eval is well approximated by its Taylor
  // series; node spacings for derivative evaluation stay below a quarter
  // of this.  Nonpositive means "no constraint".
  double analytic_radius = 0.0;

  Matrix operator()(double e) const { return eval(e); }
};

// Result of a derivative-based limit, with an error estimate from the
// extrapolation step.
struct LimitResult {
  Matrix value;
  double tolerance = 0.0;
};

// First-order ratio (A(e0) - A(e1)) / (e0 - e1).
// Throws DegenerateEnergies when the two energies are closer than the
// threshold; callers must switch to degenerate_limit there.
Matrix diff_ratio(const EnergyFunction& f, double e0, double e1);

// n-th order nested ratio over n+1 energies (divided difference).  Energy
// clusters closer than the threshold are handled confluently through
// degenerate_limit, so mixed near-degenerate tuples are fine.
Matrix diff_ratio_n(const EnergyFunction& f, std::span<const double> energies);

// (1/n!) d^n f / dE^n at e.  Exact (to roundoff) for polynomials of degree
// <= smooth_order; implemented as a symmetric-node divided difference with
// one Richardson halving of the node spread.
LimitResult degenerate_limit(const EnergyFunction& f, double e, int order);

// Product rule sum_{m=0}^{n} d^m A * d^(n-m) B with the energy threading
// that makes it equal diff_ratio_n(A*B): d^m A runs over (E..E^m), the
// right factor over (E^m..E^n), so the factor at the split energy is
// shared and the E^n evaluation of B is untouched by the outer ratios.
Matrix leibniz_expand(int order, const EnergyFunction& a,
                      const EnergyFunction& b,
                      std::span<const double> energies);

// First-order ratio of an ordered product of effective interactions where
// only the rightmost factor is differentiated: the left factors are frozen
// at the first tuple energy.  energies = (E, E').
Matrix veff_power_diff(std::span<const EnergyFunction> chain, double e0,
                       double e1);

}  // namespace qedmb::diffcalc
