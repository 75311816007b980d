#pragma once

#include <Eigen/Dense>
#include <span>
#include <stdexcept>
#include <vector>

// Gauss-Legendre rules and the mapped photon-momentum grid with
// principal-value pole handling (subtract-and-add in the compact mapped
// variable, widths discarded).
namespace qedmb::quadrature {

struct InvalidGrid : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Rule {
  Eigen::VectorXd x, w;
};

Rule gauss_legendre(int n);                      // on [-1, 1]
Rule gauss_legendre(int n, double a, double b);  // affine image

struct Pole {
  double k;        // location on (0, inf)
  double residue;  // g(k_p) for an integrand g(k)/(k_p - k) near the pole
};

// Semi-infinite grid k = k0 (1+t)/(1-t) over Gauss-Legendre t-nodes.
struct KGrid {
  double k0 = 1.0;
  Eigen::VectorXd k;    // mapped nodes
  Eigen::VectorXd w;    // full weights  w_t * dk/dt
  Eigen::VectorXd t;    // underlying t-nodes
  Eigen::VectorXd wt;   // underlying t-weights
  std::vector<double> poles;

  int size() const { return int(k.size()); }
  double t_of(double kk) const { return (kk - k0) / (kk + k0); }
};

// Declared poles must be positive and separated from the nodes; the node
// set itself is pole-independent (regularization happens at integration).
KGrid make_kgrid(int n_nodes, double k0, std::vector<double> poles = {});

// Plain integral of a smooth decaying integrand sampled on the nodes.
double integrate(const KGrid& grid, std::span<const double> values);

// Principal-value integral of an integrand with simple poles: the caller
// samples the full integrand at the nodes and supplies the residue factors
// g(k_p) = lim (k_p - k) I(k).  The singular parts are subtracted at the
// nodes and added back analytically over the mapped interval.
double integrate_pv(const KGrid& grid, std::span<const double> values,
                    std::span<const Pole> poles);

}  // namespace qedmb::quadrature
