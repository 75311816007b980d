#include "qedmb/diffcalc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qedmb::diffcalc {

namespace {

double tuple_scale(std::span<const double> energies) {
  double s = 1.0;
  for (double e : energies) s = std::max(s, std::abs(e));
  return s;
}

// Node spread used for derivative evaluation at e.  Kept inside the
// declared analytic radius when one is given.
double node_spread(const EnergyFunction& f, double e, int order) {
  double s = 0.25 * std::max(1.0, std::abs(e));
  if (f.analytic_radius > 0.0)
    s = std::min(s, 0.25 * f.analytic_radius / double(order + 2));
  return s;
}

// Divided difference over strictly separated, sorted nodes.
Matrix dd_separated(const EnergyFunction& f, std::span<const double> e) {
  const int n = int(e.size()) - 1;
  std::vector<Matrix> col;
  col.reserve(e.size());
  for (double x : e) col.push_back(f(x));
  for (int level = 1; level <= n; ++level)
    for (int i = 0; i + level <= n; ++i)
      col[i] = (col[i + 1] - col[i]) / (e[i + level] - e[i]);
  return col[0];
}

// n-th divided difference at nodes symmetric about e with half-spread s.
// Node count n+1; symmetry kills the leading odd Taylor term.
Matrix dd_symmetric(const EnergyFunction& f, double e, int n, double s) {
  std::vector<double> nodes(n + 1);
  for (int i = 0; i <= n; ++i) nodes[i] = e + s * (2.0 * i - n) / double(n);
  if (n == 0) nodes[0] = e;
  return dd_separated(f, nodes);
}

// Confluent divided difference: clusters of nearly equal energies are
// collapsed through derivative limits, distinct clusters through the
// standard recursion.
Matrix dd_confluent(const EnergyFunction& f, std::span<const double> e,
                    double scale) {
  const int n = int(e.size()) - 1;
  if (n == 0) return f(e[0]);
  if (std::abs(e[n] - e[0]) < degeneracy_threshold * scale) {
    const double mean =
        std::accumulate(e.begin(), e.end(), 0.0) / double(e.size());
    return degenerate_limit(f, mean, n).value;
  }
  const Matrix upper = dd_confluent(f, e.subspan(1), scale);
  const Matrix lower = dd_confluent(f, e.first(e.size() - 1), scale);
  return (upper - lower) / (e[n] - e[0]);
}

}  // namespace

Matrix diff_ratio(const EnergyFunction& f, double e0, double e1) {
  const double scale = std::max({1.0, std::abs(e0), std::abs(e1)});
  if (std::abs(e0 - e1) < degeneracy_threshold * scale)
    throw DegenerateEnergies("diff_ratio: energies coincide within threshold");
  return (f(e0) - f(e1)) / (e0 - e1);
}

Matrix diff_ratio_n(const EnergyFunction& f,
                    std::span<const double> energies) {
  if (energies.empty())
    throw std::invalid_argument("diff_ratio_n: empty energy tuple");
  std::vector<double> sorted(energies.begin(), energies.end());
  std::sort(sorted.begin(), sorted.end());
  return dd_confluent(f, sorted, tuple_scale(sorted));
}

LimitResult degenerate_limit(const EnergyFunction& f, double e, int order) {
  if (order < 0) throw std::invalid_argument("degenerate_limit: order < 0");
  if (order == 0) return {f(e), 0.0};
  const double s = node_spread(f, e, order);
  // dd over symmetric nodes = (1/n!) f^(n)(e) + c2 s^2 + c4 s^4 + ...;
  // two halvings remove s^2 and s^4, exact through degree order+5.
  const Matrix d1 = dd_symmetric(f, e, order, s);
  const Matrix d2 = dd_symmetric(f, e, order, 0.5 * s);
  const Matrix d4 = dd_symmetric(f, e, order, 0.25 * s);
  const Matrix r1 = (4.0 * d2 - d1) / 3.0;
  const Matrix r2 = (4.0 * d4 - d2) / 3.0;
  Matrix value = (16.0 * r2 - r1) / 15.0;
  const double tol = (r2 - r1).cwiseAbs().maxCoeff() / 15.0 +
                     (d4 - d2).cwiseAbs().maxCoeff() * 1e-10;
  return {std::move(value), tol};
}

Matrix leibniz_expand(int order, const EnergyFunction& a,
                      const EnergyFunction& b,
                      std::span<const double> energies) {
  if (int(energies.size()) != order + 1)
    throw std::invalid_argument("leibniz_expand: need order+1 energies");
  Matrix sum;
  for (int m = 0; m <= order; ++m) {
    const Matrix da = diff_ratio_n(a, energies.first(m + 1));
    const Matrix db = diff_ratio_n(b, energies.subspan(m));
    if (m == 0)
      sum = da * db;
    else
      sum += da * db;
  }
  return sum;
}

Matrix veff_power_diff(std::span<const EnergyFunction> chain, double e0,
                       double e1) {
  if (chain.empty())
    throw std::invalid_argument("veff_power_diff: empty chain");
  Matrix tail = diff_ratio(chain.back(), e0, e1);
  for (int i = int(chain.size()) - 2; i >= 0; --i) tail = chain[i](e0)*tail;
  return tail;
}

}  // namespace qedmb::diffcalc
