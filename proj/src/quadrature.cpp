#include "qedmb/quadrature.hpp"

#include <cmath>

namespace qedmb::quadrature {

Rule gauss_legendre(int n) {
  if (n < 1) throw InvalidGrid("gauss_legendre: n < 1");
  Rule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p1 = 0.0, p2 = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      p1 = 1.0;
      p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * x * p2 - double(j) * p3) / (j + 1.0);
      }
      const double dp = n * (x * p1 - p2) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double dp = n * (x * p1 - p2) / (x * x - 1.0);
    rule.x[i] = -x;
    rule.x[n - 1 - i] = x;
    rule.w[i] = rule.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

Rule gauss_legendre(int n, double a, double b) {
  Rule rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    rule.x[i] = mid + half * rule.x[i];
    rule.w[i] *= half;
  }
  return rule;
}

KGrid make_kgrid(int n_nodes, double k0, std::vector<double> poles) {
  if (n_nodes < 20) throw InvalidGrid("make_kgrid: need at least 20 nodes");
  if (!(k0 > 0.0)) throw InvalidGrid("make_kgrid: k0 must be positive");
  KGrid grid;
  grid.k0 = k0;
  const Rule rule = gauss_legendre(n_nodes);
  grid.t = rule.x;
  grid.wt = rule.w;
  grid.k.resize(n_nodes);
  grid.w.resize(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    const double t = rule.x[i];
    grid.k[i] = k0 * (1.0 + t) / (1.0 - t);
    grid.w[i] = rule.w[i] * 2.0 * k0 / ((1.0 - t) * (1.0 - t));
  }
  for (double p : poles) {
    if (!(p > 0.0)) throw InvalidGrid("make_kgrid: poles must be positive");
    for (int i = 0; i < n_nodes; ++i)
      if (std::abs(grid.k[i] - p) < 1e-10 * std::max(1.0, p))
        throw InvalidGrid("make_kgrid: node collides with pole");
  }
  grid.poles = std::move(poles);
  return grid;
}

double integrate(const KGrid& grid, std::span<const double> values) {
  double sum = 0.0;
  for (int i = 0; i < grid.size(); ++i) sum += grid.w[i] * values[i];
  return sum;
}

double integrate_pv(const KGrid& grid, std::span<const double> values,
                    std::span<const Pole> poles) {
  double sum = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    double v = grid.w[i] * values[i];
    // subtract the singular parts in the mapped variable, where the
    // principal-value integral of 1/(t_p - t) over [-1, 1] is finite
    for (const auto& pole : poles) {
      const double tp = grid.t_of(pole.k);
      v -= grid.wt[i] * pole.residue / (tp - grid.t[i]);
    }
    sum += v;
  }
  for (const auto& pole : poles) {
    const double tp = grid.t_of(pole.k);
    sum += pole.residue * std::log((1.0 + tp) / (1.0 - tp));
  }
  return sum;
}

}  // namespace qedmb::quadrature
