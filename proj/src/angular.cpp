#include "qedmb/angular.hpp"

#include <cmath>

#include "qedmb/bessel.hpp"
#include "qedmb/wigner.hpp"

namespace qedmb::angular {

namespace {

using radial::kappa_to_j;
using radial::kappa_to_l;

double l_reduced_cl(int l_a, int lambda, int l_b) {
  if ((l_a + lambda + l_b) % 2) return 0.0;
  const double sign = l_a % 2 ? -1.0 : 1.0;
  return sign * std::sqrt(double((2 * l_a + 1) * (2 * l_b + 1))) *
         wigner::three_j(l_a, lambda, l_b, 0, 0, 0);
}

// Radial integrals int dr j_lambda(kr) F_a G_b and (G_a F_b).
std::pair<double, double> fg_integrals(const radial::Orbital& a,
                                       const radial::Orbital& b, int lambda,
                                       double k,
                                       const radial::RadialGrid& grid) {
  double ifg = 0.0, igf = 0.0;
  for (int i = 0; i < grid.n; ++i) {
    const double j = bessel::sph_j(lambda, k * grid.r[i]);
    ifg += grid.w[i] * j * a.f[i] * b.g[i];
    igf += grid.w[i] * j * a.g[i] * b.f[i];
  }
  return {ifg, igf};
}

// Core of the odd-vertex reduced element: radial j_lambda kernel with the
// {sigma C^lambda}^K angular factors on the cross (large-small) blocks.
double alpha_cl_vertex(const radial::Orbital& a, const radial::Orbital& b,
                       int lambda, int tensor_rank, double k,
                       const radial::RadialGrid& grid, double* angular_out) {
  const double s1 = sigma_cl_reduced(a.kappa, -b.kappa, lambda, tensor_rank);
  const double s2 = sigma_cl_reduced(-a.kappa, b.kappa, lambda, tensor_rank);
  if (angular_out) *angular_out = s1;
  if (s1 == 0.0 && s2 == 0.0) return 0.0;
  const auto [ifg, igf] = fg_integrals(a, b, lambda, k, grid);
  return ifg * s1 - igf * s2;
}

bool vertex_selection_zero(int kappa_a, int kappa_b, int lambda,
                           int tensor_rank, std::string* reason) {
  const double j_a = kappa_to_j(kappa_a), j_b = kappa_to_j(kappa_b);
  if (!wigner::triangle(j_a, double(tensor_rank), j_b)) {
    *reason = "triangle(j_a, K, j_b)";
    return true;
  }
  // odd operator: the large component of a meets the small of b
  const int la = kappa_to_l(kappa_a);
  const int lb = kappa_to_l(kappa_b);
  if ((la + lambda + lb) % 2 == 0) {
    *reason = "parity";
    return true;
  }
  return false;
}

}  // namespace

double cl_reduced(int kappa_a, int kappa_b, int L) {
  const int l_a = kappa_to_l(kappa_a), l_b = kappa_to_l(kappa_b);
  if ((l_a + L + l_b) % 2) return 0.0;
  const double j_a = kappa_to_j(kappa_a), j_b = kappa_to_j(kappa_b);
  const double sign = std::lround(j_a + 0.5) % 2 ? -1.0 : 1.0;
  return sign * std::sqrt((2.0 * j_a + 1.0) * (2.0 * j_b + 1.0)) *
         wigner::three_j(j_a, L, j_b, 0.5, 0.0, -0.5);
}

double sigma_cl_reduced(int kappa_a, int kappa_b, int lambda, int K) {
  const int l_a = kappa_to_l(kappa_a), l_b = kappa_to_l(kappa_b);
  const double j_a = kappa_to_j(kappa_a), j_b = kappa_to_j(kappa_b);
  const double lred = l_reduced_cl(l_a, lambda, l_b);
  if (lred == 0.0) return 0.0;
  const double nine = wigner::nine_j(l_a, l_b, lambda, 0.5, 0.5, 1.0,
                                     j_a, j_b, K);
  const double flip = (1 + lambda - K) % 2 ? -1.0 : 1.0;  // {C sigma}->{sigma C}
  return flip *
         std::sqrt((2.0 * j_a + 1.0) * (2.0 * K + 1.0) * (2.0 * j_b + 1.0)) *
         nine * lred * std::sqrt(6.0);
}

ReducedMatrixElement gaunt_potential_rme(const radial::Orbital& a,
                                         const radial::Orbital& b, int l,
                                         int tensor_rank, double k,
                                         const radial::RadialGrid& grid) {
  ReducedMatrixElement rme;
  rme.kappa_bra = a.kappa;
  rme.n_bra = a.n_principal;
  rme.kappa_ket = b.kappa;
  rme.n_ket = b.n_principal;
  rme.multipole = {l, k, Kind::gaunt};
  std::string reason;
  if (vertex_selection_zero(a.kappa, b.kappa, l, tensor_rank, &reason)) {
    rme.selection_zero = true;
    rme.zero_reason = reason;
    return rme;
  }
  rme.value = alpha_cl_vertex(a, b, l, tensor_rank, k, grid, &rme.angular);
  rme.radial = rme.angular != 0.0 ? rme.value / rme.angular : 0.0;
  return rme;
}

ReducedMatrixElement scalar_retardation_rme(const radial::Orbital& a,
                                            const radial::Orbital& b, int l,
                                            double k,
                                            const radial::RadialGrid& grid) {
  ReducedMatrixElement rme;
  rme.kappa_bra = a.kappa;
  rme.n_bra = a.n_principal;
  rme.kappa_ket = b.kappa;
  rme.n_ket = b.n_principal;
  rme.multipole = {l, k, Kind::scalar_retardation};
  std::string r1, r2;
  const bool zero_plus = vertex_selection_zero(a.kappa, b.kappa, l + 1, l, &r1);
  const bool zero_minus =
      l == 0 || vertex_selection_zero(a.kappa, b.kappa, l - 1, l, &r2);
  if (zero_plus && zero_minus) {
    rme.selection_zero = true;
    rme.zero_reason = r1;
    return rme;
  }
  double value = 0.0;
  if (!zero_plus)
    value += std::sqrt(double((l + 1) * (2 * l + 3))) *
             alpha_cl_vertex(a, b, l + 1, l, k, grid, &rme.angular);
  if (!zero_minus)
    value += std::sqrt(double(l * (2 * l - 1))) *
             alpha_cl_vertex(a, b, l - 1, l, k, grid, nullptr);
  rme.value = value;
  return rme;
}

void cumulative_forward(const Eigen::VectorXd& g, double h,
                        Eigen::VectorXd& out) {
  // out[i] = int_{x_0}^{x_i} g dx, fourth-order Adams-Moulton steps with
  // trapezoid/Simpson starters.
  const int n = int(g.size());
  out.resize(n);
  out[0] = 0.0;
  if (n > 1) out[1] = 0.5 * h * (g[0] + g[1]);
  if (n > 2) out[2] = h / 3.0 * (g[0] + 4.0 * g[1] + g[2]);
  for (int i = 3; i < n; ++i) {
    const double gp1 = (i + 1 < n)
                           ? g[i + 1]
                           : 3.0 * g[i] - 3.0 * g[i - 1] + g[i - 2];
    out[i] = out[i - 1] +
             h / 24.0 * (-g[i - 2] + 13.0 * g[i - 1] + 13.0 * g[i] - gp1);
  }
}

double slater_rl(const radial::Orbital& a, const radial::Orbital& c,
                 const radial::Orbital& b, const radial::Orbital& d, int L,
                 const radial::RadialGrid& grid) {
  const int n = grid.n;
  // Y_L(r) = r^-(L+1) int_0^r rho s^L ds + r^L int_r^inf rho s^-(L+1) ds
  // with the cumulative integrals done to fourth order in the log
  // variable (the integrands are smooth; only Y itself has the diagonal
  // kink, which the node-exact split avoids).
  Eigen::VectorXd glo(n), ghi(n), rho2(n);
  for (int i = 0; i < n; ++i) {
    const double rho1 = a.f[i] * c.f[i] + a.g[i] * c.g[i];
    rho2[i] = b.f[i] * d.f[i] + b.g[i] * d.g[i];
    const double pl = std::pow(grid.r[i], L);
    glo[i] = rho1 * pl * grid.r[i];                 // d x measure: r dr
    ghi[i] = rho1 / pl;                             // rho r^-(L+1) * r
  }
  Eigen::VectorXd alo, ahi;
  cumulative_forward(glo, grid.h, alo);
  Eigen::VectorXd ghi_rev = ghi.reverse();
  cumulative_forward(ghi_rev, grid.h, ahi);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double pl = std::pow(grid.r[i], L);
    const double y = alo[i] / (pl * grid.r[i]) + ahi[n - 1 - i] * pl;
    total += grid.w[i] * rho2[i] * y;
  }
  return total;
}

double coulomb_multipole_rme(const radial::Orbital& a,
                             const radial::Orbital& c,
                             const radial::Orbital& b,
                             const radial::Orbital& d, int L,
                             const radial::RadialGrid& grid) {
  const double ang = cl_reduced(a.kappa, c.kappa, L) *
                     cl_reduced(b.kappa, d.kappa, L);
  if (ang == 0.0) return 0.0;
  return ang * slater_rl(a, c, b, d, L, grid);
}

std::vector<FTerm> coulomb_gauge_f_assemble(int l_max) {
  std::vector<FTerm> terms;
  for (int l = 0; l <= l_max; ++l) {
    terms.push_back({Kind::gaunt, l, -double(2 * l + 1)});
    terms.push_back({Kind::scalar_retardation, l, 1.0 / double(2 * l + 1)});
  }
  return terms;
}

}  // namespace qedmb::angular
