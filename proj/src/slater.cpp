#include "qedmb/slater.hpp"

#include <cmath>

#include "qedmb/angular.hpp"
#include "qedmb/wigner.hpp"

namespace qedmb::slater {

void cumulative_log_integral(const Eigen::VectorXd& g, double h,
                             Eigen::VectorXd& out) {
  const int n = int(g.size());
  out.resize(n);
  out[0] = 0.0;
  if (n > 1) out[1] = 0.5 * h * (g[0] + g[1]);
  if (n > 2) out[2] = h / 3.0 * (g[0] + 4.0 * g[1] + g[2]);
  for (int i = 3; i < n; ++i) {
    const double gp1 =
        (i + 1 < n) ? g[i + 1] : 3.0 * g[i] - 3.0 * g[i - 1] + g[i - 2];
    out[i] = out[i - 1] +
             h / 24.0 * (-g[i - 2] + 13.0 * g[i - 1] + 13.0 * g[i] - gp1);
  }
}

SlaterEngine::SlaterEngine(const BasisSet& basis, int l_multipole_max)
    : basis_(&basis), lmax_(l_multipole_max) {}

const Eigen::VectorXd& SlaterEngine::y_function(OrbitalRef a, OrbitalRef c,
                                                int L) {
  int ga = basis_->global_index(a), gc = basis_->global_index(c);
  if (ga > gc) std::swap(ga, gc);
  const long long key =
      (static_cast<long long>(ga) * basis_->total() + gc) * 32 + L;
  auto it = y_cache_.find(key);
  if (it != y_cache_.end()) return it->second;

  const auto& grid = basis_->grid();
  const auto& oa = basis_->orb(a);
  const auto& oc = basis_->orb(c);
  const int n = grid.n;
  Eigen::VectorXd glo(n), ghi(n);
  for (int i = 0; i < n; ++i) {
    const double rho = oa.f[i] * oc.f[i] + oa.g[i] * oc.g[i];
    const double pl = std::pow(grid.r[i], L);
    glo[i] = rho * pl * grid.r[i];
    ghi[i] = rho / pl;
  }
  Eigen::VectorXd alo, ahi;
  cumulative_log_integral(glo, grid.h, alo);
  Eigen::VectorXd rev = ghi.reverse();
  cumulative_log_integral(rev, grid.h, ahi);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const double pl = std::pow(grid.r[i], L);
    y[i] = alo[i] / (pl * grid.r[i]) + ahi[n - 1 - i] * pl;
  }
  return y_cache_.emplace(key, std::move(y)).first->second;
}

double SlaterEngine::rk(OrbitalRef a, OrbitalRef c, OrbitalRef b,
                        OrbitalRef d, int L) {
  const auto& grid = basis_->grid();
  const auto& y = y_function(a, c, L);
  const auto& ob = basis_->orb(b);
  const auto& od = basis_->orb(d);
  double sum = 0.0;
  for (int i = 0; i < grid.n; ++i)
    sum += grid.w[i] * (ob.f[i] * od.f[i] + ob.g[i] * od.g[i]) * y[i];
  return sum;
}

double SlaterEngine::coulomb_straight(OrbitalRef a, OrbitalRef b,
                                      OrbitalRef c, OrbitalRef d,
                                      int two_j) {
  const double ja = radial::kappa_to_j(a.kappa);
  const double jb = radial::kappa_to_j(b.kappa);
  const double jc = radial::kappa_to_j(c.kappa);
  const double jd = radial::kappa_to_j(d.kappa);
  const double j = 0.5 * two_j;
  const int phase_pow = int(std::lround(jb + jc + j));
  const double phase = phase_pow % 2 ? -1.0 : 1.0;
  double sum = 0.0;
  for (int L = 0; L <= lmax_; ++L) {
    const double ang = angular::cl_reduced(a.kappa, c.kappa, L) *
                       angular::cl_reduced(b.kappa, d.kappa, L);
    if (ang == 0.0) continue;
    const double six = wigner::six_j(ja, jb, j, jd, jc, L);
    if (six == 0.0) continue;
    sum += six * ang * rk(a, c, b, d, L);
  }
  return phase * sum;
}

double SlaterEngine::coulomb_straight(const Pair& ab, const Pair& cd,
                                      int two_j) {
  return coulomb_straight(ab.x, ab.y, cd.x, cd.y, two_j);
}

double SlaterEngine::coulomb_element(const Pair& ab, const Pair& cd,
                                     int two_j, int sector) {
  const double n_ab = channels::pair_norm(*basis_, ab);
  const double n_cd = channels::pair_norm(*basis_, cd);
  const double direct = coulomb_straight(ab.x, ab.y, cd.x, cd.y, two_j);
  const double exch = coulomb_straight(ab.x, ab.y, cd.y, cd.x, two_j);
  const double sigma = channels::exchange_phase(*basis_, cd, two_j);
  return 2.0 * n_ab * n_cd * (direct + sector * sigma * exch);
}

Eigen::MatrixXd SlaterEngine::coulomb_matrix(const PairBasis& pb,
                                             int sector) {
  const int n = pb.size();
  Eigen::MatrixXd v(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      v(i, j) = coulomb_element(pb.pairs[i], pb.pairs[j], pb.two_j, sector);
      v(j, i) = v(i, j);
    }
  return v;
}

}  // namespace qedmb::slater
