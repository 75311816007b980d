#include "qedmb/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace qedmb::bessel {

namespace {

// Ascending series j_l(x) = x^l / (2l+1)!! * sum_k (-x^2/2)^k /
// (k! (2l+2k+1)!!), adequate for x below ~l.
double series_j(int l, double x) {
  double prefac = 1.0;
  for (int i = 1; i <= l; ++i) prefac *= x / double(2 * i + 1);
  const double x2 = 0.5 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= -x2 / (double(k) * double(2 * l + 2 * k + 1));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return prefac * sum;
}

}  // namespace

double sph_j(int l, double x) {
  if (l < 0 || x < 0.0)
    throw std::invalid_argument("sph_j: need l >= 0 and x >= 0");
  if (l == 0) return x == 0.0 ? 1.0 : std::sin(x) / x;
  if (x == 0.0) return 0.0;
  if (x < std::max(1.0, 0.5 * l)) return series_j(l, x);
  return sph_j_array(l, x)[l];
}

std::vector<double> sph_j_array(int lmax, double x) {
  std::vector<double> j(lmax + 1, 0.0);
  if (x == 0.0) {
    j[0] = 1.0;
    return j;
  }
  const double j0 = std::sin(x) / x;
  if (lmax == 0) {
    j[0] = j0;
    return j;
  }
  if (x > double(lmax)) {
    // upward recursion is stable above the turning point
    j[0] = j0;
    j[1] = std::sin(x) / (x * x) - std::cos(x) / x;
    for (int l = 1; l < lmax; ++l)
      j[l + 1] = double(2 * l + 1) / x * j[l] - j[l - 1];
    return j;
  }
  // Miller's downward recursion, normalized to j_0.
  const int start = lmax + 16 + int(x);
  double jp = 0.0, jc = 1e-300;
  std::vector<double> tmp(start + 1, 0.0);
  tmp[start] = jc;
  for (int l = start; l >= 1; --l) {
    const double jm = double(2 * l + 1) / x * jc - jp;
    jp = jc;
    jc = jm;
    if (l - 1 <= lmax + 1) tmp[l - 1] = jc;
    if (std::abs(jc) > 1e250) {  // rescale to avoid overflow
      const double s = 1e-250;
      jc *= s;
      jp *= s;
      for (auto& t : tmp) t *= s;
    }
  }
  const double scale = j0 / tmp[0];
  for (int l = 0; l <= lmax; ++l) j[l] = tmp[l] * scale;
  return j;
}

double legendre_p(int l, double x) {
  if (l < 0) throw std::invalid_argument("legendre_p: l < 0");
  double pm = 1.0;
  if (l == 0) return pm;
  double pc = x;
  for (int n = 1; n < l; ++n) {
    const double pn =
        (double(2 * n + 1) * x * pc - double(n) * pm) / double(n + 1);
    pm = pc;
    pc = pn;
  }
  return pc;
}

double sph_wave_expansion_residual(double k, double r1, double r2,
                                   double cos_theta, int l_max) {
  const double r12 =
      std::sqrt(r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * cos_theta);
  const double exact = r12 == 0.0 ? k : std::sin(k * r12) / r12;
  const auto j1 = sph_j_array(l_max, k * r1);
  const auto j2 = sph_j_array(l_max, k * r2);
  double sum = 0.0;
  for (int l = 0; l <= l_max; ++l)
    sum += double(2 * l + 1) * j1[l] * j2[l] * legendre_p(l, cos_theta);
  return k * sum - exact;
}

std::pair<double, double> bessel_derivative_residuals(int l, double k,
                                                      double r) {
  const double h = 1e-5;
  auto jl = [&](double rr) { return sph_j(l, k * rr); };
  const double d = (jl(r + h) - jl(r - h)) / (2.0 * h);
  const double lhs1 = d - double(l) / r * jl(r);
  const double rhs1 = -k * sph_j(l + 1, k * r);
  const double lhs2 = d + double(l + 1) / r * jl(r);
  const double rhs2 = (l >= 1 && k > 0.0) ? k * sph_j(l - 1, k * r)
                                          : (l == 0 ? k * std::cos(k * r) / (k * r)
                                                    : 0.0);
  return {std::abs(lhs1 - rhs1), std::abs(lhs2 - rhs2)};
}

}  // namespace qedmb::bessel
