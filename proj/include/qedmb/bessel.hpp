#pragma once

#include <utility>
#include <vector>

// Spherical Bessel functions of the first kind and Legendre polynomials,
// plus the identity checks used to validate the spherical-wave machinery.
namespace qedmb::bessel {

// j_l(x), series for small argument, downward recursion otherwise.
double sph_j(int l, double x);

// j_0 .. j_lmax at one argument (one downward sweep).
std::vector<double> sph_j_array(int lmax, double x);

double legendre_p(int l, double x);

// Residual of the spherical-wave expansion
//   sin(k r12)/r12 = k sum_l (2l+1) j_l(k r1) j_l(k r2) P_l(cos theta)
// truncated at l_max, with r12 from the law of cosines.
double sph_wave_expansion_residual(double k, double r1, double r2,
                                   double cos_theta, int l_max);

// Residuals of (d/dr - l/r) j_l(kr) = -k j_{l+1}(kr) and
// (d/dr + (l+1)/r) j_l(kr) = k j_{l-1}(kr), finite differences vs closed
// form.  Returned as the pair of absolute deviations.
std::pair<double, double> bessel_derivative_residuals(int l, double k,
                                                      double r);

}  // namespace qedmb::bessel
