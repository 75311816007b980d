#include "qedmb/diffcalc.hpp"

#include <cmath>
#include <random>

#include "doctest.h"

using namespace qedmb::diffcalc;
using Eigen::MatrixXd;

namespace {

EnergyFunction scalar_poly(std::vector<double> coeffs) {
  EnergyFunction f;
  f.smooth_order = int(coeffs.size());
  f.eval = [c = std::move(coeffs)](double e) {
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * e + *it;
    MatrixXd m(1, 1);
    m(0, 0) = v;
    return m;
  };
  return f;
}

EnergyFunction monomial(int power) {
  std::vector<double> c(power + 1, 0.0);
  c[power] = 1.0;
  return scalar_poly(c);
}

// Matrix polynomial sum_k e^k C_k with random coefficient matrices.
EnergyFunction matrix_poly(int degree, int dim, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<MatrixXd> coeff(degree + 1, MatrixXd(dim, dim));
  for (auto& c : coeff)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) c(i, j) = uni(gen);
  EnergyFunction f;
  f.smooth_order = degree + 1;
  f.eval = [coeff, dim](double e) {
    MatrixXd v = MatrixXd::Zero(dim, dim);
    for (auto it = coeff.rbegin(); it != coeff.rend(); ++it) v = v * e + *it;
    return v;
  };
  return f;
}

// Five-line nested-quotient oracle, independent of the production
// recursion order.
double nested_quotient(const std::function<double(double)>& f,
                       std::vector<double> e) {
  if (e.size() == 1) return f(e[0]);
  std::vector<double> head(e.begin(), e.end() - 1);
  std::vector<double> tail(e.begin() + 1, e.end());
  return (nested_quotient(f, tail) - nested_quotient(f, head)) /
         (e.back() - e.front());
}

}  // namespace

TEST_CASE("first-order difference ratio on polynomials") {
  auto e2 = monomial(2);
  CHECK(diff_ratio(e2, 2.0, 3.0)(0, 0) == doctest::Approx(5.0).epsilon(1e-14));
  auto e3 = monomial(3);
  CHECK(diff_ratio(e3, 1.0, 2.0)(0, 0) == doctest::Approx(7.0).epsilon(1e-14));

  EnergyFunction constant;
  constant.eval = [](double) { return MatrixXd::Constant(3, 3, 4.2); };
  CHECK(diff_ratio(constant, 0.3, 1.7).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("degenerate pair throws") {
  auto f = monomial(2);
  CHECK_THROWS_AS((void)diff_ratio(f, 1.0, 1.0 + 1e-12), DegenerateEnergies);
}

TEST_CASE("nested ratios equal complete homogeneous symmetric polynomials") {
  auto e3 = monomial(3);
  const double tuple1[] = {1.0, 2.0, 3.0};
  CHECK(diff_ratio_n(e3, tuple1)(0, 0) ==
        doctest::Approx(6.0).epsilon(1e-13));  // h_1 = E + E' + E''

  auto e2 = monomial(2);
  const double tuple2[] = {0.4, -1.3, 2.7};
  CHECK(diff_ratio_n(e2, tuple2)(0, 0) ==
        doctest::Approx(1.0).epsilon(1e-13));  // leading coefficient

  // E^4 second ratio against the brute-force nested quotient.
  auto e4 = monomial(4);
  const std::vector<double> tuple3 = {1.0, 2.0, 3.0};
  const double expect =
      nested_quotient([](double e) { return e * e * e * e; }, tuple3);
  CHECK(expect == doctest::Approx(1.0 + 4.0 + 9.0 + 2.0 + 3.0 + 6.0));  // h_2
  CHECK(diff_ratio_n(e4, tuple3)(0, 0) ==
        doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("permutation symmetry of the energy tuple") {
  auto e5 = monomial(5);
  std::vector<double> tuple = {0.7, -0.2, 1.9, 3.1};
  const double ref = diff_ratio_n(e5, tuple)(0, 0);
  std::mt19937 gen(7);
  for (int trial = 0; trial < 8; ++trial) {
    std::shuffle(tuple.begin(), tuple.end(), gen);
    CHECK(diff_ratio_n(e5, tuple)(0, 0) ==
          doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("degenerate limits are factorial-weighted derivatives") {
  auto e3 = monomial(3);
  CHECK(degenerate_limit(e3, 2.0, 1).value(0, 0) ==
        doctest::Approx(12.0).epsilon(1e-13));
  CHECK(degenerate_limit(e3, 2.0, 2).value(0, 0) ==
        doctest::Approx(6.0).epsilon(1e-13));

  // limit of the nested ratio as the tuple collapses; O(h) agreement
  auto check_h = [&](double h) {
    const double tuple[] = {2.0, 2.0 + h, 2.0 + 2.0 * h};
    return std::abs(diff_ratio_n(e3, tuple)(0, 0) - 6.0);
  };
  const double d1 = check_h(1e-3);
  const double d2 = check_h(5e-4);
  CHECK(d2 < 0.7 * d1);  // shrinks roughly linearly in h
  CHECK(d2 < 5e-3);
}

TEST_CASE("degenerate limit hits 1e-12 on degree-5 matrix polynomials") {
  for (int n = 1; n <= 3; ++n) {
    auto f = matrix_poly(5, 3, 100 + unsigned(n));
    // analytic (1/n!) d^n/dE^n via term-by-term differentiation
    auto deriv = [&](double e) {
      const double h = 0.5;  // exact for polynomials: use dd of high order
      (void)h;
      return e;
    };
    (void)deriv;
    const double e0 = 1.3;
    // build analytic derivative from finite Vandermonde fit at exact nodes
    MatrixXd expect = MatrixXd::Zero(3, 3);
    {
      // reconstruct coefficients by sampling at 7 nodes
      Eigen::MatrixXd vand(7, 7);
      std::vector<MatrixXd> vals;
      for (int i = 0; i < 7; ++i) {
        const double x = -1.5 + 0.5 * i;
        vals.push_back(f(x));
        for (int j = 0; j < 7; ++j) vand(i, j) = std::pow(x, j);
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(vand);
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
          Eigen::VectorXd y(7);
          for (int i = 0; i < 7; ++i) y[i] = vals[i](r, c);
          Eigen::VectorXd coef = lu.solve(y);
          double d = 0.0;
          for (int j = n; j <= 6; ++j) {
            double fac = 1.0;
            for (int t = 0; t < n; ++t) fac *= double(j - t);
            d += coef[j] * fac * std::pow(e0, j - n) ;
          }
          double nfac = 1.0;
          for (int t = 2; t <= n; ++t) nfac *= t;
          expect(r, c) = d / nfac;
        }
    }
    const MatrixXd got = degenerate_limit(f, e0, n).value;
    CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-12 *
          std::max(1.0, expect.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("leibniz expansion matches the ratio of the product") {
  // trivial: constants differentiate to zero
  EnergyFunction ident;
  ident.eval = [](double) { return MatrixXd::Identity(2, 2); };
  const double t2[] = {1.0, 2.0};
  CHECK(leibniz_expand(1, ident, ident, t2).cwiseAbs().maxCoeff() < 1e-15);

  // A = B = E: first ratio of E^2 is E + E'
  auto e1 = monomial(1);
  CHECK(leibniz_expand(1, e1, e1, t2)(0, 0) ==
        doctest::Approx(3.0).epsilon(1e-14));

  // A = E^2, B = E^3 at n = 2 equals the nested ratio of E^5
  auto a = monomial(2), b = monomial(3), ab = monomial(5);
  const double t3[] = {1.0, 2.0, 3.0};
  CHECK(leibniz_expand(2, a, b, t3)(0, 0) ==
        doctest::Approx(diff_ratio_n(ab, t3)(0, 0)).epsilon(1e-13));
}

TEST_CASE("leibniz rule on random matrix polynomials, degree <= 5, n <= 3") {
  std::mt19937 gen(42);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  for (int n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 6; ++trial) {
      const int da = trial % 3 + 1, db = 5 - da > 2 ? 2 + trial % 2 : 1;
      auto a = matrix_poly(da, 3, 10 * n + trial);
      auto b = matrix_poly(db, 3, 200 + 10 * n + trial);
      EnergyFunction prod;
      prod.smooth_order = da + db + 1;
      prod.eval = [a, b](double e) -> MatrixXd { return a(e) * b(e); };
      std::vector<double> tuple(n + 1);
      for (auto& t : tuple) t = uni(gen);
      const MatrixXd lhs = leibniz_expand(n, a, b, tuple);
      const MatrixXd rhs = diff_ratio_n(prod, tuple);
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() <
            1e-12 * std::max(1.0, rhs.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("veff power difference freezes left factors") {
  // n = 1 reduces to the plain ratio
  auto v = monomial(2);
  std::vector<EnergyFunction> chain1 = {v};
  CHECK(veff_power_diff(chain1, 2.0, 3.0)(0, 0) ==
        doctest::Approx(5.0).epsilon(1e-14));

  // scalar V(E) = E, n = 2: (E*E - E*E')/(E-E') = E
  auto lin = monomial(1);
  std::vector<EnergyFunction> chain2 = {lin, lin};
  CHECK(veff_power_diff(chain2, 1.7, 0.4)(0, 0) ==
        doctest::Approx(1.7).epsilon(1e-14));

  // n = 3 random 2x2 polynomial against the frozen-left-factor quotient
  auto m = matrix_poly(3, 2, 77);
  std::vector<EnergyFunction> chain3 = {m, m, m};
  const double e0 = 0.9, e1 = -0.6;
  const MatrixXd direct =
      m(e0) * m(e0) * ((m(e0) - m(e1)) / (e0 - e1));
  CHECK((veff_power_diff(chain3, e0, e1) - direct).cwiseAbs().maxCoeff() <
        1e-13);
}
