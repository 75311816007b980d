#include "qedmb/radial.hpp"

#include <cmath>

#include "doctest.h"

using namespace qedmb::radial;

TEST_CASE("exponential grid geometry") {
  auto g = make_grid(3, 1.0, 4.0);
  CHECK(g.r[0] == doctest::Approx(1.0));
  CHECK(g.r[1] == doctest::Approx(2.0));
  CHECK(g.r[2] == doctest::Approx(4.0));
  for (int i = 1; i < g.n; ++i) CHECK(g.r[i] > g.r[i - 1]);

  CHECK_THROWS_AS((void)make_grid(1, 1.0, 2.0), InvalidGrid);
  CHECK_THROWS_AS((void)make_grid(100, -1.0, 2.0), InvalidGrid);
  CHECK_THROWS_AS((void)make_grid(100, 3.0, 2.0), InvalidGrid);
}

TEST_CASE("grid weights integrate exp(-r) over the half line") {
  auto g = make_grid(120, 1e-5, 60.0);
  double sum = 0.0;
  for (int i = 0; i < g.n; ++i) sum += g.w[i] * std::exp(-g.r[i]);
  CHECK(std::abs(sum - 1.0) < 1e-10);

  // also a Coulomb-like integrand: int_0^inf r e^(-2r) dr = 1/4
  double sum2 = 0.0;
  for (int i = 0; i < g.n; ++i) sum2 += g.w[i] * g.r[i] * std::exp(-2.0 * g.r[i]);
  CHECK(std::abs(sum2 - 0.25) < 1e-10);
}

TEST_CASE("hydrogenic Dirac bound energies (Z=10)") {
  const double z = 10.0;
  auto g = make_grid(150, 1e-6, 6.0);
  auto s_orbs = dirac_spectrum(z, -1, g);

  // lowest positive-energy bound state ~ -50.067 H (Sommerfeld)
  const double eps_1s = sommerfeld_energy(z, 1, -1);
  CHECK(eps_1s == doctest::Approx(-50.067).epsilon(2e-5));

  const Orbital* first_bound = nullptr;
  for (const auto& o : s_orbs)
    if (!o.negative_energy) {
      first_bound = &o;
      break;
    }
  REQUIRE(first_bound != nullptr);
  CHECK(first_bound->n_principal == 1);
  CHECK(first_bound->energy == doctest::Approx(eps_1s).epsilon(1e-12));
  // the raw discretized eigenvalue is itself close
  CHECK(std::abs(first_bound->raw_energy - eps_1s) <
        1e-3 * std::abs(eps_1s));
}

TEST_CASE("raw eigenvalues converge toward Sommerfeld with grid refinement") {
  const double z = 10.0;
  auto raw_err = [&](int n_pts) {
    auto g = make_grid(n_pts, 1e-6, 6.0);
    auto orbs = dirac_spectrum(z, -1, g);
    for (const auto& o : orbs)
      if (o.n_principal == 1)
        return std::abs(o.raw_energy - sommerfeld_energy(z, 1, -1));
    return 1e99;
  };
  const double e1 = raw_err(80);
  const double e2 = raw_err(160);
  CHECK(e2 < 0.5 * e1);  // at least first-order, expect ~ h^2
}

TEST_CASE("nonrelativistic limit reproduces -Z^2/2") {
  const double z = 10.0, c_big = default_c * 1000.0;
  auto g = make_grid(150, 1e-6, 6.0);
  auto orbs = dirac_spectrum(z, -1, g, c_big);
  for (const auto& o : orbs)
    if (o.n_principal == 1) {
      CHECK(o.energy == doctest::Approx(-50.0).epsilon(1e-8));
      return;
    }
  FAIL("1s not found");
}

TEST_CASE("2p1/2 bound energy from the kappa=+1 channel (Z=2)") {
  const double z = 2.0;
  auto g = make_grid(150, 1e-5, 40.0);
  auto orbs = dirac_spectrum(z, +1, g);
  const double expect = sommerfeld_energy(z, 2, +1);
  for (const auto& o : orbs)
    if (o.n_principal == 2) {
      CHECK(o.energy == doctest::Approx(expect).epsilon(1e-12));
      CHECK(std::abs(o.raw_energy - expect) < 2e-2 * std::abs(expect));
      return;
    }
  FAIL("2p1/2 not found");
}

TEST_CASE("fine structure splits kappa=+1 from kappa=-2 but not in the NR limit") {
  const double z = 10.0;
  auto g = make_grid(120, 1e-6, 6.0);
  const double e_p12 = sommerfeld_energy(z, 2, +1);
  const double e_p32 = sommerfeld_energy(z, 2, -2);
  CHECK(std::abs(e_p12 - e_p32) > 1e-3);  // relativistic splitting
  const double c_big = default_c * 1e3;
  CHECK(std::abs(sommerfeld_energy(z, 2, +1, c_big) -
                 sommerfeld_energy(z, 2, -2, c_big)) < 1e-6);
}

TEST_CASE("orthonormality and completeness under the grid weights") {
  const double z = 5.0;
  auto g = make_grid(90, 1e-5, 12.0);
  auto orbs = dirac_spectrum(z, -1, g);
  REQUIRE(int(orbs.size()) == 2 * g.n);

  int n_neg = 0;
  for (const auto& o : orbs) n_neg += o.negative_energy ? 1 : 0;
  CHECK(n_neg == g.n);

  auto dot = [&](const Orbital& a, const Orbital& b) {
    double s = 0.0;
    for (int i = 0; i < g.n; ++i)
      s += g.w[i] * (a.f[i] * b.f[i] + a.g[i] * b.g[i]);
    return s;
  };
  for (int k : {0, 30, 90, 150}) {
    CHECK(std::abs(dot(orbs[k], orbs[k]) - 1.0) < 1e-12);
    CHECK(std::abs(dot(orbs[k], orbs[(k + 17) % orbs.size()])) < 1e-10);
  }

  // completeness: sum_s F_i F_j + G_i G_j = delta_ij / w_i
  for (int i : {5, 40}) {
    for (int j : {5, 12}) {
      double s_ff = 0.0, s_fg = 0.0;
      for (const auto& o : orbs) {
        s_ff += o.f[i] * o.f[j];
        s_fg += o.f[i] * o.g[j];
      }
      const double expect = (i == j) ? 1.0 / g.w[i] : 0.0;
      CHECK(std::abs(s_ff - expect) < 1e-8 * std::abs(1.0 / g.w[i]));
      CHECK(std::abs(s_fg) < 1e-8 * std::abs(1.0 / g.w[i]));
    }
  }
}

TEST_CASE("no spurious states inside the bound spectrum (Z=10, kappa=-1)") {
  const double z = 10.0;
  auto g = make_grid(150, 1e-6, 6.0);
  auto orbs = dirac_spectrum(z, -1, g);
  // nothing below the ground state
  const double e1s = sommerfeld_energy(z, 1, -1);
  for (const auto& o : orbs)
    if (!o.negative_energy) CHECK(o.raw_energy > 1.02 * e1s);
  // exactly one level near each of n = 1..4
  for (int n = 1; n <= 4; ++n) {
    const double target = sommerfeld_energy(z, n, -1);
    const double band = 0.25 * std::abs(sommerfeld_energy(z, n + 1, -1) -
                                        target);
    int hits = 0;
    for (const auto& o : orbs)
      if (!o.negative_energy && std::abs(o.raw_energy - target) < band)
        ++hits;
    CHECK(hits == 1);
  }
}

TEST_CASE("supercritical charge throws") {
  auto g = make_grid(60, 1e-5, 5.0);
  CHECK_THROWS_AS((void)dirac_spectrum(140.0, -1, g), SupercriticalZ);
}

TEST_CASE("nvp filter") {
  auto g = make_grid(60, 1e-5, 10.0);
  auto spec = build_spectrum(3.0, {-1, 1}, g);
  auto pos = nvp_filter(spec, false);
  for (const auto& [kappa, orbs] : pos.by_kappa) {
    CHECK(int(orbs.size()) == g.n);
    for (const auto& o : orbs) CHECK(!o.negative_energy);
  }
  auto full = nvp_filter(spec, true);
  for (const auto& [kappa, orbs] : full.by_kappa)
    CHECK(int(orbs.size()) == 2 * g.n);
  // idempotent
  auto pos2 = nvp_filter(pos, false);
  CHECK(pos2.by_kappa.at(-1).size() == pos.by_kappa.at(-1).size());
}

TEST_CASE("spectrum dump is parseable and headed") {
  auto g = make_grid(50, 1e-4, 10.0);
  auto spec = build_spectrum(2.0, {-1}, g);
  std::ostringstream os;
  dump_spectrum(spec, os);
  const std::string text = os.str();
  CHECK(text.find("Z=2") != std::string::npos);
  CHECK(text.find("N=50") != std::string::npos);
  CHECK(text.find("c=137.035999") != std::string::npos);
  CHECK(text.find("kappa=-1") != std::string::npos);
}
