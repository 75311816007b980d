#include "qedmb/channels.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "qedmb/slater.hpp"
#include "qedmb/wigner.hpp"

using namespace qedmb;
using namespace qedmb::channels;

namespace {

struct Fixture {
  radial::RadialGrid grid;
  radial::SpectrumSet spec;
  Fixture(double z = 3.0, int n = 90, double rmax = 14.0)
      : grid(radial::make_grid(n, 1e-5, rmax)),
        spec(radial::build_spectrum(z, {-1, 1, -2, 2, -3}, grid)) {}
};

// coupled straight two-electron Coulomb element by explicit m-summation,
// with the radial integrals shared and the angular part from quadrature
double coupled_coulomb_oracle(slater::SlaterEngine& eng, const BasisSet& bs,
                              OrbitalRef a, OrbitalRef b, OrbitalRef c,
                              OrbitalRef d, int two_j, int l_max = 6) {
  const double ja = radial::kappa_to_j(a.kappa);
  const double jb = radial::kappa_to_j(b.kappa);
  const double jc = radial::kappa_to_j(c.kappa);
  const double jd = radial::kappa_to_j(d.kappa);
  const double j = 0.5 * two_j;
  const double m = (two_j % 4 == 0) ? 0.0 : 0.5 * (two_j % 2 ? 1 : 2);
  double total = 0.0;
  for (int L = 0; L <= l_max; ++L) {
    const double rl = eng.rk(a, c, b, d, L);
    if (rl == 0.0) continue;
    double ang = 0.0;
    for (double m_a = -ja; m_a <= ja + 0.1; m_a += 1.0) {
      const double m_b = m - m_a;
      if (std::abs(m_b) > jb + 0.1) continue;
      const double cg_ab = wigner::clebsch(ja, m_a, jb, m_b, j, m);
      if (cg_ab == 0.0) continue;
      for (double m_c = -jc; m_c <= jc + 0.1; m_c += 1.0) {
        const double m_d = m - m_c;
        if (std::abs(m_d) > jd + 0.1) continue;
        const double cg_cd = wigner::clebsch(jc, m_c, jd, m_d, j, m);
        if (cg_cd == 0.0) continue;
        for (int q = -L; q <= L; ++q) {
          const double e1 =
              oracle::cl_element(a.kappa, m_a, c.kappa, m_c, L, q);
          if (e1 == 0.0) continue;
          const double e2 =
              oracle::cl_element(b.kappa, m_b, d.kappa, m_d, L, -q);
          const double sign = q % 2 ? -1.0 : 1.0;
          ang += cg_ab * cg_cd * sign * e1 * e2;
        }
      }
    }
    total += ang * rl;
  }
  return total;
}

}  // namespace

TEST_CASE("pair basis construction") {
  Fixture fx;
  BasisSet bs(fx.spec, 2, 8);
  CHECK(bs.kappas().size() == 5);
  CHECK(bs.total() == 40);

  // J = 0 even block: same-kappa pairs only; |xx> allowed
  auto pb0 = build_pair_basis(bs, 0, +1);
  for (const auto& p : pb0.pairs) {
    CHECK(std::abs(p.x.kappa) == std::abs(p.y.kappa));
    CHECK((radial::kappa_to_l(p.x.kappa) + radial::kappa_to_l(p.y.kappa)) %
              2 == 0);
    CHECK(bs.global_index(p.x) <= bs.global_index(p.y));
  }
  // 5 same-kappa families, 8 orbitals each: 8*9/2 pairs per family
  CHECK(pb0.size() == 5 * 36);

  // J = 1 even block excludes |xx>
  auto pb1 = build_pair_basis(bs, 2, +1);
  for (const auto& p : pb1.pairs)
    CHECK(bs.global_index(p.x) < bs.global_index(p.y));

  // the + sector at J = 1 admits |xx>
  auto pb1s = build_pair_basis_sector(bs, 2, +1, +1);
  bool has_same = false;
  for (const auto& p : pb1s.pairs)
    has_same |= bs.global_index(p.x) == bs.global_index(p.y);
  CHECK(has_same);

  // energies are sums of orbital energies
  for (int i = 0; i < pb0.size(); ++i)
    CHECK(pb0.energies[i] ==
          doctest::Approx(bs.orb(pb0.pairs[i].x).energy +
                          bs.orb(pb0.pairs[i].y).energy));
}

TEST_CASE("coupled straight Coulomb elements match the m-space oracle") {
  Fixture fx;
  BasisSet bs(fx.spec, 2, 3);
  slater::SlaterEngine eng(bs);

  const OrbitalRef s1{-1, 0}, s2{-1, 1}, p1{1, 0}, p3{-2, 0}, d3{2, 0};
  struct Case {
    OrbitalRef a, b, c, d;
    int two_j;
  };
  const Case cases[] = {
      {s1, s2, s1, s2, 0}, {s1, s2, s2, s1, 0}, {s1, s2, s1, s2, 2},
      {s1, p1, s2, p1, 2},  {p1, p3, p1, p3, 2}, {s1, p3, s2, p3, 2},
      {p1, p1, p3, p3, 0},  {s1, d3, s2, d3, 4}, {p3, d3, p3, d3, 2},
  };
  for (const auto& cs : cases) {
    const double got = eng.coulomb_straight(cs.a, cs.b, cs.c, cs.d, cs.two_j);
    const double ref = coupled_coulomb_oracle(eng, bs, cs.a, cs.b, cs.c,
                                              cs.d, cs.two_j);
    CHECK(got == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("antisymmetrized elements and sector phases") {
  Fixture fx;
  BasisSet bs(fx.spec, 1, 3);
  slater::SlaterEngine eng(bs);
  const OrbitalRef s1{-1, 0}, s2{-1, 1};
  const Pair p12{s1, s2};

  // physical sector: direct - sigma * exchange with the J phases
  for (int two_j : {0, 2}) {
    const double direct = eng.coulomb_straight(s1, s2, s1, s2, two_j);
    const double exch = eng.coulomb_straight(s1, s2, s2, s1, two_j);
    const double sigma = exchange_phase(bs, p12, two_j);
    const double expect = direct - sigma * exch;
    CHECK(eng.coulomb_element(p12, p12, two_j, -1) ==
          doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("1s^2 J=0 ground-block element reproduces 5Z/8 in the NR limit") {
  const double z = 10.0;
  auto grid = radial::make_grid(200, 1e-6, 6.0);
  auto spec = radial::build_spectrum(z, {-1}, grid, radial::default_c * 100);
  BasisSet bs(spec, 0, 4);
  slater::SlaterEngine eng(bs);
  auto ref_1s = bs.find_bound(1, -1);
  const Pair p{ref_1s, ref_1s};
  const double v = eng.coulomb_element(p, p, 0, -1);
  CHECK(v == doctest::Approx(5.0 * z / 8.0).epsilon(1e-3));
}

TEST_CASE("coulomb matrix is symmetric with the pair-basis ordering") {
  Fixture fx;
  BasisSet bs(fx.spec, 1, 4);
  slater::SlaterEngine eng(bs);
  auto pb = build_pair_basis(bs, 0, +1);
  auto v = eng.coulomb_matrix(pb);
  CHECK(v.rows() == pb.size());
  CHECK((v - v.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  // diagonal elements are real expectation values of a repulsive kernel
  for (int i = 0; i < std::min(6, pb.size()); ++i) CHECK(v(i, i) > 0.0);
}
