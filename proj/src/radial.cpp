#include "qedmb/radial.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

namespace qedmb::radial {

RadialGrid make_grid(int n, double r_min, double r_max) {
  if (n < 2) throw InvalidGrid("make_grid: need at least two points");
  if (!(r_min > 0.0) || !(r_max > r_min))
    throw InvalidGrid("make_grid: need 0 < r_min < r_max");
  RadialGrid grid;
  grid.n = n;
  grid.r_min = r_min;
  grid.r_max = r_max;
  grid.h = std::log(r_max / r_min) / double(n - 1);
  grid.r.resize(n);
  grid.w.resize(n);
  for (int i = 0; i < n; ++i) grid.r[i] = r_min * std::exp(grid.h * i);
  for (int i = 0; i < n; ++i) grid.w[i] = grid.h * grid.r[i];
  // Geometric tail of the log-trapezoid sum over (0, r_min]: for smooth
  // integrands the points below r_1 contribute f(r_1) * h r_1 e^{-h} /
  // (1 - e^{-h}); folding it into w_1 keeps int_0^inf f dr accurate.
  grid.w[0] = grid.h * grid.r[0] / (1.0 - std::exp(-grid.h));
  grid.w[n - 1] *= 0.5;
  return grid;
}

std::string Orbital::label() const {
  static const char spect[] = "spdfghiklm";
  const int l = kappa_to_l(kappa);
  std::string s;
  if (n_principal > 0)
    s = std::to_string(n_principal);
  else
    s = "[" + std::to_string(index) + "]";
  s += (l < 10) ? spect[l] : '?';
  s += kappa < 0 ? "+" : "-";  // j = l +- 1/2
  return s;
}

double sommerfeld_energy(double z, int n, int kappa, double c) {
  const double za = z / c;
  const double gamma = std::sqrt(double(kappa) * kappa - za * za);
  const double denom = double(n) - std::abs(double(kappa)) + gamma;
  return c * c * (1.0 / std::sqrt(1.0 + (za / denom) * (za / denom)) - 1.0);
}

std::vector<Orbital> dirac_spectrum(double z, int kappa,
                                    const RadialGrid& grid, double c) {
  if (kappa == 0) throw std::invalid_argument("dirac_spectrum: kappa = 0");
  if (z / c >= std::abs(double(kappa)))
    throw SupercriticalZ("dirac_spectrum: Z alpha >= |kappa|");
  const int n = grid.n;
  const double h = grid.h;

  // One-sided (backward) three-point derivative in ln r, similarity-
  // transformed with the plain log-trapezoid weights (w ~ h r).  The
  // transpose block is the mirrored stencil, consistent for
  // -d/dr + kappa/r to O(h^2); the one-sided symbol has no zero at the
  // grid Nyquist mode, which keeps the spectrum free of spurious roots
  // and the positive/negative branch counts balanced for either sign of
  // kappa.  Entries below r_min are dropped (regular solution at the
  // origin); the transpose truncation is the hard wall at r_max.
  Eigen::MatrixXd cblock = Eigen::MatrixXd::Zero(n, n);  // c (d/dr + k/r)
  constexpr double stencil[3] = {1.5, -2.0, 0.5};
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < 3 && i - k >= 0; ++k)
      cblock(i, i - k) =
          c * std::exp(0.5 * k * h) * stencil[k] / (h * grid.r[i]);
    cblock(i, i) += c * double(kappa) / grid.r[i];
  }

  Eigen::MatrixXd ham = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    const double v = -z / grid.r[i];
    ham(i, i) = v;
    ham(n + i, n + i) = v - 2.0 * c * c;
  }
  ham.block(0, n, n, n) = cblock.transpose();
  ham.block(n, 0, n, n) = cblock;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ham);
  if (es.info() != Eigen::Success)
    throw DiagonalizationFailure("dirac_spectrum: eigensolver failed");

  std::vector<Orbital> out(2 * n);
  for (int k = 0; k < 2 * n; ++k) {
    Orbital& orb = out[k];
    orb.kappa = kappa;
    orb.index = k;
    orb.raw_energy = es.eigenvalues()[k];
    orb.energy = orb.raw_energy;
    orb.negative_energy = orb.raw_energy < -c * c;
    orb.f.resize(n);
    orb.g.resize(n);
    for (int i = 0; i < n; ++i) {
      orb.f[i] = es.eigenvectors()(i, k) / std::sqrt(grid.w[i]);
      orb.g[i] = es.eigenvectors()(n + i, k) / std::sqrt(grid.w[i]);
    }
  }

  // Shift identified bound states onto the Sommerfeld values.  Stop at the
  // first level the box has visibly distorted.
  const int n_min = kappa_n_min(kappa);
  int bound_rank = 0;
  for (auto& orb : out) {
    if (orb.negative_energy || orb.raw_energy >= 0.0) continue;
    const int n_prin = n_min + bound_rank;
    const double target = sommerfeld_energy(z, n_prin, kappa, c);
    const double gap_up =
        sommerfeld_energy(z, n_prin + 1, kappa, c) - target;
    if (std::abs(orb.raw_energy - target) > 0.35 * gap_up) break;
    orb.energy = target;
    orb.n_principal = n_prin;
    ++bound_rank;
  }
  return out;
}

const Orbital& SpectrumSet::bound(int n, int kappa) const {
  const auto it = by_kappa.find(kappa);
  if (it == by_kappa.end())
    throw std::out_of_range("SpectrumSet::bound: no such kappa");
  for (const auto& orb : it->second)
    if (orb.n_principal == n) return orb;
  throw std::out_of_range("SpectrumSet::bound: state not resolved");
}

SpectrumSet build_spectrum(double z, const std::vector<int>& kappas,
                           const RadialGrid& grid, double c) {
  SpectrumSet spec;
  spec.z = z;
  spec.c = c;
  spec.grid = std::make_shared<RadialGrid>(grid);
  for (int kappa : kappas)
    spec.by_kappa[kappa] = dirac_spectrum(z, kappa, grid, c);
  return spec;
}

SpectrumSet nvp_filter(const SpectrumSet& spec, bool include_negative) {
  if (include_negative == spec.includes_negative) return spec;
  SpectrumSet out;
  out.z = spec.z;
  out.c = spec.c;
  out.grid = spec.grid;
  out.includes_negative = include_negative;
  for (const auto& [kappa, orbs] : spec.by_kappa) {
    auto& dst = out.by_kappa[kappa];
    for (const auto& orb : orbs)
      if (include_negative || !orb.negative_energy) dst.push_back(orb);
  }
  return out;
}

void dump_spectrum(const SpectrumSet& spec, std::ostream& os) {
  const auto& g = *spec.grid;
  os << "# Z=" << spec.z << " N=" << g.n << " r_min=" << g.r_min
     << " r_max=" << g.r_max << " c=" << std::setprecision(12) << spec.c
     << "\n";
  for (const auto& [kappa, orbs] : spec.by_kappa) {
    os << "# kappa=" << kappa << "\n";
    for (const auto& orb : orbs)
      os << orb.index << " " << std::setprecision(14) << orb.energy << " "
         << (orb.negative_energy ? '-' : '+') << "\n";
  }
}

}  // namespace qedmb::radial
