#include "qedmb/channels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qedmb::channels {

BasisSet::BasisSet(const radial::SpectrumSet& spec, int l_max,
                   int n_per_kappa, bool include_negative)
    : spec_(&spec) {
  for (const auto& [kappa, orbs] : spec.by_kappa) {
    if (radial::kappa_to_l(kappa) > l_max) continue;
    std::vector<int> keep;
    int taken = 0;
    for (int i = 0; i < int(orbs.size()) && taken < n_per_kappa; ++i) {
      if (orbs[i].negative_energy && !include_negative) continue;
      keep.push_back(i);
      ++taken;
    }
    if (!keep.empty()) {
      offsets_[kappa] = total_;
      total_ += int(keep.size());
      kappas_.push_back(kappa);
      selected_[kappa] = std::move(keep);
    }
  }
}

int BasisSet::count(int kappa) const {
  auto it = selected_.find(kappa);
  return it == selected_.end() ? 0 : int(it->second.size());
}

const radial::Orbital& BasisSet::orb(OrbitalRef ref) const {
  return spec_->by_kappa.at(ref.kappa)[selected_.at(ref.kappa)[ref.slot]];
}

int BasisSet::global_index(OrbitalRef ref) const {
  return offsets_.at(ref.kappa) + ref.slot;
}

OrbitalRef BasisSet::find_bound(int n, int kappa) const {
  const auto it = selected_.find(kappa);
  if (it == selected_.end())
    throw std::out_of_range("BasisSet: kappa not in basis");
  const auto& orbs = spec_->by_kappa.at(kappa);
  for (int slot = 0; slot < int(it->second.size()); ++slot)
    if (orbs[it->second[slot]].n_principal == n) return {kappa, slot};
  throw std::out_of_range("BasisSet: bound state not in basis");
}

int PairBasis::find(const Pair& p, const BasisSet& basis) const {
  for (int i = 0; i < size(); ++i) {
    if (basis.global_index(pairs[i].x) == basis.global_index(p.x) &&
        basis.global_index(pairs[i].y) == basis.global_index(p.y))
      return i;
  }
  return -1;
}

double pair_norm(const BasisSet& basis, const Pair& p) {
  const bool same = basis.global_index(p.x) == basis.global_index(p.y);
  return 1.0 / std::sqrt(2.0 * (same ? 2.0 : 1.0));
}

double exchange_phase(const BasisSet& basis, const Pair& p, int two_j) {
  const int two_jx = std::abs(p.x.kappa) * 2 - 1;
  const int two_jy = std::abs(p.y.kappa) * 2 - 1;
  (void)basis;
  return ((two_jx + two_jy - two_j) / 2) % 2 ? -1.0 : 1.0;
}

namespace {

PairBasis build_sector(const BasisSet& basis, int two_j, int parity,
                       int sector) {
  PairBasis pb;
  pb.two_j = two_j;
  pb.parity = parity;
  std::vector<double> energies;
  for (int kx : basis.kappas()) {
    for (int ky : basis.kappas()) {
      const int two_jx = 2 * std::abs(kx) - 1;
      const int two_jy = 2 * std::abs(ky) - 1;
      if (two_j > two_jx + two_jy || two_j < std::abs(two_jx - two_jy))
        continue;
      const int par =
          (radial::kappa_to_l(kx) + radial::kappa_to_l(ky)) % 2 ? -1 : +1;
      if (par != parity) continue;
      for (int sx = 0; sx < basis.count(kx); ++sx) {
        for (int sy = 0; sy < basis.count(ky); ++sy) {
          OrbitalRef x{kx, sx}, y{ky, sy};
          const int gx = basis.global_index(x), gy = basis.global_index(y);
          if (gx > gy) continue;  // canonical order
          if (gx == gy) {
            // |xx>: electron-exchange eigenvalue is -(-1)^J for
            // half-integer j; keep when it matches the sector
            const int p12 = (two_j / 2) % 2 ? +1 : -1;
            if (p12 != sector) continue;
          }
          pb.pairs.push_back({x, y});
          energies.push_back(basis.orb(x).energy + basis.orb(y).energy);
        }
      }
    }
  }
  pb.energies = Eigen::Map<Eigen::VectorXd>(energies.data(),
                                            long(energies.size()));
  return pb;
}

}  // namespace

PairBasis build_pair_basis(const BasisSet& basis, int two_j, int parity) {
  return build_sector(basis, two_j, parity, -1);
}

PairBasis build_pair_basis_sector(const BasisSet& basis, int two_j,
                                  int parity, int sector) {
  return build_sector(basis, two_j, parity, sector);
}

}  // namespace qedmb::channels
