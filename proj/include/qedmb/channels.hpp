#pragma once

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <unordered_map>
#include <vector>

#include "qedmb/radial.hpp"

// Two-electron coupled channels: truncated orbital selections, coupled
// antisymmetrized pair bases per (J, parity), and the angular assembly of
// scalar two-body operators from reduced matrix elements.
namespace qedmb::channels {

// Orbital handle: position within the per-kappa list of a BasisSet.
struct OrbitalRef {
  int kappa = 0;
  int slot = -1;
  bool operator==(const OrbitalRef& o) const {
    return kappa == o.kappa && slot == o.slot;
  }
};

// Truncated positive-energy orbital selection used as the correlation
// basis (NVP by default; negative-energy states only when requested).
class BasisSet {
 public:
  BasisSet(const radial::SpectrumSet& spec, int l_max, int n_per_kappa,
           bool include_negative = false);

  const radial::RadialGrid& grid() const { return *spec_->grid; }
  double speed_of_light() const { return spec_->c; }
  const std::vector<int>& kappas() const { return kappas_; }
  int count(int kappa) const;
  const radial::Orbital& orb(OrbitalRef ref) const;
  int global_index(OrbitalRef ref) const;
  int total() const { return total_; }
  OrbitalRef find_bound(int n, int kappa) const;

 private:
  const radial::SpectrumSet* spec_;
  std::vector<int> kappas_;
  std::map<int, std::vector<int>> selected_;  // kappa -> indices into spectrum
  std::map<int, int> offsets_;
  int total_ = 0;
};

struct Pair {
  OrbitalRef x, y;  // canonical order: global_index(x) <= global_index(y)
};

// Antisymmetrized coupled pair basis |{xy} J>, fixed parity block.
struct PairBasis {
  int two_j = 0;
  int parity = +1;
  std::vector<Pair> pairs;
  Eigen::VectorXd energies;  // eps_x + eps_y

  int size() const { return int(pairs.size()); }
  int find(const Pair& p, const BasisSet& basis) const;
};

PairBasis build_pair_basis(const BasisSet& basis, int two_j, int parity);

// Ordered straight-product coupled basis |x y; J> split into exchange
// symmetry sectors: sector +1 holds the symmetric combinations
// (|xy> + phase |yx>), sector -1 the antisymmetric ones.  The photonic
// amplitudes need both sectors.
PairBasis build_pair_basis_sector(const BasisSet& basis, int two_j,
                                  int parity, int sector);

// Normalization 1/sqrt(2(1+delta_xy)) and the exchange phase
// -(-1)^{j_x+j_y-J} entering |{xy}J>.
double pair_norm(const BasisSet& basis, const Pair& p);
double exchange_phase(const BasisSet& basis, const Pair& p, int two_j);

}  // namespace qedmb::channels
