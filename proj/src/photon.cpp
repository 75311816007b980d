#include "qedmb/photon.hpp"

#include <algorithm>
#include <cmath>

#include "qedmb/bessel.hpp"
#include "qedmb/wigner.hpp"

namespace qedmb::photon {

namespace {

using radial::kappa_to_j;
using radial::kappa_to_l;

double phase(int pow2) { return pow2 % 2 ? -1.0 : 1.0; }

// (-1)^{j_b + j_c + J} {j_a j_b J; j_d j_c K} for the scalar product of
// rank-K tensors on electrons 1 and 2 (verified against m-sums).
double scalar_product_6j(int ka, int kb, int kc, int kd, int two_j, int rank) {
  const double ja = kappa_to_j(ka), jb = kappa_to_j(kb);
  const double jc = kappa_to_j(kc), jd = kappa_to_j(kd);
  const double j = 0.5 * two_j;
  const double six = wigner::six_j(ja, jb, j, jd, jc, rank);
  if (six == 0.0) return 0.0;
  return phase(int(std::lround(jb + jc + j))) * six;
}

// Gaunt tensor-rank decomposition (a1.a2)(C^l.C^l) =
// sum_K (-1)^{1+l-K} {a C^l}^K . {a C^l}^K.
double gaunt_dk(int l, int rank) { return phase(1 + l - rank); }

}  // namespace

double gaunt_vertex(const BasisSet& basis, OrbitalRef x, OrbitalRef y,
                    int l, int tensor_rank, double k) {
  return angular::gaunt_potential_rme(basis.orb(x), basis.orb(y), l,
                                      tensor_rank, k, basis.grid())
      .value;
}

double sr_vertex(const BasisSet& basis, OrbitalRef x, OrbitalRef y, int l,
                 double k) {
  return angular::scalar_retardation_rme(basis.orb(x), basis.orb(y), l, k,
                                         basis.grid())
      .value;
}

double even_vertex(const BasisSet& basis, OrbitalRef x, OrbitalRef y, int L,
                   double k) {
  const double ang = angular::cl_reduced(x.kappa, y.kappa, L);
  if (ang == 0.0) return 0.0;
  const auto& grid = basis.grid();
  const auto& ox = basis.orb(x);
  const auto& oy = basis.orb(y);
  double radial = 0.0;
  for (int i = 0; i < grid.n; ++i)
    radial += grid.w[i] * bessel::sph_j(L, k * grid.r[i]) *
              (ox.f[i] * oy.f[i] + ox.g[i] * oy.g[i]);
  return ang * radial;
}

double pair_term_straight(const BasisSet& basis, OrbitalRef a, OrbitalRef b,
                          OrbitalRef c, OrbitalRef d, int two_j,
                          angular::Kind kind, int l, double k) {
  double sum = 0.0;
  if (kind == angular::Kind::gaunt) {
    for (int rank = std::max(0, l - 1); rank <= l + 1; ++rank) {
      const double six =
          scalar_product_6j(a.kappa, b.kappa, c.kappa, d.kappa, two_j, rank);
      if (six == 0.0) continue;
      const double v1 = gaunt_vertex(basis, a, c, l, rank, k);
      if (v1 == 0.0) continue;
      const double v2 = gaunt_vertex(basis, b, d, l, rank, k);
      sum += gaunt_dk(l, rank) * six * v1 * v2;
    }
  } else {
    const double six =
        scalar_product_6j(a.kappa, b.kappa, c.kappa, d.kappa, two_j, l);
    if (six == 0.0) return 0.0;
    sum = six * sr_vertex(basis, a, c, l, k) * sr_vertex(basis, b, d, l, k);
  }
  return -sum;  // i^2 from the two odd vertices
}

double even_term_straight(const BasisSet& basis, OrbitalRef a, OrbitalRef b,
                          OrbitalRef c, OrbitalRef d, int two_j, int L,
                          double k) {
  const double six =
      scalar_product_6j(a.kappa, b.kappa, c.kappa, d.kappa, two_j, L);
  if (six == 0.0) return 0.0;
  return six * even_vertex(basis, a, c, L, k) * even_vertex(basis, b, d, L, k);
}

namespace {

// f(k)-weighted sum of separated terms at one photon momentum; the
// energy-denominator brackets are applied by the caller.
double interaction_value(const BasisSet& basis, OrbitalRef a, OrbitalRef b,
                         OrbitalRef c, OrbitalRef d, int two_j, double k,
                         const OnePhotonOptions& opt,
                         std::optional<angular::Kind> only_kind) {
  double sum = 0.0;
  if (opt.gauge == OnePhotonOptions::Gauge::feynman) {
    // f_F = -(1/pi)(1 - a1.a2) sin(k r12)/r12
    for (int l = 0; l <= opt.l_max; ++l) {
      const double w = double(2 * l + 1) * angular::f_prefactor(k);
      sum += w * (-even_term_straight(basis, a, b, c, d, two_j, l, k) +
                  pair_term_straight(basis, a, b, c, d, two_j,
                                     angular::Kind::gaunt, l, k));
    }
    return sum;
  }
  for (const auto& term : angular::coulomb_gauge_f_assemble(opt.l_max)) {
    if (only_kind && term.kind != *only_kind) continue;
    sum += coulomb_gauge_sign * term.coefficient * angular::f_prefactor(k) *
           pair_term_straight(basis, a, b, c, d, two_j, term.kind, term.l, k);
  }
  return sum;
}

}  // namespace

double retarded_element_straight(const BasisSet& basis, OrbitalRef a,
                                 OrbitalRef b, OrbitalRef c, OrbitalRef d,
                                 int two_j, double e_ref,
                                 const OnePhotonOptions& opt,
                                 std::optional<angular::Kind> only_kind) {
  // photon momenta are wavenumbers (1/Bohr); the photon energy is c k, so
  // the energy-conservation denominators live at k = (E - eps - eps)/c
  const double c_au = basis.speed_of_light();
  const double delta1 =
      (e_ref - basis.orb(a).energy - basis.orb(d).energy) / c_au;
  const double delta2 =
      (e_ref - basis.orb(b).energy - basis.orb(c).energy) / c_au;

  auto grid = quadrature::make_kgrid(opt.k_nodes, opt.k0);
  std::vector<double> values(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    const double k = grid.k[i];
    const double f = interaction_value(basis, a, b, c, d, two_j, k, opt,
                                       only_kind);
    values[i] = f * (1.0 / (delta1 - k) + 1.0 / (delta2 - k));
  }
  std::vector<quadrature::Pole> poles;
  const double pole_floor = 1e-8;
  for (double delta : {delta1, delta2}) {
    if (delta > pole_floor) {
      // near k = delta the bracket term is 1/(delta - k): residue factor
      // is f evaluated on shell
      poles.push_back({delta, interaction_value(basis, a, b, c, d, two_j,
                                                delta, opt, only_kind)});
    }
  }
  return quadrature::integrate_pv(grid, values, poles);
}

double one_photon_energy(const BasisSet& basis, const Pair& ab, int two_j,
                         double e_ref, const OnePhotonOptions& opt,
                         std::optional<angular::Kind> only_kind) {
  const double n2 = 2.0 * channels::pair_norm(basis, ab) *
                    channels::pair_norm(basis, ab);
  const double sigma = channels::exchange_phase(basis, ab, two_j);
  const double direct = retarded_element_straight(
      basis, ab.x, ab.y, ab.x, ab.y, two_j, e_ref, opt, only_kind);
  const double exch = retarded_element_straight(
      basis, ab.x, ab.y, ab.y, ab.x, two_j, e_ref, opt, only_kind);
  return n2 * (direct - sigma * exch);
}

double instantaneous_coulomb_energy(slater::SlaterEngine& engine,
                                    const Pair& ab, int two_j) {
  return engine.coulomb_element(ab, ab, two_j, -1);
}

double x_factor(int two_j, int two_j12, int tensor_rank) {
  const double j = 0.5 * two_j, j12 = 0.5 * two_j12;
  const double m = 0.0;
  double sum = 0.0;
  for (int q = -tensor_rank; q <= tensor_rank; ++q) {
    const double m12 = m + q;
    if (std::abs(m12) > j12 + 0.1) continue;
    const double t1 = wigner::three_j(j, tensor_rank, j12, -m, -q, m12);
    const double t2 = wigner::three_j(j12, tensor_rank, j, -m12, q, m);
    if (t1 == 0.0 || t2 == 0.0) continue;
    const double sgn = phase(q) * phase(int(std::lround(j - m))) *
                       phase(int(std::lround(j12 - m12)));
    sum += sgn * t1 * t2;
  }
  return sum;
}

double a1_factor(double jt, double jx, double jy, int two_j12, int two_j,
                 int tensor_rank) {
  const double j12 = 0.5 * two_j12, j = 0.5 * two_j;
  const double six = wigner::six_j(jt, j12, jy, j, jx, tensor_rank);
  if (six == 0.0) return 0.0;
  return phase(int(std::lround(jt + jy + j + tensor_rank))) *
         std::sqrt((two_j12 + 1.0) * (two_j + 1.0)) * six;
}

double a2_factor(double ju, double jy, double jx, int two_j12, int two_j,
                 int tensor_rank) {
  const double j12 = 0.5 * two_j12, j = 0.5 * two_j;
  const double six = wigner::six_j(ju, j12, jx, j, jy, tensor_rank);
  if (six == 0.0) return 0.0;
  return phase(int(std::lround(jx + jy + j12 + tensor_rank))) *
         std::sqrt((two_j12 + 1.0) * (two_j + 1.0)) * six;
}

// ===========================================================================
// dressed machinery
// ===========================================================================

CorrelatedPhoton::CorrelatedPhoton(slater::SlaterEngine& engine,
                                   const PairBasis& physical, int model_row,
                                   const DressedOptions& opt)
    : engine_(&engine), physical_(&physical), model_row_(model_row),
      opt_(opt) {
  v_phys_ = engine.coulomb_matrix(physical, -1);
  pairsolver::Options popt = opt.pair_opt;
  popt.lambda = opt.lambda;
  const auto sol =
      pairsolver::solve_coulomb_pair(v_phys_, physical, {model_row}, popt);
  rho_ = sol.rho(0);
  v_eff_ = sol.v_eff(0, 0);
  e_ref_ = physical.energies[model_row];
  iterations_ = sol.iterations;
}

const CorrelatedPhoton::Block& CorrelatedPhoton::block(int two_j12,
                                                       int parity,
                                                       int sector,
                                                       double lambda) {
  const long long key =
      ((static_cast<long long>(two_j12) * 4 + (parity > 0 ? 1 : 0)) * 4 +
       (sector > 0 ? 1 : 0)) * 2 + (lambda == 0.0 ? 0 : 1);
  auto it = blocks_.find(key);
  if (it != blocks_.end()) return it->second;

  Block blk;
  blk.basis = channels::build_pair_basis_sector(engine_->basis(), two_j12,
                                                parity, sector);
  const int n = blk.basis.size();
  if (n > 0) {
    if (lambda == 0.0) {
      blk.lambda_eigs = blk.basis.energies;
      blk.u = Eigen::MatrixXd::Identity(n, n);
    } else {
      Eigen::MatrixXd h = lambda * engine_->coulomb_matrix(blk.basis, sector);
      h.diagonal() += blk.basis.energies;
      pairsolver::symmetric_eigen(h, blk.lambda_eigs, blk.u);
    }
  }
  return blocks_.emplace(key, std::move(blk)).first->second;
}

namespace {

struct EmissionTerm {
  int target;  // row in the sector basis
  int vslot;   // vertex value slot
  double coeff;
};

struct AbsorbTerm {
  int source;     // row in the sector basis (ordered-pair expansion)
  int final_row;  // row in the physical basis
  int vslot;
  double coeff;
};

// Angular structure of one vertex family (kind, l, rank), with batch
// evaluation of all registered orbital pairs at a photon momentum using
// shared Bessel tables.
class VertexCache {
 public:
  VertexCache(const BasisSet& basis, angular::Kind kind, int l, int rank)
      : basis_(&basis), kind_(kind), l_(l), rank_(rank) {
    if (kind == angular::Kind::gaunt) {
      lam_p_ = l;
      lam_m_ = -1;
      cp_ = 1.0;
      cm_ = 0.0;
    } else {
      lam_p_ = l + 1;
      lam_m_ = l >= 1 ? l - 1 : -1;
      cp_ = std::sqrt(double((l + 1) * (2 * l + 3)));
      cm_ = l >= 1 ? std::sqrt(double(l * (2 * l - 1))) : 0.0;
    }
  }

  int slot(OrbitalRef x, OrbitalRef y) {
    const long long key =
        static_cast<long long>(basis_->global_index(x)) * basis_->total() +
        basis_->global_index(y);
    const auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    Entry e;
    e.x = &basis_->orb(x);
    e.y = &basis_->orb(y);
    e.s1p = angular::sigma_cl_reduced(x.kappa, -y.kappa, lam_p_, rank_);
    e.s2p = angular::sigma_cl_reduced(-x.kappa, y.kappa, lam_p_, rank_);
    if (lam_m_ >= 0) {
      e.s1m = angular::sigma_cl_reduced(x.kappa, -y.kappa, lam_m_, rank_);
      e.s2m = angular::sigma_cl_reduced(-x.kappa, y.kappa, lam_m_, rank_);
    }
    const bool zero = e.s1p == 0.0 && e.s2p == 0.0 &&
                      (lam_m_ < 0 || (e.s1m == 0.0 && e.s2m == 0.0));
    const int id = zero ? -1 : int(entries_.size());
    if (!zero) entries_.push_back(e);
    index_.emplace(key, id);
    return id;
  }

  void eval(double k, Eigen::VectorXd& out) {
    const auto& grid = basis_->grid();
    const int n = grid.n;
    jp_.resize(n);
    for (int i = 0; i < n; ++i)
      jp_[i] = grid.w[i] * bessel::sph_j(lam_p_, k * grid.r[i]);
    if (lam_m_ >= 0) {
      jm_.resize(n);
      for (int i = 0; i < n; ++i)
        jm_[i] = grid.w[i] * bessel::sph_j(lam_m_, k * grid.r[i]);
    }
    out.resize(int(entries_.size()));
    for (size_t s = 0; s < entries_.size(); ++s) {
      const Entry& e = entries_[s];
      double ifg_p = 0.0, igf_p = 0.0, ifg_m = 0.0, igf_m = 0.0;
      for (int i = 0; i < n; ++i) {
        ifg_p += jp_[i] * e.x->f[i] * e.y->g[i];
        igf_p += jp_[i] * e.x->g[i] * e.y->f[i];
      }
      double v = cp_ * (ifg_p * e.s1p - igf_p * e.s2p);
      if (lam_m_ >= 0 && cm_ != 0.0) {
        for (int i = 0; i < n; ++i) {
          ifg_m += jm_[i] * e.x->f[i] * e.y->g[i];
          igf_m += jm_[i] * e.x->g[i] * e.y->f[i];
        }
        v += cm_ * (ifg_m * e.s1m - igf_m * e.s2m);
      }
      out[int(s)] = v;
    }
  }

 private:
  struct Entry {
    const radial::Orbital *x, *y;
    double s1p = 0.0, s2p = 0.0, s1m = 0.0, s2m = 0.0;
  };
  const BasisSet* basis_;
  angular::Kind kind_;
  int l_, rank_;
  int lam_p_ = 0, lam_m_ = -1;
  double cp_ = 1.0, cm_ = 0.0;
  std::unordered_map<long long, int> index_;
  std::vector<Entry> entries_;
  std::vector<double> jp_, jm_;
};

}  // namespace

double CorrelatedPhoton::photon_pass(angular::Kind kind, double lambda,
                                     CorrelatedResult* detail) {
  const auto& basis = engine_->basis();
  const double c_au = basis.speed_of_light();
  const auto& phys = *physical_;
  const int two_j = phys.two_j;
  const double veff = lambda == opt_.lambda ? v_eff_ : 0.0;
  const double e_corr = e_ref_ + veff;
  Eigen::VectorXd rho;
  if (lambda == opt_.lambda)
    rho = rho_;
  else {
    rho = Eigen::VectorXd::Zero(phys.size());
    rho[model_row_] = 1.0;
  }

  auto kgrid = quadrature::make_kgrid(opt_.k_nodes, opt_.k0);
  std::map<int, Eigen::VectorXd> hook_by_l;

  const auto f_terms = angular::coulomb_gauge_f_assemble(opt_.l_max);
  double total_b = 0.0;
  std::map<int, double> by_l;

  for (const auto& term : f_terms) {
    if (term.kind != kind) continue;
    const int l = term.l;
    // vertex parity flip: the vertex multipole is l for Gaunt and l+-1
    // for scalar retardation (both branches flip the same way)
    const int flip = (kind == angular::Kind::gaunt) ? (l + 1) % 2
                                                    : l % 2;
    const int parity_phot = flip == 0 ? phys.parity : -phys.parity;

    const int rank_lo =
        kind == angular::Kind::gaunt ? std::max(0, l - 1) : l;
    const int rank_hi = kind == angular::Kind::gaunt ? l + 1 : l;

    if (!hook_by_l.count(l))
      hook_by_l[l] = Eigen::VectorXd::Zero(phys.size());
    Eigen::VectorXd& hook = hook_by_l[l];
    double l_contrib = 0.0;
    for (int rank = rank_lo; rank <= rank_hi; ++rank) {
      const double dk_coef =
          kind == angular::Kind::gaunt ? gaunt_dk(l, rank) : 1.0;
      // full prefactor: gauge sign, f(k) weight, i^2, emit-1/emit-2 mirror
      auto weight = [&](double k) {
        return coulomb_gauge_sign * term.coefficient *
               angular::f_prefactor(k) * dk_coef * (-1.0) * 2.0;
      };

      VertexCache cache(basis, kind, l, rank);

      struct BlockWork {
        const Block* blk;
        std::vector<EmissionTerm> emits;
        std::vector<AbsorbTerm> absorbs;
        std::vector<double> pole_k;
        std::vector<int> pole_mode;
        double xf;
        Eigen::MatrixXd node_vals;
      };
      std::vector<BlockWork> work;

      for (int two_j12 = std::abs(two_j - 2 * rank);
           two_j12 <= two_j + 2 * rank; two_j12 += 2) {
        for (int sector : {-1, +1}) {
          const Block& blk = block(two_j12, parity_phot, sector, lambda);
          const int nblk = blk.basis.size();
          if (nblk == 0) continue;
          const double xf = x_factor(two_j, two_j12, rank);
          if (xf == 0.0) continue;

          BlockWork bw;
          bw.blk = &blk;
          bw.xf = xf;

          // --- emission term list: V^K(1) acting on rho ---
          for (int p = 0; p < phys.size(); ++p) {
            if (rho[p] == 0.0) continue;
            const auto& pr = phys.pairs[p];
            const double np = channels::pair_norm(basis, pr);
            const double sig = channels::exchange_phase(basis, pr, two_j);
            // |{xy}J> = N (|xy> - sigma |yx>); vertex on electron 1
            struct Piece {
              OrbitalRef x, y;
              double c;
            };
            const Piece pieces[2] = {{pr.x, pr.y, np * rho[p]},
                                     {pr.y, pr.x, -sig * np * rho[p]}};
            for (const auto& pc : pieces) {
              const double jx = kappa_to_j(pc.x.kappa);
              const double jy = kappa_to_j(pc.y.kappa);
              for (int kt : basis.kappas()) {
                const double jt = kappa_to_j(kt);
                const double a1 =
                    a1_factor(jt, jx, jy, two_j12, two_j, rank);
                if (a1 == 0.0) continue;
                for (int st = 0; st < basis.count(kt); ++st) {
                  const OrbitalRef t{kt, st};
                  const int gt = basis.global_index(t);
                  const int gy = basis.global_index(pc.y);
                  channels::Pair canon{t, pc.y};
                  double alpha;
                  if (gt == gy) {
                    alpha = 1.0;
                  } else {
                    if (gt > gy) canon = {pc.y, t};
                    const double nn = channels::pair_norm(basis, canon);
                    const double sg =
                        channels::exchange_phase(basis, canon, two_j12);
                    alpha = gt < gy ? nn : nn * sector * sg;
                  }
                  const int row = bw.blk->basis.find(canon, basis);
                  if (row < 0) continue;
                  const int vs = cache.slot(t, pc.x);
                  if (vs < 0) continue;
                  bw.emits.push_back({row, vs, pc.c * a1 * alpha});
                }
              }
            }
          }
          if (bw.emits.empty()) continue;

          // --- absorption term list: V^K(2) closing onto the physical
          // basis (the model row is the direct energy term) ---
          for (int row = 0; row < nblk; ++row) {
            const auto& bp = blk.basis.pairs[row];
            const int gt = basis.global_index(bp.x);
            const int gu = basis.global_index(bp.y);
            const double nn = channels::pair_norm(basis, bp);
            const double sg = channels::exchange_phase(basis, bp, two_j12);
            struct Ordered {
              OrbitalRef t, u;
              double alpha;
            };
            std::vector<Ordered> ordered;
            if (gt == gu)
              ordered.push_back({bp.x, bp.y, 1.0});
            else {
              ordered.push_back({bp.x, bp.y, nn});
              ordered.push_back({bp.y, bp.x, nn * sector * sg});
            }
            for (const auto& od : ordered) {
              const double ju = kappa_to_j(od.u.kappa);
              const double jt = kappa_to_j(od.t.kappa);
              for (int kw : basis.kappas()) {
                const double jw = kappa_to_j(kw);
                if (!wigner::triangle(jw, double(rank), ju)) continue;
                for (int sw = 0; sw < basis.count(kw); ++sw) {
                  const OrbitalRef w{kw, sw};
                  const int gw = basis.global_index(w);
                  const int gtt = basis.global_index(od.t);
                  channels::Pair fin = gtt <= gw
                                           ? channels::Pair{od.t, w}
                                           : channels::Pair{w, od.t};
                  const int frow = phys.find(fin, basis);
                  if (frow < 0) continue;
                  const double nf = channels::pair_norm(basis, fin);
                  const double sf =
                      channels::exchange_phase(basis, fin, two_j);
                  const double a2 =
                      a2_factor(jw, ju, jt, two_j, two_j12, rank);
                  if (a2 == 0.0) continue;
                  double c = od.alpha * nf * a2;
                  if (gtt == gw)
                    c *= 1.0 - sf;  // both expansion pieces hit |tt>
                  else if (gtt > gw)
                    c *= -sf;
                  const int vs = cache.slot(w, od.u);
                  if (vs < 0) continue;
                  bw.absorbs.push_back({row, frow, vs, c});
                }
              }
            }
          }
          if (bw.absorbs.empty()) continue;

          for (int mu = 0; mu < nblk; ++mu) {
            const double kp = (e_corr - blk.lambda_eigs[mu]) / c_au;
            if (kp > 1e-9) {
              bw.pole_k.push_back(kp);
              bw.pole_mode.push_back(mu);
            }
          }
          bw.node_vals.resize(phys.size(), kgrid.size());
          work.push_back(std::move(bw));
        }
      }
      if (work.empty()) continue;

      Eigen::VectorXd vertex_vals, chi, psi, contrib(phys.size());
      auto assemble = [&](const BlockWork& bw, Eigen::VectorXd& out) {
        out.setZero(bw.blk->basis.size());
        for (const auto& em : bw.emits)
          out[em.target] += em.coeff * vertex_vals[em.vslot];
      };
      auto absorb = [&](const BlockWork& bw, const Eigen::VectorXd& amp,
                        Eigen::VectorXd& out) {
        out.setZero(phys.size());
        for (const auto& ab : bw.absorbs)
          out[ab.final_row] += ab.coeff * amp[ab.source] *
                               vertex_vals[ab.vslot];
      };

      for (int i = 0; i < kgrid.size(); ++i) {
        const double k = kgrid.k[i];
        cache.eval(k, vertex_vals);
        for (auto& bw : work) {
          assemble(bw, chi);
          Eigen::VectorXd proj = bw.blk->u.transpose() * chi;
          for (int mu = 0; mu < proj.size(); ++mu)
            proj[mu] /=
                (e_corr - bw.blk->lambda_eigs[mu]) / c_au - k;
          psi = bw.blk->u * proj;
          absorb(bw, psi, contrib);
          bw.node_vals.col(i) = weight(k) * bw.xf * contrib;
        }
      }

      for (auto& bw : work) {
        // principal-value residue vectors per pole mode
        std::vector<Eigen::VectorXd> residues;
        for (size_t ip = 0; ip < bw.pole_k.size(); ++ip) {
          const double kp = bw.pole_k[ip];
          const int mu = bw.pole_mode[ip];
          cache.eval(kp, vertex_vals);
          assemble(bw, chi);
          const double amp = bw.blk->u.col(mu).dot(chi);
          absorb(bw, bw.blk->u.col(mu), contrib);
          residues.push_back(weight(kp) * bw.xf * amp * contrib);
        }
        for (int f = 0; f < phys.size(); ++f) {
          std::vector<double> vals(kgrid.size());
          for (int i = 0; i < kgrid.size(); ++i) vals[i] = bw.node_vals(f, i);
          std::vector<quadrature::Pole> poles;
          for (size_t ip = 0; ip < bw.pole_k.size(); ++ip)
            poles.push_back({bw.pole_k[ip], residues[ip][f]});
          const double integral =
              quadrature::integrate_pv(kgrid, vals, poles);
          hook[f] += integral;
          if (f == model_row_) {
            total_b += integral;
            l_contrib += integral;
          }
        }
      }
    }
    by_l[l] += l_contrib;
  }

  // second line: Coulomb continuation of the absorbed pair function,
  // multipole by multipole so the l-resolved totals stay meaningful
  double total_a = 0.0;
  if (lambda != 0.0) {
    const int n = phys.size();
    std::vector<int> qrows;
    for (int i = 0; i < n; ++i)
      if (i != model_row_) qrows.push_back(i);
    const int nq = int(qrows.size());
    Eigen::MatrixXd aq(nq, nq);
    for (int i = 0; i < nq; ++i) {
      for (int j = 0; j < nq; ++j)
        aq(i, j) = -lambda * v_phys_(qrows[i], qrows[j]);
      aq(i, i) += e_corr - phys.energies[qrows[i]];
    }
    const auto solver = aq.ldlt();
    for (auto& [l, hook] : hook_by_l) {
      Eigen::VectorXd dq(nq);
      for (int i = 0; i < nq; ++i) dq[i] = hook[qrows[i]];
      const Eigen::VectorXd sg = solver.solve(dq);
      double part = 0.0;
      for (int i = 0; i < nq; ++i)
        part += lambda * v_phys_(model_row_, qrows[i]) * sg[i];
      total_a += part;
      by_l[l] += part;
    }
  }

  if (detail) {
    detail->by_l = by_l;
    detail->k_nodes = opt_.k_nodes;
    detail->iterations = iterations_;
    // geometric tail from the last two multipole increments
    auto it = by_l.rbegin();
    if (by_l.size() >= 2) {
      const double g1 = std::abs(it->second);
      const double g0 = std::abs(std::next(it)->second);
      if (g0 > 0.0 && g1 < g0)
        detail->l_tail = g1 * (g1 / g0) / (1.0 - g1 / g0);
    }
  }
  return total_b + total_a;
}

CorrelatedResult CorrelatedPhoton::run(angular::Kind kind) {
  CorrelatedResult result;
  result.energy = photon_pass(kind, opt_.lambda, &result);
  result.one_photon = undressed_energy(kind);
  return result;
}

double CorrelatedPhoton::undressed_energy(angular::Kind kind) {
  return photon_pass(kind, 0.0, nullptr);
}

}  // namespace qedmb::photon
