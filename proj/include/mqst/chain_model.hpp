#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "mqst/sector_basis.hpp"

namespace mqst {

template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Per-bond exchange couplings of an open chain, in units of |J1|.
///
/// `j1_bonds[i]` couples sites (i + 1, i + 2); `j2_bonds[i]` couples sites
/// (i + 1, i + 3). Sites are 1-based.
template <typename Real>
struct CouplingProfile {
  int n_sites = 0;
  std::vector<Real> j1_bonds;
  std::vector<Real> j2_bonds;

  Real nn(int site) const { return j1_bonds.at(site - 1); }
  Real nnn(int site) const { return j2_bonds.at(site - 1); }

  bool operator==(const CouplingProfile&) const = default;
};

enum class ImpurityKind { TypeI, TypeII };

/// Local bond deformation around one embedded impurity.
///
/// `site` is the impurity label n + 1. `ratio_nn` is J11/J1 (TypeI,
/// compression) or J111/J1 (TypeII, elongation). `ratio_nnn_strong` is the
/// enhanced next-nearest ratio J22/J2 and `ratio_nnn_weak` the reduced one
/// J222/J2; which NNN bonds receive which depends on the kind.
template <typename Real>
struct ImpuritySpec {
  ImpurityKind kind = ImpurityKind::TypeI;
  int site = 0;
  Real ratio_nn = 1;
  Real ratio_nnn_strong = 1;
  Real ratio_nnn_weak = 1;

  bool operator==(const ImpuritySpec&) const = default;
};

template <typename Real>
struct ChainParams {
  CouplingProfile<Real> profile;
  Real dm_field = 0;  // E, multiplies the z-chirality of each NN bond
  Real b_field = 0;   // B, multiplies total S^z

  int n_sites() const { return profile.n_sites; }
};

template <typename Real>
CouplingProfile<Real> uniform_profile(int n_sites, Real j1, Real j2) {
  if (n_sites < 2) {
    throw std::invalid_argument("uniform_profile: n_sites must be >= 2, got " +
                                std::to_string(n_sites));
  }
  CouplingProfile<Real> p;
  p.n_sites = n_sites;
  p.j1_bonds.assign(n_sites - 1, j1);
  p.j2_bonds.assign(n_sites - 2, j2);
  return p;
}

inline int default_impurity_site(int n_sites) { return n_sites / 2 + 1; }

template <typename Real>
void validate_impurity(const ImpuritySpec<Real>& spec, int n_sites) {
  if (spec.site < 2 || spec.site > n_sites - 1) {
    throw std::invalid_argument("impurity site " + std::to_string(spec.site) +
                                " outside [2, " + std::to_string(n_sites - 1) + "]");
  }
  using std::isfinite;
  if (!isfinite(spec.ratio_nn) || !isfinite(spec.ratio_nnn_strong) ||
      !isfinite(spec.ratio_nnn_weak)) {
    throw std::invalid_argument("impurity ratios must be finite");
  }
  if (spec.ratio_nnn_strong < 1) {
    throw std::invalid_argument("impurity ratio_nnn_strong must be >= 1");
  }
  if (spec.ratio_nnn_weak > 1) {
    throw std::invalid_argument("impurity ratio_nnn_weak must be <= 1");
  }
  if (spec.kind == ImpurityKind::TypeI && spec.ratio_nn < 1) {
    throw std::invalid_argument("TypeI impurity requires ratio_nn >= 1");
  }
  if (spec.kind == ImpurityKind::TypeII && spec.ratio_nn > 1) {
    throw std::invalid_argument("TypeII impurity requires ratio_nn <= 1");
  }
}

/// Rescales the bonds surrounding the impurity; its own NN and NNN bonds stay
/// put. Bonds that would reach past a chain end are skipped.
template <typename Real>
CouplingProfile<Real> apply_impurity(CouplingProfile<Real> profile,
                                     const ImpuritySpec<Real>& spec) {
  validate_impurity(spec, profile.n_sites);
  const int n = spec.site - 1;
  const int sites = profile.n_sites;

  auto scale_nn = [&](int a, Real ratio) {
    if (a >= 1 && a + 1 <= sites) profile.j1_bonds[a - 1] *= ratio;
  };
  auto scale_nnn = [&](int a, Real ratio) {
    if (a >= 1 && a + 2 <= sites) profile.j2_bonds[a - 1] *= ratio;
  };

  const bool compress = spec.kind == ImpurityKind::TypeI;
  const Real outer = compress ? spec.ratio_nnn_strong : spec.ratio_nnn_weak;
  const Real middle = compress ? spec.ratio_nnn_weak : spec.ratio_nnn_strong;

  scale_nn(n - 1, spec.ratio_nn);  // (n-1, n)
  scale_nn(n + 2, spec.ratio_nn);  // (n+2, n+3)
  scale_nnn(n - 2, outer);         // (n-2, n)
  scale_nnn(n + 2, outer);         // (n+2, n+4)
  scale_nnn(n, middle);            // (n, n+2)
  return profile;
}

/// Sector block of
///   H = -sum J1 S_i.S_{i+1} - sum J2 S_i.S_{i+2} + B sum S^z_i + E sum (S_i x S_{i+1})^z
/// on an open chain, with up spins as excitations.
///
/// Hopping j -> i across an NN bond (i, i+1) picks up -J1/2 + iE/2 when the
/// excitation moves left (S_i^+ S_{i+1}^-) and -J1/2 - iE/2 when it moves
/// right. Each off-diagonal pair is written once per direction, so the result
/// is Hermitian to the bit.
template <typename Real>
ComplexMatrix<Real> build_hamiltonian(const ChainParams<Real>& params,
                                      const ExcitationBasis& basis) {
  const CouplingProfile<Real>& p = params.profile;
  const int sites = p.n_sites;
  if (basis.n_sites() != sites) {
    throw std::invalid_argument("build_hamiltonian: basis has " +
                                std::to_string(basis.n_sites()) + " sites, profile has " +
                                std::to_string(sites));
  }
  if (static_cast<int>(p.j1_bonds.size()) != sites - 1 ||
      static_cast<int>(p.j2_bonds.size()) != std::max(sites - 2, 0)) {
    throw std::invalid_argument("build_hamiltonian: malformed coupling profile");
  }

  using Cx = std::complex<Real>;
  const Eigen::Index dim = static_cast<Eigen::Index>(basis.size());
  ComplexMatrix<Real> h = ComplexMatrix<Real>::Zero(dim, dim);
  const Real zeeman = params.b_field * (Real(basis.n_excitations()) - Real(sites) / 2);
  const Real half_e = params.dm_field / 2;

  auto parity = [](SiteMask m, int a, int b) -> Real {
    return occupied(m, a) == occupied(m, b) ? Real(1) : Real(-1);
  };

  for (std::size_t col = 0; col < basis.size(); ++col) {
    const SiteMask m = basis.mask(col);
    Real diag = zeeman;
    for (int i = 1; i + 1 <= sites; ++i) diag -= p.nn(i) * parity(m, i, i + 1) / 4;
    for (int i = 1; i + 2 <= sites; ++i) diag -= p.nnn(i) * parity(m, i, i + 2) / 4;
    h(col, col) = Cx(diag, 0);

    for (int i = 1; i + 1 <= sites; ++i) {
      const bool left = occupied(m, i), right = occupied(m, i + 1);
      if (left == right) continue;
      const SiteMask moved = m ^ (SiteMask{1} << (i - 1)) ^ (SiteMask{1} << i);
      const auto row = basis.index_of_mask(moved);
      const Real sign = right ? Real(1) : Real(-1);
      h(row, col) += Cx(-p.nn(i) / 2, sign * half_e);
    }
    for (int i = 1; i + 2 <= sites; ++i) {
      if (occupied(m, i) == occupied(m, i + 2)) continue;
      const SiteMask moved = m ^ (SiteMask{1} << (i - 1)) ^ (SiteMask{1} << (i + 1));
      const auto row = basis.index_of_mask(moved);
      h(row, col) += Cx(-p.nnn(i) / 2, 0);
    }
  }
  return h;
}

/// Bare chirality sum_i (S_i x S_{i+1})^z in the sector.
template <typename Real>
ComplexMatrix<Real> chirality_operator(const ExcitationBasis& basis) {
  ChainParams<Real> bare;
  bare.profile = uniform_profile<Real>(basis.n_sites(), 0, 0);
  bare.dm_field = 1;
  return build_hamiltonian(bare, basis);
}

template <typename Real>
Real vacuum_energy(const ChainParams<Real>& params) {
  const ComplexMatrix<Real> h = build_hamiltonian(params, ExcitationBasis(params.n_sites(), 0));
  return h(0, 0).real();
}

/// exp(-i E_vac t): the all-down state is an eigenstate, so it only picks up a phase.
template <typename Real>
std::complex<Real> vacuum_phase(const ChainParams<Real>& params, Real t) {
  return std::polar(Real(1), -vacuum_energy(params) * t);
}

}  // namespace mqst
