#pragma once

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mqst/chain_model.hpp"
#include "mqst/sector_basis.hpp"

namespace mqst {

/// Stroboscopic drive: static field e0 between delta kicks of strength e1,
/// one kick every `tau` (units of hbar/|J1|).
template <typename Real>
struct KickSchedule {
  Real tau = 1;
  Real e0 = 0;
  Real e1 = 0;
  int n_kicks = 0;

  bool operator==(const KickSchedule&) const = default;
};

template <typename Real>
void validate_schedule(const KickSchedule<Real>& s) {
  if (!(s.tau > 0) || !std::isfinite(s.tau)) {
    throw std::invalid_argument("kick schedule: tau must be > 0");
  }
  if (!std::isfinite(s.e0) || !std::isfinite(s.e1)) {
    throw std::invalid_argument("kick schedule: fields must be finite");
  }
  if (s.n_kicks < 0) throw std::invalid_argument("kick schedule: n_kicks must be >= 0");
}

/// How the free evolution between kicks is exponentiated.
///   HamiltonianTau: U0 = exp(-i H0 tau), tau multiplies every term of H0.
///   LiteralEq5:     U0 = exp(-i (H_exchange tau + E0 D)), tau left off the static DM term.
enum class U0Convention { HamiltonianTau, LiteralEq5 };

struct Sector {
  int n_sites = 0;
  int n_excitations = 0;

  static Sector of(const ExcitationBasis& b) { return {b.n_sites(), b.n_excitations()}; }
  bool operator==(const Sector&) const = default;
};

template <typename Real>
struct ContinuousEvolution {
  Real t = 0;
};

template <typename Real>
struct KickedEvolution {
  KickSchedule<Real> schedule;
  U0Convention convention = U0Convention::HamiltonianTau;
};

template <typename Real>
struct UnitaryPropagator {
  ComplexMatrix<Real> matrix;
  Sector sector;
  std::variant<ContinuousEvolution<Real>, KickedEvolution<Real>> provenance;

  Eigen::Index dim() const { return matrix.rows(); }
};

template <typename Real>
struct StateVector {
  ComplexVector<Real> amplitudes;
  Sector sector;

  Real norm() const { return amplitudes.norm(); }
};

template <typename Real>
StateVector<Real> basis_state(const ExcitationBasis& basis, const SiteSet& config) {
  StateVector<Real> s{ComplexVector<Real>::Zero(static_cast<Eigen::Index>(basis.size())),
                      Sector::of(basis)};
  s.amplitudes(static_cast<Eigen::Index>(basis.index_of(config))) = 1;
  return s;
}

template <typename Real>
struct Eigendecomposition {
  RealVector<Real> eigenvalues;        // ascending
  ComplexMatrix<Real> eigenvectors;    // columns
};

template <typename Real>
Real hermiticity_defect(const ComplexMatrix<Real>& h) {
  if (h.size() == 0) return 0;
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Real>
Real unitarity_defect(const ComplexMatrix<Real>& u) {
  if (u.size() == 0) return 0;
  const auto id = ComplexMatrix<Real>::Identity(u.rows(), u.cols());
  return (u.adjoint() * u - id).cwiseAbs().maxCoeff();
}

template <typename Real>
Eigendecomposition<Real> eigendecompose(const ComplexMatrix<Real>& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("eigendecompose: matrix is not square");
  if (hermiticity_defect(h) > Real(1e-12)) {
    throw std::invalid_argument("eigendecompose: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> solver(h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigendecompose: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// V diag(exp(-i lambda t)) V^dagger for an existing decomposition.
template <typename Real>
ComplexMatrix<Real> spectral_exp(const Eigendecomposition<Real>& eig, Real t) {
  const auto dim = eig.eigenvalues.size();
  if (t == Real(0)) return ComplexMatrix<Real>::Identity(dim, dim);
  ComplexVector<Real> phases(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases(i) = std::polar(Real(1), -eig.eigenvalues(i) * t);
  }
  return eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
}

template <typename Real>
UnitaryPropagator<Real> unitary_exp(const ComplexMatrix<Real>& h, Real t, Sector sector = {}) {
  return {spectral_exp(eigendecompose(h), t), sector, ContinuousEvolution<Real>{t}};
}

/// One Floquet period U1 U0: free evolution over tau followed by the kick
/// U1 = exp(-i E1 D). The chain's own dm_field is replaced by schedule.e0.
template <typename Real>
UnitaryPropagator<Real> kick_step(const ChainParams<Real>& params,
                                  const KickSchedule<Real>& schedule,
                                  const ExcitationBasis& basis,
                                  U0Convention convention = U0Convention::HamiltonianTau) {
  validate_schedule(schedule);
  const ComplexMatrix<Real> d = chirality_operator<Real>(basis);

  ChainParams<Real> free = params;
  ComplexMatrix<Real> u0;
  if (convention == U0Convention::HamiltonianTau) {
    free.dm_field = schedule.e0;
    u0 = spectral_exp(eigendecompose(build_hamiltonian(free, basis)), schedule.tau);
  } else {
    free.dm_field = 0;
    const ComplexMatrix<Real> generator =
        build_hamiltonian(free, basis) * schedule.tau + d * schedule.e0;
    u0 = spectral_exp(eigendecompose(generator), Real(1));
  }
  const ComplexMatrix<Real> u1 = spectral_exp(eigendecompose(d), schedule.e1);
  return {u1 * u0, Sector::of(basis), KickedEvolution<Real>{schedule, convention}};
}

/// (U1 U0)^m psi0 by repeated matrix-vector products.
template <typename Real>
StateVector<Real> evolve_kicked(const UnitaryPropagator<Real>& step, int m,
                                const StateVector<Real>& psi0) {
  if (m < 0) throw std::invalid_argument("evolve_kicked: negative kick count");
  if (!(step.sector == psi0.sector)) {
    throw std::invalid_argument("evolve_kicked: state and propagator sectors differ");
  }
  StateVector<Real> psi = psi0;
  ComplexVector<Real> scratch(psi.amplitudes.size());
  for (int i = 0; i < m; ++i) {
    scratch.noalias() = step.matrix * psi.amplitudes;
    psi.amplitudes.swap(scratch);
  }
  return psi;
}

/// <target| (U1 U0)^m |source> for m = 0..m_max.
template <typename Real>
std::vector<std::complex<Real>> amplitude_series(
    const ChainParams<Real>& params, const KickSchedule<Real>& schedule,
    const ExcitationBasis& basis, const SiteSet& source, const SiteSet& target, int m_max,
    U0Convention convention = U0Convention::HamiltonianTau) {
  if (m_max < 0) throw std::invalid_argument("amplitude_series: m_max must be >= 0");
  const auto step = kick_step(params, schedule, basis, convention);
  const auto target_index = static_cast<Eigen::Index>(basis.index_of(target));
  StateVector<Real> psi = basis_state<Real>(basis, source);

  std::vector<std::complex<Real>> out;
  out.reserve(static_cast<std::size_t>(m_max) + 1);
  out.push_back(psi.amplitudes(target_index));
  for (int m = 1; m <= m_max; ++m) {
    psi = evolve_kicked(step, 1, psi);
    out.push_back(psi.amplitudes(target_index));
  }
  return out;
}

}  // namespace mqst
