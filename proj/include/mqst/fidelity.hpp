#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mqst/chain_model.hpp"
#include "mqst/propagator.hpp"
#include "mqst/sector_basis.hpp"

namespace mqst {

/// Input state families: a single qubit, b|01> + c|10>, and a|00> + d|11>.
enum class StateTag { Omega0, Omega1, Omega2 };

/// Reading of the final Re term in the two-excitation Bell formula.
enum class Omega2Convention { ReAmplitude, AbsAmplitude };

std::string to_string(StateTag tag);
StateTag parse_state_tag(std::string_view name);

template <typename Real = double>
constexpr Real classical_threshold() {
  return Real(2) / Real(3);
}

/// 1/2 + |f| cos(arg f)/3 + |f|^2/6, the Bloch-sphere average for a qubit sent
/// through an amplitude-damping channel with transfer amplitude f.
template <typename Real>
Real single_qubit_fidelity(std::complex<Real> f) {
  const Real mod = std::abs(f);
  if (mod > Real(1) + Real(1e-9)) {
    throw std::domain_error("single_qubit_fidelity: |f| = " + std::to_string(double(mod)) +
                            " exceeds 1");
  }
  // |f| cos(arg f) = Re f; one division keeps rational cases exact.
  return (3 + 2 * std::real(f) + mod * mod) / 6;
}

/// Family-averaged fidelity for b|01> + c|10> sent from sites (1, 2) to (N-1, N).
/// Arguments are f_{r,s} = <r|U|s>.
template <typename Real>
Real bell_fidelity_omega1(std::complex<Real> f_n1_1, std::complex<Real> f_n_2,
                          std::complex<Real> f_n1_2, std::complex<Real> f_n_1) {
  const Real direct = std::norm(f_n1_1) + std::norm(f_n_2);
  const Real crossed = std::norm(f_n1_2) + std::norm(f_n_1);
  return (2 * direct + crossed + 2 * std::real(f_n_2 * std::conj(f_n1_1))) / 6;
}

template <typename Real>
struct Omega2Amplitudes {
  /// For n = 1..N-2: (g_{1,2}^{n,N-1}, g_{1,2}^{n,N}).
  std::vector<std::array<std::complex<Real>, 2>> cross;
  /// g_{1,2}^{N-1,N}.
  std::complex<Real> last{};
};

template <typename Real>
struct Omega2Value {
  Real value = 0;
  bool out_of_range = false;
};

/// Two-excitation Bell formula exactly as printed; not clamped. Values outside
/// [0, 1] are flagged.
template <typename Real>
Omega2Value<Real> bell_fidelity_omega2(const Omega2Amplitudes<Real>& g,
                                       Omega2Convention convention = Omega2Convention::ReAmplitude) {
  Real leak = 0;
  for (const auto& pair : g.cross) leak += std::norm(pair[0]) + std::norm(pair[1]);
  const Real re_term =
      convention == Omega2Convention::ReAmplitude ? std::real(g.last) : std::abs(g.last);
  Omega2Value<Real> out;
  out.value = (3 - leak + 2 * (std::norm(g.last) + re_term)) / 6;
  out.out_of_range = out.value < 0 || out.value > 1;
  return out;
}

template <typename Real>
struct FidelityRecord {
  StateTag state_tag = StateTag::Omega0;
  Real value = 0;
  bool out_of_range = false;
  std::vector<std::complex<Real>> amplitude_payload;
  int kick_index = 0;
  Real time = 0;
  std::string point_id;
};

/// b|01> + c|10> (Omega1) or a|00> + d|11> (Omega2). `first` multiplies |01>
/// or |00>, `second` multiplies |10> or |11>; the left qubit sits on the
/// lower site.
template <typename Real>
struct BellInput {
  StateTag family = StateTag::Omega1;
  std::complex<Real> first{};
  std::complex<Real> second{};

  static BellInput maximally_entangled(StateTag family) {
    const Real h = Real(1) / std::sqrt(Real(2));
    return make(family, {h, 0}, {h, 0});
  }

  static BellInput make(StateTag family, std::complex<Real> first, std::complex<Real> second) {
    if (family == StateTag::Omega0) {
      throw std::invalid_argument("BellInput: family must be Omega1 or Omega2");
    }
    if (std::abs(std::norm(first) + std::norm(second) - Real(1)) > Real(1e-12)) {
      throw std::invalid_argument("BellInput: coefficients are not normalized");
    }
    return {family, first, second};
  }

  bool maximally_entangled_flag() const {
    const Real h = Real(1) / std::sqrt(Real(2));
    return std::abs(first - std::complex<Real>(h)) < Real(1e-12) &&
           std::abs(second - std::complex<Real>(h)) < Real(1e-12);
  }

  /// Amplitudes on |q1 q2> with index 2*q1 + q2, q = 1 meaning spin up.
  Eigen::Matrix<std::complex<Real>, 4, 1> two_qubit_vector() const {
    Eigen::Matrix<std::complex<Real>, 4, 1> v = decltype(v)::Zero();
    if (family == StateTag::Omega1) {
      v(1) = first;
      v(2) = second;
    } else {
      v(0) = first;
      v(3) = second;
    }
    return v;
  }
};

template <typename Real>
using Evolution = std::variant<ContinuousEvolution<Real>, KickedEvolution<Real>>;

/// Time elapsed by an evolution: t, or n_kicks * tau.
template <typename Real>
Real elapsed_time(const Evolution<Real>& evolution) {
  if (const auto* c = std::get_if<ContinuousEvolution<Real>>(&evolution)) return c->t;
  const auto& k = std::get<KickedEvolution<Real>>(evolution);
  return k.schedule.tau * Real(k.schedule.n_kicks);
}

/// Evolves `psi0` within its sector. Continuous evolution uses `params` as
/// given; kicked evolution takes the static field from the schedule.
template <typename Real>
StateVector<Real> evolve_in_sector(const ChainParams<Real>& params, const Evolution<Real>& evolution,
                                   const ExcitationBasis& basis, const StateVector<Real>& psi0) {
  if (const auto* c = std::get_if<ContinuousEvolution<Real>>(&evolution)) {
    const auto u = unitary_exp(build_hamiltonian(params, basis), c->t, Sector::of(basis));
    return {u.matrix * psi0.amplitudes, psi0.sector};
  }
  const auto& k = std::get<KickedEvolution<Real>>(evolution);
  return evolve_kicked(kick_step(params, k.schedule, basis, k.convention), k.schedule.n_kicks, psi0);
}

/// Phase of the all-down state after the evolution. The chirality vanishes
/// on the vacuum, so kicks leave it untouched.
template <typename Real>
std::complex<Real> evolved_vacuum_phase(const ChainParams<Real>& params,
                                        const Evolution<Real>& evolution) {
  return vacuum_phase(params, elapsed_time(evolution));
}

namespace detail {

template <typename Real>
using Qubit4 = Eigen::Matrix<std::complex<Real>, 4, 1>;

/// Output state grouped by environment configuration: for every occupation
/// pattern of the non-receiver sites, the 4 amplitudes over the receiver pair.
template <typename Real>
using ReceiverSlices = std::map<SiteMask, Qubit4<Real>>;

template <typename Real>
void accumulate_slices(ReceiverSlices<Real>& slices, const ExcitationBasis& basis,
                       const ComplexVector<Real>& amps, std::complex<Real> weight, int r1, int r2) {
  const SiteMask receiver = (SiteMask{1} << (r1 - 1)) | (SiteMask{1} << (r2 - 1));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const SiteMask m = basis.mask(i);
    const int q = 2 * int(occupied(m, r1)) + int(occupied(m, r2));
    auto [it, inserted] = slices.try_emplace(m & ~receiver, Qubit4<Real>::Zero());
    it->second(q) += weight * amps(static_cast<Eigen::Index>(i));
  }
}

/// Evolved images of the two components of a Bell family input, sliced by
/// environment. Component 0 carries `first`, component 1 carries `second`.
template <typename Real>
std::array<ReceiverSlices<Real>, 2> bell_component_slices(const ChainParams<Real>& params,
                                                          const Evolution<Real>& evolution,
                                                          StateTag family) {
  const int n = params.n_sites();
  if (n < 4) throw std::invalid_argument("bell fidelity: need N >= 4 so sender and receiver pairs are disjoint");
  const int r1 = n - 1, r2 = n;
  std::array<ReceiverSlices<Real>, 2> out;
  if (family == StateTag::Omega1) {
    const ExcitationBasis one(n, 1);
    // |01> on (1,2) has the excitation on site 2; |10> on site 1.
    const SiteSet sources[2] = {{2}, {1}};
    for (int c = 0; c < 2; ++c) {
      const auto psi = evolve_in_sector(params, evolution, one, basis_state<Real>(one, sources[c]));
      accumulate_slices(out[c], one, psi.amplitudes, std::complex<Real>(1), r1, r2);
    }
  } else if (family == StateTag::Omega2) {
    const ExcitationBasis vac(n, 0);
    ComplexVector<Real> v(1);
    v(0) = evolved_vacuum_phase(params, evolution);
    accumulate_slices(out[0], vac, v, std::complex<Real>(1), r1, r2);
    const ExcitationBasis two(n, 2);
    const auto psi = evolve_in_sector(params, evolution, two, basis_state<Real>(two, {1, 2}));
    accumulate_slices(out[1], two, psi.amplitudes, std::complex<Real>(1), r1, r2);
  } else {
    throw std::invalid_argument("bell fidelity: family must be Omega1 or Omega2");
  }
  return out;
}

template <typename Real>
Eigen::Matrix<std::complex<Real>, 4, 4> reduce(const std::array<ReceiverSlices<Real>, 2>& parts,
                                               std::complex<Real> first, std::complex<Real> second) {
  std::map<SiteMask, Qubit4<Real>> combined;
  for (const auto& [env, v] : parts[0]) combined[env] = first * v;
  for (const auto& [env, v] : parts[1]) {
    auto [it, inserted] = combined.try_emplace(env, Qubit4<Real>::Zero());
    it->second += second * v;
  }
  Eigen::Matrix<std::complex<Real>, 4, 4> rho = decltype(rho)::Zero();
  for (const auto& [env, v] : combined) rho.noalias() += v * v.adjoint();
  return rho;
}

}  // namespace detail

/// Reduced density matrix of sites (N-1, N) after sending `input` from sites
/// (1, 2) over an all-down background. Basis |q1 q2>, index 2*q1 + q2.
template <typename Real>
Eigen::Matrix<std::complex<Real>, 4, 4> receiver_density_matrix(const ChainParams<Real>& params,
                                                                const Evolution<Real>& evolution,
                                                                const BellInput<Real>& input) {
  const auto parts = detail::bell_component_slices(params, evolution, input.family);
  return detail::reduce(parts, input.first, input.second);
}

/// <Omega| rho_out |Omega> with the same Bell state relabeled onto (N-1, N).
template <typename Real>
Real bell_fidelity_direct(const ChainParams<Real>& params, const Evolution<Real>& evolution,
                          const BellInput<Real>& input) {
  const auto parts = detail::bell_component_slices(params, evolution, input.family);
  if (input.maximally_entangled_flag()) {
    // Factor out the 1/sqrt(2) normalizations: <Omega|rho|Omega> is a quarter of
    // the same overlap taken with unit coefficients.
    const std::complex<Real> one(1);
    const auto rho = detail::reduce(parts, one, one);
    const auto omega = BellInput<Real>{input.family, one, one}.two_qubit_vector();
    return (omega.adjoint() * rho * omega)(0, 0).real() / 4;
  }
  const auto rho = detail::reduce(parts, input.first, input.second);
  const auto omega = input.two_qubit_vector();
  return (omega.adjoint() * rho * omega)(0, 0).real();
}

/// Monte Carlo mean of bell_fidelity_direct over Haar-random coefficient
/// pairs of one family, drawn from a generator seeded with `seed`.
template <typename Real>
Real bell_fidelity_family_average(const ChainParams<Real>& params, const Evolution<Real>& evolution,
                                  StateTag family, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("bell_fidelity_family_average: samples must be >= 1");
  const auto parts = detail::bell_component_slices(params, evolution, family);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Real sum = 0;
  for (int s = 0; s < samples; ++s) {
    std::complex<Real> x(normal(rng), normal(rng));
    std::complex<Real> y(normal(rng), normal(rng));
    const Real scale = std::sqrt(std::norm(x) + std::norm(y));
    x /= scale;
    y /= scale;
    const auto rho = detail::reduce(parts, x, y);
    BellInput<Real> in{family, x, y};
    const auto omega = in.two_qubit_vector();
    sum += (omega.adjoint() * rho * omega)(0, 0).real();
  }
  return sum / Real(samples);
}

}  // namespace mqst
