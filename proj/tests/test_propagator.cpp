#include <doctest.h>

#include <numbers>
#include <random>

#include "mqst/propagator.hpp"
#include "support/pauli_oracle.hpp"

using namespace mqst;
using Cx = std::complex<double>;
using Mat = ComplexMatrix<double>;

namespace {

ChainParams<double> chain(int n, double j1, double j2, double e = 0) {
  ChainParams<double> c;
  c.profile = uniform_profile(n, j1, j2);
  c.dm_field = e;
  return c;
}

Mat random_hermitian(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> g;
  Mat a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = Cx(g(rng), g(rng));
  return (a + a.adjoint()) / 2.0;
}

}  // namespace

TEST_SUITE("propagator") {

TEST_CASE("eigendecompose: closed forms and ordering") {
  Mat h(2, 2);
  h << 0.25, -0.5, -0.5, 0.25;
  const auto e = eigendecompose(h);
  CHECK(e.eigenvalues(0) == doctest::Approx(-0.25).epsilon(1e-14));
  CHECK(e.eigenvalues(1) == doctest::Approx(0.75).epsilon(1e-14));

  const auto id = eigendecompose<double>(Mat::Identity(4, 4));
  for (int i = 0; i < 4; ++i) CHECK(id.eigenvalues(i) == doctest::Approx(1.0));
  CHECK(unitarity_defect(id.eigenvectors) < 1e-12);

  Mat d = Mat::Zero(3, 3);
  d(0, 0) = 3;
  d(1, 1) = 1;
  d(2, 2) = 2;
  const auto s = eigendecompose(d);
  CHECK(s.eigenvalues(0) == doctest::Approx(1));
  CHECK(s.eigenvalues(1) == doctest::Approx(2));
  CHECK(s.eigenvalues(2) == doctest::Approx(3));
}

TEST_CASE("eigendecompose: reconstruction and rejection") {
  std::mt19937_64 rng(3);
  for (int dim : {1, 5, 20, 45}) {
    const Mat h = random_hermitian(rng, dim);
    const auto e = eigendecompose(h);
    const Mat back = e.eigenvectors * e.eigenvalues.cast<Cx>().asDiagonal() * e.eigenvectors.adjoint();
    CHECK((back - h).cwiseAbs().maxCoeff() <= 1e-10 * dim);
  }
  Mat bad(2, 2);
  bad << 0, 1, 0, 0;
  CHECK_THROWS_AS(eigendecompose(bad), std::invalid_argument);
}

TEST_CASE("unitary_exp at t = 0 is the identity") {
  std::mt19937_64 rng(4);
  const Mat h = random_hermitian(rng, 6);
  CHECK(unitary_exp(h, 0.0).matrix == Mat::Identity(6, 6));
}

TEST_CASE("two-site Heisenberg transfer at t = pi") {
  const ExcitationBasis b(2, 1);
  const auto u = unitary_exp(build_hamiltonian(chain(2, 1, 0), b), std::numbers::pi, Sector::of(b));
  const Cx expected = Cx(0, 1) * std::polar(1.0, -std::numbers::pi / 4);
  CHECK(std::abs(u.matrix(1, 0) - expected) < 1e-12);
  CHECK(std::abs(u.matrix(1, 0)) == doctest::Approx(1.0));
}

TEST_CASE("unitary_exp is unitary") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> t(-50, 50);
  for (int rep = 0; rep < 20; ++rep) {
    const Mat h = random_hermitian(rng, 1 + rep * 2);
    CHECK(unitarity_defect(unitary_exp(h, t(rng)).matrix) <= 1e-10);
  }
}

TEST_CASE("kick_step without kick is free evolution") {
  const auto p = chain(6, 1, -1);
  const ExcitationBasis b(6, 2);
  const KickSchedule<double> s{0.8, 0.3, 0.0, 0};
  const auto step = kick_step(p, s, b);
  auto free = p;
  free.dm_field = 0.3;
  const auto u = unitary_exp(build_hamiltonian(free, b), 0.8);
  CHECK((step.matrix - u.matrix).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("kick_step as tau -> 0 approaches the bare kick") {
  const auto p = chain(5, 1, -1);
  const ExcitationBasis b(5, 1);
  const auto step = kick_step(p, KickSchedule<double>{1e-8, 0.1, 1.3, 0}, b);
  const auto kick = unitary_exp(chirality_operator<double>(b), 1.3);
  CHECK((step.matrix - kick.matrix).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("kick_step at the ten-site reference point is unitary") {
  for (int k = 0; k <= 2; ++k) {
    const auto step = kick_step(chain(10, 1, -1), KickSchedule<double>{2.0, 0.1, 1.0, 0}, ExcitationBasis(10, k));
    CHECK(unitarity_defect(step.matrix) <= 1e-10);
    CHECK(std::holds_alternative<KickedEvolution<double>>(step.provenance));
  }
}

TEST_CASE("literal U0 convention differs only through the static field") {
  const auto p = chain(5, 1, -1);
  const ExcitationBasis b(5, 1);
  const KickSchedule<double> no_static{1.7, 0.0, 0.6, 0};
  const auto a = kick_step(p, no_static, b, U0Convention::HamiltonianTau);
  const auto l = kick_step(p, no_static, b, U0Convention::LiteralEq5);
  CHECK((a.matrix - l.matrix).cwiseAbs().maxCoeff() < 1e-12);

  const KickSchedule<double> with_static{1.7, 0.4, 0.6, 0};
  const auto a2 = kick_step(p, with_static, b, U0Convention::HamiltonianTau);
  const auto l2 = kick_step(p, with_static, b, U0Convention::LiteralEq5);
  CHECK((a2.matrix - l2.matrix).cwiseAbs().maxCoeff() > 1e-3);
  CHECK(unitarity_defect(l2.matrix) < 1e-10);
}

TEST_CASE("kick_step rejects bad schedules") {
  CHECK_THROWS_AS(kick_step(chain(4, 1, -1), KickSchedule<double>{-1.0, 0, 0, 0}, ExcitationBasis(4, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(kick_step(chain(4, 1, -1), KickSchedule<double>{1.0, 0, 0, 0}, ExcitationBasis(5, 1)),
                  std::invalid_argument);
}

TEST_CASE("evolve_kicked: identity, composition, sector check") {
  const auto p = chain(7, 1, -1);
  const ExcitationBasis b(7, 2);
  const auto step = kick_step(p, KickSchedule<double>{2.1, 0.1, 1.0, 0}, b);
  const auto psi0 = basis_state<double>(b, {1, 2});

  CHECK(evolve_kicked(step, 0, psi0).amplitudes == psi0.amplitudes);

  const auto twice = evolve_kicked(step, 2, psi0);
  const auto once_once = evolve_kicked(step, 1, evolve_kicked(step, 1, psi0));
  CHECK((twice.amplitudes - once_once.amplitudes).cwiseAbs().maxCoeff() < 1e-14);

  for (auto [a, c] : {std::pair{3, 5}, {17, 40}, {0, 9}}) {
    const auto joint = evolve_kicked(step, a + c, psi0);
    const auto split = evolve_kicked(step, c, evolve_kicked(step, a, psi0));
    CHECK((joint.amplitudes - split.amplitudes).cwiseAbs().maxCoeff() <= 1e-10);
  }

  const auto far = evolve_kicked(step, 300, psi0);
  CHECK(std::abs(far.norm() - 1.0) <= 1e-9 * 300);

  CHECK_THROWS_AS(evolve_kicked(step, 1, basis_state<double>(ExcitationBasis(7, 1), {1})),
                  std::invalid_argument);
  CHECK_THROWS_AS(evolve_kicked(step, -1, psi0), std::invalid_argument);
}

TEST_CASE("unkicked Floquet collapses to continuous evolution") {
  const auto p = chain(8, 1, -1);
  const ExcitationBasis b(8, 1);
  const KickSchedule<double> s{0.9, 0.1, 0.0, 0};
  const auto step = kick_step(p, s, b);
  auto free = p;
  free.dm_field = s.e0;
  const auto h = build_hamiltonian(free, b);
  const auto psi0 = basis_state<double>(b, {1});
  for (int m : {1, 10, 57}) {
    const auto kicked = evolve_kicked(step, m, psi0);
    const ComplexVector<double> direct = unitary_exp(h, 0.9 * m).matrix * psi0.amplitudes;
    CHECK((kicked.amplitudes - direct).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("energy is conserved along continuous evolution") {
  const auto p = chain(9, 1, -1, 0.1);
  const ExcitationBasis b(9, 2);
  const auto h = build_hamiltonian(p, b);
  ComplexVector<double> psi = ComplexVector<double>::Zero(long(b.size()));
  psi(0) = Cx(0.6, 0);
  psi(7) = Cx(0, 0.8);
  const double e0 = (psi.adjoint() * h * psi)(0, 0).real();
  for (double t : {0.5, 3.0, 40.0, 999.0}) {
    const ComplexVector<double> phi = unitary_exp(h, t).matrix * psi;
    CHECK(std::abs((phi.adjoint() * h * phi)(0, 0).real() - e0) <= 1e-9);
  }
}

TEST_CASE("amplitude_series boundary entries") {
  const auto p = chain(10, 1, -1);
  const ExcitationBasis b(10, 1);
  const KickSchedule<double> s{2.0, 0.1, 1.0, 0};
  const auto same = amplitude_series(p, s, b, {1}, {1}, 3);
  const auto other = amplitude_series(p, s, b, {1}, {10}, 3);
  REQUIRE(same.size() == 4);
  CHECK(same[0] == Cx(1, 0));
  CHECK(other[0] == Cx(0, 0));
  const auto step = kick_step(p, s, b);
  const auto psi = evolve_kicked(step, 3, basis_state<double>(b, {1}));
  CHECK(std::abs(other[3] - psi.amplitudes(9)) < 1e-15);
}

TEST_CASE("sector amplitudes agree with the full-space oracle") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.5, 1.5), tau(0.2, 3.0);
  for (int n = 3; n <= 6; ++n) {
    ChainParams<double> p;
    p.profile = uniform_profile(n, u(rng), u(rng));
    p.dm_field = u(rng);
    p.b_field = u(rng);
    const oracle::Couplings oc{n, p.profile.j1_bonds, p.profile.j2_bonds, p.dm_field, p.b_field};
    const double t = tau(rng) * 3;
    const KickSchedule<double> s{tau(rng), u(rng), u(rng), 0};
    const oracle::Mat full_t = oracle::expm(oracle::hamiltonian(oc), t);
    const oracle::Mat full_step = oracle::kick(oc, s.e0, s.e1, s.tau);
    for (int k = 0; k <= 2; ++k) {
      const ExcitationBasis b(n, k);
      const auto ut = unitary_exp(build_hamiltonian(p, b), t).matrix;
      const auto us = kick_step(p, s, b).matrix;
      double worst = 0;
      for (std::size_t r = 0; r < b.size(); ++r)
        for (std::size_t c = 0; c < b.size(); ++c) {
          worst = std::max(worst, std::abs(ut(r, c) - full_t(long(b.mask(r)), long(b.mask(c)))));
          worst = std::max(worst, std::abs(us(r, c) - full_step(long(b.mask(r)), long(b.mask(c)))));
        }
      CHECK(worst <= 1e-9);
    }
  }
}

}
