#pragma once

// Full 2^N Hilbert-space reference built from explicit spin-1/2 tensor
// products and exponentiated with Eigen's Pade matrix exponential. Shares no
// code path with the sector machinery. Local basis per site: index 0 = down,
// index 1 = up; site s is bit (s - 1) of the full index.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <complex>
#include <vector>

namespace oracle {

using Cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat sx() {
  Mat m(2, 2);
  m << 0, 0.5, 0.5, 0;
  return m;
}
inline Mat sy() {
  // sigma_y / 2 written in (down, up) order.
  Mat m(2, 2);
  m << 0, Cx(0, 0.5), Cx(0, -0.5), 0;
  return m;
}
inline Mat sz() {
  Mat m(2, 2);
  m << -0.5, 0, 0, 0.5;
  return m;
}

/// op acting on `site` (1-based), identity elsewhere.
inline Mat embed(const Mat& op, int site, int n) {
  Mat out = Mat::Identity(1, 1);
  for (int s = n; s >= 1; --s) {
    Mat next = Eigen::kroneckerProduct(out, s == site ? op : Mat::Identity(2, 2)).eval();
    out = std::move(next);
  }
  return out;
}

struct Couplings {
  int n = 0;
  std::vector<double> j1;  // bond (i, i+1) at j1[i-1]
  std::vector<double> j2;  // bond (i, i+2) at j2[i-1]
  double e = 0;
  double b = 0;
};

inline Mat dot(int i, int j, int n) {
  return embed(sx(), i, n) * embed(sx(), j, n) + embed(sy(), i, n) * embed(sy(), j, n) +
         embed(sz(), i, n) * embed(sz(), j, n);
}

inline Mat chirality_z(int i, int j, int n) {
  return embed(sx(), i, n) * embed(sy(), j, n) - embed(sy(), i, n) * embed(sx(), j, n);
}

inline Mat hamiltonian(const Couplings& c) {
  const int n = c.n;
  const Eigen::Index dim = Eigen::Index{1} << n;
  Mat h = Mat::Zero(dim, dim);
  for (int i = 1; i < n; ++i) h -= c.j1[i - 1] * dot(i, i + 1, n);
  for (int i = 1; i + 2 <= n; ++i) h -= c.j2[i - 1] * dot(i, i + 2, n);
  for (int i = 1; i <= n; ++i) h += c.b * embed(sz(), i, n);
  for (int i = 1; i < n; ++i) h += c.e * chirality_z(i, i + 1, n);
  return h;
}

inline Mat total_sz(int n) {
  Mat m = Mat::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
  for (int i = 1; i <= n; ++i) m += embed(sz(), i, n);
  return m;
}

inline Mat expm(const Mat& h, double t) { return (Cx(0, -t) * h).exp(); }

/// U1 U0 with U0 = exp(-i H0 tau), U1 = exp(-i e1 sum (S_i x S_{i+1})^z).
inline Mat kick(Couplings c, double e0, double e1, double tau) {
  c.e = e0;
  const Mat u0 = expm(hamiltonian(c), tau);
  Couplings bare{c.n, std::vector<double>(c.j1.size(), 0.0), std::vector<double>(c.j2.size(), 0.0), 1.0, 0.0};
  const Mat u1 = expm(hamiltonian(bare), e1);
  return u1 * u0;
}

/// Reduced density matrix on (r1, r2), basis index 2*q_{r1} + q_{r2}.
inline Eigen::Matrix4cd reduce_pair(const Vec& psi, int n, int r1, int r2) {
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  const long dim = 1L << n;
  const long m1 = 1L << (r1 - 1), m2 = 1L << (r2 - 1);
  for (long x = 0; x < dim; ++x) {
    if (x & (m1 | m2)) continue;  // x enumerates environment patterns
    Eigen::Vector4cd v;
    for (int q = 0; q < 4; ++q) {
      long idx = x;
      if (q & 2) idx |= m1;
      if (q & 1) idx |= m2;
      v(q) = psi(idx);
    }
    rho += v * v.adjoint();
  }
  return rho;
}

/// Reduced state of a single site, basis (down, up).
inline Eigen::Matrix2cd reduce_site(const Vec& psi, int n, int r) {
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
  const long dim = 1L << n, mr = 1L << (r - 1);
  for (long x = 0; x < dim; ++x) {
    if (x & mr) continue;
    Eigen::Vector2cd v(psi(x), psi(x | mr));
    rho += v * v.adjoint();
  }
  return rho;
}

}  // namespace oracle
