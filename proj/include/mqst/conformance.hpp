#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mqst/fidelity.hpp"
#include "mqst/propagator.hpp"
#include "mqst/table.hpp"

namespace mqst {

/// Points at which the closed-form Bell fidelities are checked against the
/// reduced-density-matrix oracle.
struct ConformanceOptions {
  std::vector<int> n_sites{4, 5, 6};
  double j1 = 1;
  double j2 = -1;
  double e0 = 0.1;
  double e1 = 1;
  double tau = 2.0;
  std::vector<double> times{0.0, 0.7, 2.3, 5.1};
  std::vector<int> kicks{0, 3, 10};
  int samples = 20000;
  std::uint64_t seed = 0;
  U0Convention u0 = U0Convention::HamiltonianTau;
};

struct ConformanceRow {
  int n_sites = 0;
  std::string evolution;  // continuous | kicked
  double time = 0;
  int kicks = 0;
  StateTag state = StateTag::Omega1;
  std::string formula;  // omega1 | omega2_re_amplitude | omega2_abs_amplitude
  std::string gauge;    // raw | vacuum_relative | invariant
  double literal = 0;
  bool out_of_range = false;
  double oracle_maximal = 0;
  double oracle_family_mean = 0;

  double deviation_maximal() const { return literal - oracle_maximal; }
  double deviation_family() const { return literal - oracle_family_mean; }
};

struct ConformanceReport {
  std::vector<ConformanceRow> rows;

  Table table() const;
};

ConformanceReport conformance_report(const ConformanceOptions& options);

}  // namespace mqst
