#include "mqst/conformance.hpp"

#include <random>

namespace mqst {

namespace {

using Cx = std::complex<double>;

struct Point {
  std::string label;
  Evolution<double> evolution;
  double time;
  int kicks;
};

}  // namespace

ConformanceReport conformance_report(const ConformanceOptions& o) {
  std::vector<Point> points;
  for (double t : o.times) points.push_back({"continuous", ContinuousEvolution<double>{t}, t, 0});
  for (int m : o.kicks) {
    KickedEvolution<double> k{{o.tau, o.e0, o.e1, m}, o.u0};
    points.push_back({"kicked", k, o.tau * m, m});
  }

  std::mt19937_64 seeds(o.seed);
  ConformanceReport report;
  for (int n : o.n_sites) {
    ChainParams<double> chain;
    chain.profile = uniform_profile(n, o.j1, o.j2);
    chain.dm_field = o.e0;
    const ExcitationBasis one(n, 1), two(n, 2);

    for (const auto& p : points) {
      const auto a1 = evolve_in_sector(chain, p.evolution, one, basis_state<double>(one, {1})).amplitudes;
      const auto a2 = evolve_in_sector(chain, p.evolution, one, basis_state<double>(one, {2})).amplitudes;
      const auto g = evolve_in_sector(chain, p.evolution, two, basis_state<double>(two, {1, 2})).amplitudes;
      const Cx vac = evolved_vacuum_phase(chain, p.evolution);
      auto f = [&](const ComplexVector<double>& v, int site) {
        return v(static_cast<Eigen::Index>(one.index_of({site})));
      };
      auto gg = [&](int a, int b) { return g(static_cast<Eigen::Index>(two.index_of({a, b}))); };

      ConformanceRow base;
      base.n_sites = n;
      base.evolution = p.label;
      base.time = p.time;
      base.kicks = p.kicks;

      ConformanceRow r1 = base;
      r1.state = StateTag::Omega1;
      r1.formula = "omega1";
      r1.gauge = "invariant";
      r1.literal = bell_fidelity_omega1(f(a1, n - 1), f(a2, n), f(a2, n - 1), f(a1, n));
      r1.oracle_maximal =
          bell_fidelity_direct(chain, p.evolution, BellInput<double>::maximally_entangled(StateTag::Omega1));
      r1.oracle_family_mean =
          bell_fidelity_family_average(chain, p.evolution, StateTag::Omega1, o.samples, seeds());
      report.rows.push_back(r1);

      const double omega2_maximal =
          bell_fidelity_direct(chain, p.evolution, BellInput<double>::maximally_entangled(StateTag::Omega2));
      const double omega2_family =
          bell_fidelity_family_average(chain, p.evolution, StateTag::Omega2, o.samples, seeds());
      auto amplitudes = [&](Cx gauge) {
        Omega2Amplitudes<double> out;
        for (int site = 1; site <= n - 2; ++site) {
          out.cross.push_back({gg(site, n - 1) * gauge, gg(site, n) * gauge});
        }
        out.last = gg(n - 1, n) * gauge;
        return out;
      };
      struct Variant {
        const char* formula;
        const char* gauge;
        Omega2Convention convention;
        Cx factor;
      };
      for (const Variant& v : {Variant{"omega2_re_amplitude", "raw", Omega2Convention::ReAmplitude, Cx(1)},
                               Variant{"omega2_re_amplitude", "vacuum_relative",
                                       Omega2Convention::ReAmplitude, std::conj(vac)},
                               Variant{"omega2_abs_amplitude", "invariant",
                                       Omega2Convention::AbsAmplitude, Cx(1)}}) {
        ConformanceRow r2 = base;
        r2.state = StateTag::Omega2;
        r2.formula = v.formula;
        r2.gauge = v.gauge;
        const auto value = bell_fidelity_omega2(amplitudes(v.factor), v.convention);
        r2.literal = value.value;
        r2.out_of_range = value.out_of_range;
        r2.oracle_maximal = omega2_maximal;
        r2.oracle_family_mean = omega2_family;
        report.rows.push_back(r2);
      }
    }
  }
  return report;
}

Table ConformanceReport::table() const {
  Table t;
  t.columns = {"n_sites",        "evolution",         "time",          "kicks",
               "state",          "formula",           "gauge",         "literal_value",
               "out_of_range_flag", "oracle_maximal", "oracle_family_mean", "deviation_maximal",
               "deviation_family"};
  for (const auto& r : rows) {
    t.add_row({std::int64_t{r.n_sites}, r.evolution, r.time, std::int64_t{r.kicks}, to_string(r.state),
               r.formula, r.gauge, r.literal, r.out_of_range, r.oracle_maximal, r.oracle_family_mean,
               r.deviation_maximal(), r.deviation_family()});
  }
  return t;
}

}  // namespace mqst
