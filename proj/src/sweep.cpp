#include "mqst/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

namespace mqst {

namespace {

using Cx = std::complex<double>;
using Vec = ComplexVector<double>;

bool wants(const std::vector<StateTag>& states, StateTag tag) {
  return std::find(states.begin(), states.end(), tag) != states.end();
}

void check_states(int n_sites, const std::vector<StateTag>& states) {
  if (states.empty()) throw std::invalid_argument("no states requested");
  if ((wants(states, StateTag::Omega1) || wants(states, StateTag::Omega2)) && n_sites < 4) {
    throw std::invalid_argument("Bell-pair transfer needs n_sites >= 4");
  }
}

/// Evaluates the requested fidelities from the evolved sender images. Holds
/// the receiver-side ordinals so each snapshot is a handful of lookups.
class SnapshotEvaluator {
 public:
  SnapshotEvaluator(int n_sites, const std::vector<StateTag>& states, Omega2Convention omega2)
      : n_(n_sites), states_(states), omega2_(omega2) {
    check_states(n_sites, states);
    if (wants(states, StateTag::Omega0) || wants(states, StateTag::Omega1)) {
      one_.emplace(n_sites, 1);
      at_n_ = one_->index_of({n_});
      at_n1_ = one_->index_of({n_ - 1});
    }
    if (wants(states, StateTag::Omega2)) {
      two_.emplace(n_sites, 2);
      for (int site = 1; site <= n_ - 2; ++site) {
        cross_.push_back({two_->index_of({site, n_ - 1}), two_->index_of({site, n_})});
      }
      last_ = two_->index_of({n_ - 1, n_});
    }
  }

  bool needs_second_sender() const { return wants(states_, StateTag::Omega1); }
  const std::optional<ExcitationBasis>& one() const { return one_; }
  const std::optional<ExcitationBasis>& two() const { return two_; }

  /// from1/from2: k=1 images of |{1}> and |{2}>; from12: k=2 image of |{1,2}>.
  void append(std::vector<FidelitySeries>& out, const Vec* from1, const Vec* from2,
              const Vec* from12, Cx vacuum) const {
    const Cx gauge = std::conj(vacuum);
    for (std::size_t s = 0; s < states_.size(); ++s) {
      double value = 0;
      bool flagged = false;
      switch (states_[s]) {
        case StateTag::Omega0:
          value = single_qubit_fidelity(at(*from1, at_n_) * gauge);
          break;
        case StateTag::Omega1:
          value = bell_fidelity_omega1(at(*from1, at_n1_), at(*from2, at_n_), at(*from2, at_n1_),
                                       at(*from1, at_n_));
          break;
        case StateTag::Omega2: {
          Omega2Amplitudes<double> g;
          g.cross.reserve(cross_.size());
          for (const auto& [a, b] : cross_) g.cross.push_back({at(*from12, a) * gauge, at(*from12, b) * gauge});
          g.last = at(*from12, last_) * gauge;
          const auto v = bell_fidelity_omega2(g, omega2_);
          value = v.value;
          flagged = v.out_of_range;
          break;
        }
      }
      out[s].values.push_back(value);
      out[s].out_of_range.push_back(flagged);
    }
  }

  std::vector<FidelitySeries> empty_series(std::size_t reserve) const {
    std::vector<FidelitySeries> out(states_.size());
    for (std::size_t s = 0; s < states_.size(); ++s) {
      out[s].state = states_[s];
      out[s].values.reserve(reserve);
      out[s].out_of_range.reserve(reserve);
    }
    return out;
  }

 private:
  static Cx at(const Vec& v, std::size_t i) { return v(static_cast<Eigen::Index>(i)); }

  int n_;
  std::vector<StateTag> states_;
  Omega2Convention omega2_;
  std::optional<ExcitationBasis> one_, two_;
  std::size_t at_n_ = 0, at_n1_ = 0, last_ = 0;
  std::vector<std::pair<std::size_t, std::size_t>> cross_;
};

Vec unit(const ExcitationBasis& basis, const SiteSet& config) {
  return basis_state<double>(basis, config).amplitudes;
}

}  // namespace

std::vector<FidelitySeries> fidelity_series(const DrivePoint& point,
                                            const std::vector<StateTag>& states, int m_max) {
  if (m_max < 0) throw std::invalid_argument("fidelity_series: m_max must be >= 0");
  validate_schedule(point.schedule);
  const int n = point.chain.n_sites();
  const SnapshotEvaluator eval(n, states, point.omega2);

  Vec from1, from2, from12, scratch;
  ComplexMatrix<double> step1, step2;
  if (eval.one()) {
    step1 = kick_step(point.chain, point.schedule, *eval.one(), point.u0).matrix;
    from1 = unit(*eval.one(), {1});
    if (eval.needs_second_sender()) from2 = unit(*eval.one(), {2});
  }
  if (eval.two()) {
    step2 = kick_step(point.chain, point.schedule, *eval.two(), point.u0).matrix;
    from12 = unit(*eval.two(), {1, 2});
  }
  const double e_vac = vacuum_energy(point.chain);

  auto out = eval.empty_series(static_cast<std::size_t>(m_max) + 1);
  for (int m = 0;; ++m) {
    const Cx vac = std::polar(1.0, -e_vac * point.schedule.tau * m);
    eval.append(out, &from1, &from2, &from12, vac);
    if (m == m_max) break;
    auto advance = [&scratch](const ComplexMatrix<double>& u, Vec& v) {
      if (v.size() == 0) return;
      scratch.noalias() = u * v;
      v.swap(scratch);
    };
    advance(step1, from1);
    advance(step1, from2);
    advance(step2, from12);
  }
  return out;
}

FidelitySeries fidelity_series(const DrivePoint& point, StateTag state, int m_max) {
  return fidelity_series(point, std::vector<StateTag>{state}, m_max).front();
}

std::vector<FidelitySeries> continuous_fidelity_series(const ChainParams<double>& chain,
                                                       const std::vector<StateTag>& states,
                                                       double dt, int n_steps,
                                                       Omega2Convention omega2) {
  if (n_steps < 0) throw std::invalid_argument("continuous_fidelity_series: n_steps must be >= 0");
  const SnapshotEvaluator eval(chain.n_sites(), states, omega2);

  // psi(t) = V diag(exp(-i lambda t)) V^dagger psi0, evaluated exactly at each t.
  struct Spectral {
    Eigendecomposition<double> eig;
    std::vector<Vec> coefficients;
    Vec evolve(std::size_t which, double t) const {
      Vec c = coefficients[which];
      for (Eigen::Index i = 0; i < c.size(); ++i) c(i) *= std::polar(1.0, -eig.eigenvalues(i) * t);
      return eig.eigenvectors * c;
    }
  };
  auto prepare = [&](const ExcitationBasis& basis, std::vector<SiteSet> sources) {
    Spectral s{eigendecompose(build_hamiltonian(chain, basis)), {}};
    for (const auto& src : sources) s.coefficients.push_back(s.eig.eigenvectors.adjoint() * unit(basis, src));
    return s;
  };

  std::optional<Spectral> one, two;
  if (eval.one()) {
    std::vector<SiteSet> sources{{1}};
    if (eval.needs_second_sender()) sources.push_back({2});
    one = prepare(*eval.one(), sources);
  }
  if (eval.two()) two = prepare(*eval.two(), {{1, 2}});
  const double e_vac = vacuum_energy(chain);

  auto out = eval.empty_series(static_cast<std::size_t>(n_steps) + 1);
  Vec from1, from2, from12;
  for (int k = 0; k <= n_steps; ++k) {
    const double t = dt * k;
    if (one) {
      from1 = one->evolve(0, t);
      if (one->coefficients.size() > 1) from2 = one->evolve(1, t);
    }
    if (two) from12 = two->evolve(0, t);
    eval.append(out, &from1, &from2, &from12, std::polar(1.0, -e_vac * t));
  }
  return out;
}

namespace {

void scan(MaxFidelity& best, bool& seeded, const FidelitySeries& series, double tau, bool retain) {
  for (std::size_t m = 0; m < series.values.size(); ++m) {
    const double v = series.values[m];
    if (!seeded || v > best.value) {
      seeded = true;
      best.value = v;
      best.argmax_tau = tau;
      best.argmax_kicks = static_cast<int>(m);
      best.out_of_range = series.out_of_range[m];
      if (retain) best.series = series.values;
    }
  }
}

}  // namespace

std::vector<MaxFidelity> max_fidelity(const DrivePoint& point, const std::vector<double>& tau_grid,
                                      int m_max, const std::vector<StateTag>& states,
                                      bool retain_series) {
  if (tau_grid.empty()) throw std::invalid_argument("max_fidelity: empty tau grid");
  std::vector<MaxFidelity> best(states.size());
  std::vector<bool> seeded(states.size(), false);
  DrivePoint p = point;
  for (double tau : tau_grid) {
    p.schedule.tau = tau;
    const auto all = fidelity_series(p, states, m_max);
    for (std::size_t s = 0; s < states.size(); ++s) {
      bool seed = seeded[s];
      scan(best[s], seed, all[s], tau, retain_series);
      seeded[s] = seed;
    }
  }
  return best;
}

MaxFidelity max_fidelity(const DrivePoint& point, const std::vector<double>& tau_grid, int m_max,
                         StateTag state) {
  return max_fidelity(point, tau_grid, m_max, std::vector<StateTag>{state}).front();
}

std::vector<MaxFidelity> max_fidelity_continuous(const DrivePoint& point, int t_max,
                                                 const std::vector<StateTag>& states,
                                                 bool retain_series) {
  if (t_max < 1) throw std::invalid_argument("max_fidelity_continuous: t_max must be >= 1");
  ChainParams<double> chain = point.chain;
  chain.dm_field = point.schedule.e0;
  const auto all = continuous_fidelity_series(chain, states, 1.0, t_max, point.omega2);
  std::vector<MaxFidelity> best(states.size());
  for (std::size_t s = 0; s < states.size(); ++s) {
    bool seeded = false;
    scan(best[s], seeded, all[s], 1.0, retain_series);
    best[s].continuous = true;
  }
  return best;
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Tau: return "tau";
    case SweepAxis::E1: return "e1";
    case SweepAxis::J2OverJ1: return "j2_over_j1";
    case SweepAxis::ImpurityRatio: return "impurity_ratio";
    case SweepAxis::KickCount: return "kick_count";
  }
  return "unknown";
}

SweepAxis parse_sweep_axis(const std::string& name) {
  for (auto axis : {SweepAxis::Tau, SweepAxis::E1, SweepAxis::J2OverJ1, SweepAxis::ImpurityRatio,
                    SweepAxis::KickCount}) {
    if (to_string(axis) == name) return axis;
  }
  throw std::invalid_argument("unknown sweep axis '" + name + "'");
}

namespace {

void require_increasing(const std::vector<double>& grid, const char* what) {
  if (grid.empty()) throw std::invalid_argument(std::string(what) + " is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw std::invalid_argument(std::string(what) + " has a non-finite value");
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw std::invalid_argument(std::string(what) + " must be strictly increasing");
    }
  }
}

}  // namespace

void validate_plan(const SweepPlan& plan) {
  if (plan.n_sites < 2) throw std::invalid_argument("sweep plan: n_sites must be >= 2");
  check_states(plan.n_sites, plan.states);
  require_increasing(plan.grid, "sweep grid");
  if (plan.axis == SweepAxis::Tau) {
    if (plan.grid.front() <= 0) throw std::invalid_argument("sweep grid: tau values must be > 0");
  } else {
    require_increasing(plan.tau_grid, "tau grid");
    if (plan.tau_grid.front() <= 0) throw std::invalid_argument("tau grid: values must be > 0");
  }
  if (plan.axis == SweepAxis::KickCount) {
    for (double v : plan.grid) {
      if (v < 1 || v != std::floor(v)) throw std::invalid_argument("kick_count grid needs integers >= 1");
    }
  } else if (plan.m_max < 1) {
    throw std::invalid_argument("sweep plan: m_max must be >= 1");
  }
  if (plan.axis == SweepAxis::ImpurityRatio && !plan.impurity) {
    throw std::invalid_argument("impurity_ratio axis requires an impurity block");
  }
  if (plan.impurity) validate_impurity(*plan.impurity, plan.n_sites);
  if (plan.workers < 1) throw std::invalid_argument("sweep plan: workers must be >= 1");
  if (plan.continuous_t_max < 1) throw std::invalid_argument("sweep plan: continuous_t_max must be >= 1");
}

ImpuritySpec<double> impurity_at_strength(const ImpuritySpec<double>& base, double r, double slope) {
  ImpuritySpec<double> spec = base;
  const double companion = 1 + slope * (r - 1);
  if (base.kind == ImpurityKind::TypeI) {
    spec.ratio_nn = r;
    spec.ratio_nnn_strong = r;
    spec.ratio_nnn_weak = companion;
  } else {
    spec.ratio_nnn_strong = r;
    spec.ratio_nn = companion;
    spec.ratio_nnn_weak = companion;
  }
  return spec;
}

PlannedPoint plan_point(const SweepPlan& plan, double value) {
  double j2 = plan.j2, e1 = plan.e1;
  int m_max = plan.m_max;
  std::vector<double> taus = plan.tau_grid;
  std::optional<ImpuritySpec<double>> impurity = plan.impurity;
  switch (plan.axis) {
    case SweepAxis::Tau: taus = {value}; break;
    case SweepAxis::E1: e1 = value; break;
    case SweepAxis::J2OverJ1: j2 = value * plan.j1; break;
    case SweepAxis::ImpurityRatio:
      impurity = impurity_at_strength(*plan.impurity, value, plan.companion_slope);
      break;
    case SweepAxis::KickCount: m_max = static_cast<int>(value); break;
  }
  PlannedPoint out;
  out.point.chain.profile = uniform_profile(plan.n_sites, plan.j1, j2);
  if (impurity) out.point.chain.profile = apply_impurity(out.point.chain.profile, *impurity);
  out.point.chain.dm_field = plan.e0;
  out.point.chain.b_field = plan.b_field;
  out.point.schedule = {taus.front(), plan.e0, e1, 0};
  out.point.u0 = plan.u0;
  out.point.omega2 = plan.omega2;
  out.tau_grid = std::move(taus);
  out.m_max = m_max;
  return out;
}

SweepResult sweep_axis(const SweepPlan& plan) {
  validate_plan(plan);
  const std::size_t n_points = plan.grid.size();
  std::vector<std::vector<MaxFidelity>> results(n_points);
  std::vector<std::string> failures(n_points);
  std::vector<char> failed(n_points, 0);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < n_points; i = next++) {
      try {
        const PlannedPoint pp = plan_point(plan, plan.grid[i]);
        if (plan.continuous_when_unkicked && pp.point.schedule.e1 == 0) {
          results[i] = max_fidelity_continuous(pp.point, plan.continuous_t_max, plan.states,
                                               plan.retain_series);
        } else {
          results[i] = max_fidelity(pp.point, pp.tau_grid, pp.m_max, plan.states, plan.retain_series);
        }
      } catch (const std::exception& e) {
        failed[i] = 1;
        failures[i] = e.what();
      }
    }
  };

  const auto n_threads = static_cast<std::size_t>(std::min<std::size_t>(plan.workers, n_points));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t i = 0; i < n_points; ++i) {
    if (failed[i]) throw SweepError(i, failures[i]);
  }

  SweepResult out;
  out.rows.reserve(n_points * plan.states.size());
  for (std::size_t i = 0; i < n_points; ++i) {
    for (std::size_t s = 0; s < plan.states.size(); ++s) {
      out.rows.push_back({i, plan.grid[i], plan.states[s], std::move(results[i][s])});
    }
  }
  return out;
}

double Periodogram::median_nonzero_magnitude() const {
  if (magnitudes.size() < 2) return 0;
  std::vector<double> m(magnitudes.begin() + 1, magnitudes.end());
  std::sort(m.begin(), m.end());
  const std::size_t h = m.size() / 2;
  return m.size() % 2 ? m[h] : (m[h - 1] + m[h]) / 2;
}

Periodogram periodogram(const std::vector<double>& series) {
  const std::size_t len = series.size();
  if (len < 4) throw std::invalid_argument("periodogram: series needs at least 4 samples");

  double mean = 0, scale = 1;
  for (double v : series) {
    mean += v;
    scale = std::max(scale, std::abs(v));
  }
  mean /= double(len);

  Periodogram p;
  p.frequencies.resize(len);
  p.magnitudes.resize(len);
  for (std::size_t k = 0; k < len; ++k) {
    Cx acc = 0;
    for (std::size_t j = 0; j < len; ++j) {
      // Reduce jk mod L first so the phase stays accurate for long series.
      const double angle = -2.0 * std::numbers::pi * double((j * k) % len) / double(len);
      acc += (series[j] - mean) * std::polar(1.0, angle);
    }
    p.magnitudes[k] = std::abs(acc);
    p.frequencies[k] = (2 * k <= len ? double(k) : double(k) - double(len)) / double(len);
  }

  // Real input: bin L-k mirrors bin k, so the one-sided half decides. Strict
  // comparison in increasing k keeps the lowest frequency on ties.
  std::optional<std::size_t> best;
  for (std::size_t k = 1; 2 * k <= len; ++k) {
    if (!best || p.magnitudes[k] > p.magnitudes[*best]) best = k;
  }
  if (best && p.magnitudes[*best] > 1e-12 * double(len) * scale) {
    p.dominant_bin = best;
    p.dominant_frequency = std::abs(p.frequencies[*best]);
  }
  return p;
}

}  // namespace mqst
