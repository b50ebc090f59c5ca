#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mqst/chain_model.hpp"
#include "mqst/fidelity.hpp"
#include "mqst/propagator.hpp"

namespace mqst {

/// Everything needed to evaluate a kicked fidelity series at one parameter
/// point. `chain.dm_field` is ignored by the kicked path (E0 comes from the
/// schedule) and used as the static field by the continuous path.
struct DrivePoint {
  ChainParams<double> chain;
  KickSchedule<double> schedule;
  U0Convention u0 = U0Convention::HamiltonianTau;
  Omega2Convention omega2 = Omega2Convention::ReAmplitude;
};

/// Fidelity values for one state along an evolution; `out_of_range[i]` marks
/// literal two-excitation values outside [0, 1].
struct FidelitySeries {
  StateTag state = StateTag::Omega0;
  std::vector<double> values;
  std::vector<bool> out_of_range;
};

/// Stroboscopic series at kick counts 0..m_max, one entry per requested state.
/// Transfer amplitudes are taken relative to the vacuum phase, the gauge in
/// which the closed-form fidelities hold.
std::vector<FidelitySeries> fidelity_series(const DrivePoint& point,
                                            const std::vector<StateTag>& states, int m_max);

FidelitySeries fidelity_series(const DrivePoint& point, StateTag state, int m_max);

/// Continuous evolution under H0 (static field chain.dm_field) sampled at
/// t = k * dt for k = 0..n_steps.
std::vector<FidelitySeries> continuous_fidelity_series(const ChainParams<double>& chain,
                                                       const std::vector<StateTag>& states,
                                                       double dt, int n_steps,
                                                       Omega2Convention omega2);

struct MaxFidelity {
  double value = 0;
  double argmax_tau = 0;  // in continuous mode: the sampling step
  int argmax_kicks = 0;   // in continuous mode: the step index (t = tau * kicks)
  bool out_of_range = false;
  bool continuous = false;
  std::vector<double> series;  // series at the argmax tau, when retained
};

/// Exhaustive maximum over tau_grid x {0..m_max}; ties resolve to the smallest
/// tau, then the smallest kick count.
std::vector<MaxFidelity> max_fidelity(const DrivePoint& point, const std::vector<double>& tau_grid,
                                      int m_max, const std::vector<StateTag>& states,
                                      bool retain_series = false);

MaxFidelity max_fidelity(const DrivePoint& point, const std::vector<double>& tau_grid, int m_max,
                         StateTag state);

/// Unkicked reference: maximum over integer times 0..t_max of continuous
/// evolution with the static field E0.
std::vector<MaxFidelity> max_fidelity_continuous(const DrivePoint& point, int t_max,
                                                 const std::vector<StateTag>& states,
                                                 bool retain_series = false);

enum class SweepAxis { Tau, E1, J2OverJ1, ImpurityRatio, KickCount };

std::string to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(const std::string& name);

struct SweepPlan {
  int n_sites = 10;
  double j1 = 1;
  double j2 = -1;
  double b_field = 0;
  std::optional<ImpuritySpec<double>> impurity;
  double e0 = 0.1;
  double e1 = 1;
  U0Convention u0 = U0Convention::HamiltonianTau;
  Omega2Convention omega2 = Omega2Convention::ReAmplitude;

  SweepAxis axis = SweepAxis::Tau;
  std::vector<double> grid;
  /// Inner kick-interval lattice for every axis except Tau.
  std::vector<double> tau_grid;
  int m_max = 500;
  std::vector<StateTag> states{StateTag::Omega0};

  /// With E1 = 0 use the continuous reference on times 0..continuous_t_max
  /// instead of the tau x m lattice.
  bool continuous_when_unkicked = true;
  int continuous_t_max = 5000;
  /// ImpurityRatio axis: companion ratios follow 1 + slope * (r - 1).
  double companion_slope = -0.25;
  bool retain_series = false;
  int workers = 1;
};

void validate_plan(const SweepPlan& plan);

struct SweepRow {
  std::size_t grid_index = 0;
  double grid_value = 0;
  StateTag state = StateTag::Omega0;
  MaxFidelity best;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // grid-major, then in plan.states order
};

class SweepError : public std::runtime_error {
 public:
  SweepError(std::size_t grid_index, const std::string& what)
      : std::runtime_error("sweep point " + std::to_string(grid_index) + ": " + what),
        grid_index_(grid_index) {}
  std::size_t grid_index() const { return grid_index_; }

 private:
  std::size_t grid_index_;
};

/// The drive point a plan describes at grid value `value`, and the inner
/// tau lattice and kick budget that go with it.
struct PlannedPoint {
  DrivePoint point;
  std::vector<double> tau_grid;
  int m_max = 0;
};

PlannedPoint plan_point(const SweepPlan& plan, double value);

/// Impurity ratios used at strength r along the ImpurityRatio axis.
ImpuritySpec<double> impurity_at_strength(const ImpuritySpec<double>& base, double r, double slope);

/// Evaluates every grid point, possibly on several threads. Output order and
/// values do not depend on the worker count.
SweepResult sweep_axis(const SweepPlan& plan);

struct Periodogram {
  std::vector<double> frequencies;  // cycles per sample, signed, bin k -> k/L or (k-L)/L
  std::vector<double> magnitudes;   // |X_k| of the unnormalized forward DFT
  std::optional<std::size_t> dominant_bin;
  std::optional<double> dominant_frequency;  // |frequency| of dominant_bin

  /// Median magnitude over the nonzero bins.
  double median_nonzero_magnitude() const;
};

/// DFT of the mean-subtracted series. Parseval: sum x^2 = (1/L) sum |X_k|^2.
Periodogram periodogram(const std::vector<double>& series);

}  // namespace mqst
