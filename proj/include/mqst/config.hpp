#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mqst/chain_model.hpp"
#include "mqst/fidelity.hpp"
#include "mqst/propagator.hpp"
#include "mqst/sweep.hpp"

namespace mqst {

/// Malformed or invalid experiment configuration. `key` is the dotted path of
/// the offending entry when one applies.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

enum class RunMode { Evolve, Sweep, Periodogram };
enum class OutputFormat { Csv, Json };

struct ChainBlock {
  int n_sites = 10;
  double j1 = 1;
  double j2 = -1;
  double b_field = 0;

  bool operator==(const ChainBlock&) const = default;
};

struct DriveBlock {
  double e0 = 0.1;
  double e1 = 1;
  double tau = 2.0;
  int n_kicks = 500;
  U0Convention u0_convention = U0Convention::HamiltonianTau;
  Omega2Convention omega2_convention = Omega2Convention::ReAmplitude;

  bool operator==(const DriveBlock&) const = default;
};

struct RunBlock {
  RunMode mode = RunMode::Evolve;
  std::vector<StateTag> states{StateTag::Omega0};
  SweepAxis axis = SweepAxis::Tau;
  std::vector<double> grid;
  std::vector<double> tau_grid;  // defaults to 0.1..10 step 0.1
  int m_max = 500;
  std::uint64_t seed = 0;
  int workers = 1;
  bool continuous_when_unkicked = true;
  int continuous_t_max = 5000;
  double companion_slope = -0.25;
  bool retain_series = false;

  bool operator==(const RunBlock&) const = default;
};

struct OutputBlock {
  std::string path;  // empty: standard output
  OutputFormat format = OutputFormat::Csv;
  bool physical_time_column = true;

  bool operator==(const OutputBlock&) const = default;
};

struct ExperimentConfig {
  ChainBlock chain;
  DriveBlock drive;
  std::optional<ImpuritySpec<double>> impurity;
  RunBlock run;
  OutputBlock output;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Evenly spaced grid start, start + step, ... up to stop (inclusive within
/// half a step), each value rounded to 12 decimals.
std::vector<double> linear_grid(double start, double stop, double step);

std::vector<double> default_tau_grid();

/// Parses a JSON experiment document. Missing blocks and keys take the
/// defaults above; unknown keys are rejected.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Canonical JSON form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

/// Re-checks every cross-field constraint. Throws ConfigError.
void validate_config(const ExperimentConfig& config);

ChainParams<double> chain_params(const ExperimentConfig& config);
DrivePoint drive_point(const ExperimentConfig& config);
SweepPlan sweep_plan(const ExperimentConfig& config);

}  // namespace mqst
