#pragma once

#include <string>

#include "mqst/config.hpp"
#include "mqst/table.hpp"

namespace mqst {

/// Physical time per unit of hbar/|J1| under the tau = 1 <-> 0.5 ps calibration.
constexpr double kPicosecondsPerTimeUnit = 0.5;

Table evolve_table(const ExperimentConfig& config);
Table sweep_table(const ExperimentConfig& config);
Table periodogram_table(const ExperimentConfig& config);

/// Dispatches on config.run.mode.
Table run_table(const ExperimentConfig& config);

std::string render(const Table& table, OutputFormat format);

/// Writes `table` to `path`, or to standard output when `path` is empty or "-".
void write_table(const Table& table, OutputFormat format, const std::string& path);

/// Runs the configured experiment and writes its output file.
void run(const ExperimentConfig& config);

}  // namespace mqst
