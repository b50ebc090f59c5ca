#include "mqst/runner.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace mqst {

Table evolve_table(const ExperimentConfig& c) {
  const DrivePoint point = drive_point(c);
  const auto series = fidelity_series(point, c.run.states, c.drive.n_kicks);

  Table t;
  t.columns = {"kick_index", "time"};
  if (c.output.physical_time_column) t.columns.push_back("physical_time_ps");
  for (auto s : c.run.states) t.columns.push_back("fidelity_" + to_string(s));
  t.columns.push_back("classical_threshold");

  for (int m = 0; m <= c.drive.n_kicks; ++m) {
    const double time = c.drive.tau * m;
    std::vector<Cell> row{std::int64_t{m}, time};
    if (c.output.physical_time_column) row.emplace_back(kPicosecondsPerTimeUnit * time);
    for (const auto& s : series) row.emplace_back(s.values[static_cast<std::size_t>(m)]);
    row.emplace_back(classical_threshold<double>());
    t.add_row(std::move(row));
  }
  return t;
}

Table sweep_table(const ExperimentConfig& c) {
  const SweepResult result = sweep_axis(sweep_plan(c));
  Table t;
  t.columns = {"grid_value", "state", "max_fidelity", "argmax_tau", "argmax_kicks", "out_of_range_flag"};
  for (const auto& r : result.rows) {
    t.add_row({r.grid_value, to_string(r.state), r.best.value, r.best.argmax_tau,
               std::int64_t{r.best.argmax_kicks}, r.best.out_of_range});
  }
  return t;
}

Table periodogram_table(const ExperimentConfig& c) {
  const auto series = fidelity_series(drive_point(c), c.run.states.front(), c.drive.n_kicks);
  const Periodogram p = periodogram(series.values);
  Table t;
  t.columns = {"bin", "frequency_per_kick", "magnitude", "dominant"};
  for (std::size_t k = 0; 2 * k <= p.magnitudes.size(); ++k) {
    t.add_row({static_cast<std::int64_t>(k), p.frequencies[k], p.magnitudes[k], p.dominant_bin == k});
  }
  return t;
}

Table run_table(const ExperimentConfig& c) {
  switch (c.run.mode) {
    case RunMode::Evolve: return evolve_table(c);
    case RunMode::Sweep: return sweep_table(c);
    case RunMode::Periodogram: return periodogram_table(c);
  }
  throw std::logic_error("run_table: unknown mode");
}

std::string render(const Table& table, OutputFormat format) {
  std::ostringstream out;
  if (format == OutputFormat::Csv) {
    write_csv(table, out);
  } else {
    write_json(table, out);
  }
  return out.str();
}

void write_table(const Table& table, OutputFormat format, const std::string& path) {
  const std::string text = render(table, format);
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("failed writing output file '" + path + "'");
}

void run(const ExperimentConfig& c) { write_table(run_table(c), c.output.format, c.output.path); }

}  // namespace mqst
