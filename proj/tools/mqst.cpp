// Command-line frontend: evolve / sweep / periodogram / validate.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mqst/config.hpp"
#include "mqst/conformance.hpp"
#include "mqst/runner.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::string out;
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
};

void print_error(const std::string& type, const std::string& key, const std::string& message) {
  nlohmann::json record = {{"error", {{"type", type}, {"key", key}, {"message", message}}}};
  std::cerr << record.dump() << "\n";
}

mqst::ExperimentConfig load(const Overrides& o, std::optional<mqst::RunMode> mode) {
  mqst::ExperimentConfig c = mqst::load_config(o.config_path);
  if (mode) c.run.mode = *mode;
  if (!o.out.empty()) c.output.path = o.out;
  if (o.workers) c.run.workers = *o.workers;
  if (o.seed) c.run.seed = *o.seed;
  mqst::validate_config(c);
  return c;
}

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "Experiment config (JSON)")->required();
  cmd->add_option("--out", o.out, "Output file; '-' for stdout");
  cmd->add_option("--workers", o.workers, "Sweep worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "Seed for Monte Carlo oracles");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kicked multiferroic spin-chain state transfer"};
  app.require_subcommand(1);

  Overrides o;
  std::string report_path;
  auto* evolve = app.add_subcommand("evolve", "Fidelity series versus kick count");
  auto* sweep = app.add_subcommand("sweep", "Maximum fidelity over a parameter grid");
  auto* pgram = app.add_subcommand("periodogram", "DFT of a fidelity series");
  auto* validate = app.add_subcommand("validate", "Check a config and optionally write the oracle conformance report");
  for (auto* cmd : {evolve, sweep, pgram, validate}) add_common(cmd, o);
  validate->add_option("--report", report_path, "Write the Bell-formula conformance report here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) {
      const auto c = load(o, std::nullopt);
      if (report_path.empty()) {
        std::cout << mqst::serialize_config(c);
        return 0;
      }
      mqst::ConformanceOptions opts;
      opts.j1 = c.chain.j1;
      opts.j2 = c.chain.j2;
      opts.e0 = c.drive.e0;
      opts.e1 = c.drive.e1;
      opts.tau = c.drive.tau;
      opts.seed = c.run.seed;
      opts.u0 = c.drive.u0_convention;
      mqst::write_table(mqst::conformance_report(opts).table(), c.output.format, report_path);
      return 0;
    }
    std::optional<mqst::RunMode> mode;
    if (evolve->parsed()) mode = mqst::RunMode::Evolve;
    if (sweep->parsed()) mode = mqst::RunMode::Sweep;
    if (pgram->parsed()) mode = mqst::RunMode::Periodogram;
    mqst::run(load(o, mode));
  } catch (const mqst::ConfigError& e) {
    print_error("config", e.key(), e.what());
    return 2;
  } catch (const mqst::SweepError& e) {
    print_error("sweep", "run.grid[" + std::to_string(e.grid_index()) + "]", e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("runtime", "", e.what());
    return 1;
  }
  return 0;
}
