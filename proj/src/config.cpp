#include "mqst/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mqst {

using nlohmann::json;

namespace {

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const json& obj, const std::string& where, std::set<std::string> allowed) {
  if (!obj.is_object()) throw ConfigError(where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(join(where, key), "unknown key");
  }
}

template <typename T>
void read(const json& obj, const std::string& where, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(join(where, key), std::string("wrong type (") + e.what() + ")");
  }
}

void read_number(const json& obj, const std::string& where, const char* key, double& out) {
  if (!obj.contains(key)) return;
  if (!obj.at(key).is_number()) throw ConfigError(join(where, key), "expected a number");
  out = obj.at(key).get<double>();
}

void read_int(const json& obj, const std::string& where, const char* key, int& out) {
  if (!obj.contains(key)) return;
  if (!obj.at(key).is_number_integer()) throw ConfigError(join(where, key), "expected an integer");
  out = obj.at(key).get<int>();
}

std::vector<double> read_grid(const json& node, const std::string& where) {
  if (node.is_array()) {
    std::vector<double> out;
    for (const auto& v : node) {
      if (!v.is_number()) throw ConfigError(where, "grid entries must be numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }
  reject_unknown(node, where, {"start", "stop", "step"});
  for (const char* k : {"start", "stop", "step"}) {
    if (!node.contains(k) || !node.at(k).is_number()) throw ConfigError(join(where, k), "required number");
  }
  try {
    return linear_grid(node.at("start").get<double>(), node.at("stop").get<double>(),
                       node.at("step").get<double>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where, e.what());
  }
}

std::string u0_name(U0Convention c) {
  return c == U0Convention::HamiltonianTau ? "hamiltonian_tau" : "literal_eq5";
}
std::string omega2_name(Omega2Convention c) {
  return c == Omega2Convention::ReAmplitude ? "re_amplitude" : "abs_amplitude";
}
std::string mode_name(RunMode m) {
  switch (m) {
    case RunMode::Evolve: return "evolve";
    case RunMode::Sweep: return "sweep";
    case RunMode::Periodogram: return "periodogram";
  }
  return "";
}
std::string kind_name(ImpurityKind k) { return k == ImpurityKind::TypeI ? "type_i" : "type_ii"; }

template <typename Enum>
Enum pick(const std::string& key, const std::string& value,
          std::initializer_list<std::pair<const char*, Enum>> options) {
  for (const auto& [name, e] : options) {
    if (value == name) return e;
  }
  throw ConfigError(key, "unrecognized value '" + value + "'");
}

}  // namespace

std::vector<double> linear_grid(double start, double stop, double step) {
  if (!(step > 0) || !std::isfinite(start) || !std::isfinite(stop) || stop < start) {
    throw std::invalid_argument("grid needs finite start <= stop and step > 0");
  }
  const auto count = static_cast<long>(std::floor((stop - start) / step + 0.5)) + 1;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    out.push_back(std::round((start + double(i) * step) * 1e12) / 1e12);
  }
  return out;
}

std::vector<double> default_tau_grid() { return linear_grid(0.1, 10.0, 0.1); }

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("parse error: ") + e.what());
  }
  if (doc.is_null()) doc = json::object();
  reject_unknown(doc, "", {"chain", "drive", "impurity", "run", "output"});

  ExperimentConfig c;
  c.run.tau_grid = default_tau_grid();

  if (doc.contains("chain")) {
    const json& n = doc.at("chain");
    reject_unknown(n, "chain", {"n_sites", "j1", "j2", "b_field"});
    read_int(n, "chain", "n_sites", c.chain.n_sites);
    read_number(n, "chain", "j1", c.chain.j1);
    read_number(n, "chain", "j2", c.chain.j2);
    read_number(n, "chain", "b_field", c.chain.b_field);
  }

  if (doc.contains("drive")) {
    const json& n = doc.at("drive");
    reject_unknown(n, "drive", {"e0", "e1", "tau", "n_kicks", "u0_convention", "omega2_convention"});
    read_number(n, "drive", "e0", c.drive.e0);
    read_number(n, "drive", "e1", c.drive.e1);
    read_number(n, "drive", "tau", c.drive.tau);
    read_int(n, "drive", "n_kicks", c.drive.n_kicks);
    std::string s;
    if (n.contains("u0_convention")) {
      read(n, "drive", "u0_convention", s);
      c.drive.u0_convention = pick<U0Convention>(
          "drive.u0_convention", s,
          {{"hamiltonian_tau", U0Convention::HamiltonianTau}, {"literal_eq5", U0Convention::LiteralEq5}});
    }
    if (n.contains("omega2_convention")) {
      read(n, "drive", "omega2_convention", s);
      c.drive.omega2_convention = pick<Omega2Convention>(
          "drive.omega2_convention", s,
          {{"re_amplitude", Omega2Convention::ReAmplitude},
           {"abs_amplitude", Omega2Convention::AbsAmplitude}});
    }
  }

  if (doc.contains("impurity") && !doc.at("impurity").is_null()) {
    const json& n = doc.at("impurity");
    reject_unknown(n, "impurity", {"kind", "site", "ratio_nn", "ratio_nnn_strong", "ratio_nnn_weak"});
    ImpuritySpec<double> spec;
    if (!n.contains("kind")) throw ConfigError("impurity.kind", "required");
    std::string kind;
    read(n, "impurity", "kind", kind);
    spec.kind = pick<ImpurityKind>("impurity.kind", kind,
                                   {{"type_i", ImpurityKind::TypeI}, {"type_ii", ImpurityKind::TypeII}});
    spec.site = default_impurity_site(c.chain.n_sites);
    read_int(n, "impurity", "site", spec.site);
    read_number(n, "impurity", "ratio_nn", spec.ratio_nn);
    read_number(n, "impurity", "ratio_nnn_strong", spec.ratio_nnn_strong);
    read_number(n, "impurity", "ratio_nnn_weak", spec.ratio_nnn_weak);
    c.impurity = spec;
  }

  if (doc.contains("run")) {
    const json& n = doc.at("run");
    reject_unknown(n, "run",
                   {"mode", "states", "axis", "grid", "tau_grid", "m_max", "seed", "workers",
                    "continuous_when_unkicked", "continuous_t_max", "companion_slope", "retain_series"});
    std::string s;
    if (n.contains("mode")) {
      read(n, "run", "mode", s);
      c.run.mode = pick<RunMode>("run.mode", s,
                                 {{"evolve", RunMode::Evolve},
                                  {"sweep", RunMode::Sweep},
                                  {"periodogram", RunMode::Periodogram}});
    }
    if (n.contains("states")) {
      std::vector<std::string> names;
      read(n, "run", "states", names);
      c.run.states.clear();
      for (const auto& name : names) {
        try {
          c.run.states.push_back(parse_state_tag(name));
        } catch (const std::invalid_argument& e) {
          throw ConfigError("run.states", e.what());
        }
      }
    }
    if (n.contains("axis")) {
      read(n, "run", "axis", s);
      try {
        c.run.axis = parse_sweep_axis(s);
      } catch (const std::invalid_argument& e) {
        throw ConfigError("run.axis", e.what());
      }
    }
    if (n.contains("grid")) c.run.grid = read_grid(n.at("grid"), "run.grid");
    if (n.contains("tau_grid")) c.run.tau_grid = read_grid(n.at("tau_grid"), "run.tau_grid");
    read_int(n, "run", "m_max", c.run.m_max);
    if (n.contains("seed")) {
      if (!n.at("seed").is_number_unsigned()) throw ConfigError("run.seed", "expected a non-negative integer");
      c.run.seed = n.at("seed").get<std::uint64_t>();
    }
    read_int(n, "run", "workers", c.run.workers);
    read(n, "run", "continuous_when_unkicked", c.run.continuous_when_unkicked);
    read_int(n, "run", "continuous_t_max", c.run.continuous_t_max);
    read_number(n, "run", "companion_slope", c.run.companion_slope);
    read(n, "run", "retain_series", c.run.retain_series);
  }

  if (doc.contains("output")) {
    const json& n = doc.at("output");
    reject_unknown(n, "output", {"path", "format", "physical_time_column"});
    read(n, "output", "path", c.output.path);
    if (n.contains("format")) {
      std::string s;
      read(n, "output", "format", s);
      c.output.format =
          pick<OutputFormat>("output.format", s, {{"csv", OutputFormat::Csv}, {"json", OutputFormat::Json}});
    }
    read(n, "output", "physical_time_column", c.output.physical_time_column);
  }

  validate_config(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  json doc;
  doc["chain"] = {{"n_sites", c.chain.n_sites},
                  {"j1", c.chain.j1},
                  {"j2", c.chain.j2},
                  {"b_field", c.chain.b_field}};
  doc["drive"] = {{"e0", c.drive.e0},
                  {"e1", c.drive.e1},
                  {"tau", c.drive.tau},
                  {"n_kicks", c.drive.n_kicks},
                  {"u0_convention", u0_name(c.drive.u0_convention)},
                  {"omega2_convention", omega2_name(c.drive.omega2_convention)}};
  if (c.impurity) {
    doc["impurity"] = {{"kind", kind_name(c.impurity->kind)},
                       {"site", c.impurity->site},
                       {"ratio_nn", c.impurity->ratio_nn},
                       {"ratio_nnn_strong", c.impurity->ratio_nnn_strong},
                       {"ratio_nnn_weak", c.impurity->ratio_nnn_weak}};
  }
  json states = json::array();
  for (auto s : c.run.states) states.push_back(to_string(s));
  doc["run"] = {{"mode", mode_name(c.run.mode)},
                {"states", states},
                {"axis", to_string(c.run.axis)},
                {"grid", c.run.grid},
                {"tau_grid", c.run.tau_grid},
                {"m_max", c.run.m_max},
                {"seed", c.run.seed},
                {"workers", c.run.workers},
                {"continuous_when_unkicked", c.run.continuous_when_unkicked},
                {"continuous_t_max", c.run.continuous_t_max},
                {"companion_slope", c.run.companion_slope},
                {"retain_series", c.run.retain_series}};
  doc["output"] = {{"path", c.output.path},
                   {"format", c.output.format == OutputFormat::Csv ? "csv" : "json"},
                   {"physical_time_column", c.output.physical_time_column}};
  return doc.dump(2) + "\n";
}

void validate_config(const ExperimentConfig& c) {
  if (c.chain.n_sites < 2 || c.chain.n_sites > kMaxSites) {
    throw ConfigError("chain.n_sites", "must lie in [2, " + std::to_string(kMaxSites) + "]");
  }
  for (auto [key, v] : {std::pair{"chain.j1", c.chain.j1}, {"chain.j2", c.chain.j2},
                        {"chain.b_field", c.chain.b_field}, {"drive.e0", c.drive.e0},
                        {"drive.e1", c.drive.e1}}) {
    if (!std::isfinite(v)) throw ConfigError(key, "must be finite");
  }
  if (!(c.drive.tau > 0) || !std::isfinite(c.drive.tau)) throw ConfigError("drive.tau", "must be > 0");
  if (c.drive.n_kicks < 0) throw ConfigError("drive.n_kicks", "must be >= 0");
  if (c.impurity) {
    try {
      validate_impurity(*c.impurity, c.chain.n_sites);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("impurity", e.what());
    }
  }
  if (c.run.states.empty()) throw ConfigError("run.states", "must not be empty");
  const bool bell = std::any_of(c.run.states.begin(), c.run.states.end(),
                                [](StateTag t) { return t != StateTag::Omega0; });
  if (bell && c.chain.n_sites < 4) throw ConfigError("run.states", "Bell-pair transfer needs n_sites >= 4");
  if (c.run.workers < 1) throw ConfigError("run.workers", "must be >= 1");
  if (c.run.mode == RunMode::Periodogram && c.drive.n_kicks + 1 < 4) {
    throw ConfigError("drive.n_kicks", "periodogram needs at least 4 samples (n_kicks >= 3)");
  }
  if (c.run.mode == RunMode::Sweep) {
    try {
      validate_plan(sweep_plan(c));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("run", e.what());
    }
  }
}

ChainParams<double> chain_params(const ExperimentConfig& c) {
  ChainParams<double> p;
  p.profile = uniform_profile(c.chain.n_sites, c.chain.j1, c.chain.j2);
  if (c.impurity) p.profile = apply_impurity(p.profile, *c.impurity);
  p.dm_field = c.drive.e0;
  p.b_field = c.chain.b_field;
  return p;
}

DrivePoint drive_point(const ExperimentConfig& c) {
  DrivePoint d;
  d.chain = chain_params(c);
  d.schedule = {c.drive.tau, c.drive.e0, c.drive.e1, c.drive.n_kicks};
  d.u0 = c.drive.u0_convention;
  d.omega2 = c.drive.omega2_convention;
  return d;
}

SweepPlan sweep_plan(const ExperimentConfig& c) {
  SweepPlan p;
  p.n_sites = c.chain.n_sites;
  p.j1 = c.chain.j1;
  p.j2 = c.chain.j2;
  p.b_field = c.chain.b_field;
  p.impurity = c.impurity;
  p.e0 = c.drive.e0;
  p.e1 = c.drive.e1;
  p.u0 = c.drive.u0_convention;
  p.omega2 = c.drive.omega2_convention;
  p.axis = c.run.axis;
  p.grid = c.run.grid;
  p.tau_grid = c.run.tau_grid;
  p.m_max = c.run.m_max;
  p.states = c.run.states;
  p.continuous_when_unkicked = c.run.continuous_when_unkicked;
  p.continuous_t_max = c.run.continuous_t_max;
  p.companion_slope = c.run.companion_slope;
  p.retain_series = c.run.retain_series;
  p.workers = c.run.workers;
  return p;
}

}  // namespace mqst
