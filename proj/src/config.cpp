#include "herdfield/config.hpp"

#include <functional>
#include <sstream>

#include <json.hpp>

namespace herdfield {

using nlohmann::json;

std::string to_string(Command command) {
  switch (command) {
    case Command::solve: return "solve";
    case Command::simulate: return "simulate";
    case Command::sweep: return "sweep";
    case Command::threshold: return "threshold";
    case Command::figures: return "figures";
  }
  return "solve";
}

Command parse_command(const std::string& name) {
  for (Command c : {Command::solve, Command::simulate, Command::sweep, Command::threshold,
                    Command::figures})
    if (to_string(c) == name) return c;
  throw ConfigError("", "unknown subcommand '" + name + "'");
}

ModelParams RunConfig::params(double fallback_alpha) const {
  return ModelParams{p1, p2, alpha.value_or(fallback_alpha), delta};
}

SolverOptions RunConfig::solver_options() const {
  SolverOptions o;
  o.tol = tol;
  o.max_iter = max_iter;
  o.selection = parse_selection(selection);
  return o;
}

SweepSettings RunConfig::sweep_settings() const {
  SweepSettings s;
  s.base = params();
  s.probes = probes;
  s.grid_points = grid;
  s.solver = solver_options();
  s.horizon = horizon;
  s.herding_tol = herding_tol;
  return s;
}

namespace {

enum class Kind { real, count, text, real_list };

struct KeySpec {
  Kind kind;
  std::function<void(RunConfig&, const json&)> set;
  std::function<json(const RunConfig&)> get;
};

template <class T>
KeySpec field(Kind kind, T RunConfig::*member) {
  return {kind, [member](RunConfig& c, const json& v) { c.*member = v.get<T>(); },
          [member](const RunConfig& c) { return json(c.*member); }};
}

const std::map<std::string, KeySpec>& registry() {
  static const std::map<std::string, KeySpec> keys = [] {
    std::map<std::string, KeySpec> k;
    k.emplace("alpha", KeySpec{Kind::real, [](RunConfig& c, const json& v) { c.alpha = v.get<double>(); },
                               [](const RunConfig& c) { return c.alpha ? json(*c.alpha) : json(nullptr); }});
    k.emplace("delta", field(Kind::real, &RunConfig::delta));
    k.emplace("p1", field(Kind::real, &RunConfig::p1));
    k.emplace("p2", field(Kind::real, &RunConfig::p2));
    k.emplace("grid", field(Kind::count, &RunConfig::grid));
    k.emplace("tol", field(Kind::real, &RunConfig::tol));
    k.emplace("max_iter", field(Kind::count, &RunConfig::max_iter));
    k.emplace("selection", field(Kind::text, &RunConfig::selection));
    k.emplace("horizon", field(Kind::count, &RunConfig::horizon));
    k.emplace("z0", field(Kind::real, &RunConfig::z0));
    k.emplace("herding_tol", field(Kind::real, &RunConfig::herding_tol));
    k.emplace("population", field(Kind::count, &RunConfig::population));
    k.emplace("seed", field(Kind::count, &RunConfig::seed));
    k.emplace("probes", field(Kind::real_list, &RunConfig::probes));
    k.emplace("sweep_start", field(Kind::real, &RunConfig::sweep_start));
    k.emplace("sweep_stop", field(Kind::real, &RunConfig::sweep_stop));
    k.emplace("sweep_step", field(Kind::real, &RunConfig::sweep_step));
    k.emplace("predicate", field(Kind::text, &RunConfig::predicate));
    k.emplace("threshold_lo", field(Kind::real, &RunConfig::threshold_lo));
    k.emplace("threshold_hi", field(Kind::real, &RunConfig::threshold_hi));
    k.emplace("threshold_tol", field(Kind::real, &RunConfig::threshold_tol));
    k.emplace("equilibrium", field(Kind::text, &RunConfig::equilibrium));
    k.emplace("out", field(Kind::text, &RunConfig::out));
    return k;
  }();
  return keys;
}

bool fits(Kind kind, const json& v) {
  switch (kind) {
    case Kind::real: return v.is_number();
    case Kind::count: return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0);
    case Kind::text: return v.is_string();
    case Kind::real_list:
      if (!v.is_array()) return false;
      for (const auto& e : v)
        if (!e.is_number()) return false;
      return true;
  }
  return false;
}

double strict_real(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(key, "cannot parse '" + text + "' as a number");
}

json flag_value(const std::string& key, Kind kind, const std::string& text) {
  switch (kind) {
    case Kind::real: return strict_real(key, text);
    case Kind::count: {
      try {
        std::size_t used = 0;
        if (!text.empty() && text[0] != '-') {
          const unsigned long long v = std::stoull(text, &used);
          if (used == text.size()) return v;
        }
      } catch (const std::exception&) {
      }
      throw ConfigError(key, "cannot parse '" + text + "' as a non-negative integer");
    }
    case Kind::text: return text;
    case Kind::real_list: {
      json list = json::array();
      std::istringstream in(text);
      std::string item;
      while (std::getline(in, item, ',')) list.push_back(strict_real(key, item));
      return list;
    }
  }
  return nullptr;
}

void assign(RunConfig& config, const std::string& key, const json& value) {
  const auto it = registry().find(key);
  if (it == registry().end()) throw ConfigError(key, "unknown key");
  if (key == "alpha" && value.is_null()) {
    config.alpha.reset();
    return;
  }
  if (!fits(it->second.kind, value)) throw ConfigError(key, "value has the wrong type: " + value.dump());
  it->second.set(config, value);
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

std::string key_of(ParamViolation v) {
  switch (v) {
    case ParamViolation::p1_out_of_range: return "p1";
    case ParamViolation::p1_not_below_p2: return "p1";
    case ParamViolation::p2_not_below_half: return "p2";
    case ParamViolation::alpha_out_of_range: return "alpha";
    case ParamViolation::delta_out_of_range: return "delta";
  }
  return "";
}

void validate(const RunConfig& c, Command command) {
  const bool from_file = !c.equilibrium.empty();
  if (command == Command::solve || (command == Command::simulate && !from_file))
    require(c.alpha.has_value(), "alpha", "required for " + to_string(command));
  if (command == Command::figures) require(from_file, "equilibrium", "required for figures");

  try {
    validate_params(c.params());
  } catch (const InvalidParams& e) {
    throw ConfigError(key_of(e.violation()), e.what());
  }
  require(c.grid >= 2, "grid", "must be at least 2");
  require(c.tol > 0.0, "tol", "must be positive");
  require(c.max_iter >= 1, "max_iter", "must be at least 1");
  try {
    parse_selection(c.selection);
  } catch (const std::exception& e) {
    throw ConfigError("selection", e.what());
  }
  require(c.horizon >= 1, "horizon", "must be at least 1");
  require(c.z0 >= 0.0 && c.z0 <= 1.0, "z0", "must lie in [0, 1]");
  require(c.herding_tol >= 0.0, "herding_tol", "must be non-negative");
  require(!c.probes.empty(), "probes", "must not be empty");
  for (double z : c.probes) require(z >= 0.0 && z <= 1.0, "probes", "every probe must lie in [0, 1]");
  require(c.sweep_start >= 0.0 && c.sweep_start <= 1.0, "sweep_start", "must lie in [0, 1]");
  require(c.sweep_stop >= c.sweep_start && c.sweep_stop <= 1.0, "sweep_stop",
          "must lie in [sweep_start, 1]");
  require(c.sweep_step > 0.0, "sweep_step", "must be positive");
  try {
    const PhaseClass p = parse_phase_class(c.predicate);
    require(p != PhaseClass::unclassified, "predicate", "cannot bisect on 'unclassified'");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("predicate", e.what());
  }
  require(c.threshold_lo >= 0.0 && c.threshold_lo < c.threshold_hi, "threshold_lo",
          "must lie in [0, threshold_hi)");
  require(c.threshold_hi <= 1.0, "threshold_hi", "must not exceed 1");
  require(c.threshold_tol > 0.0, "threshold_tol", "must be positive");
  require(!c.out.empty(), "out", "must not be empty");
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, spec] : registry()) k.push_back(name);
    return k;
  }();
  return keys;
}

RunConfig parse_config(const std::optional<std::string>& file_text,
                       const std::map<std::string, std::string>& flags, Command command) {
  RunConfig config;
  if (file_text) {
    json doc;
    try {
      doc = json::parse(*file_text);
    } catch (const std::exception& e) {
      throw ConfigError("", std::string("config file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("", "config file must be a flat JSON object");
    for (const auto& [key, value] : doc.items()) assign(config, key, value);
  }
  for (const auto& [key, text] : flags) {
    const auto it = registry().find(key);
    if (it == registry().end()) throw ConfigError(key, "unknown key");
    assign(config, key, flag_value(key, it->second.kind, text));
  }
  validate(config, command);
  return config;
}

std::string config_to_json(const RunConfig& config) {
  json doc = json::object();
  for (const auto& [key, spec] : registry()) doc[key] = spec.get(config);
  return doc.dump(1) + "\n";
}

}  // namespace herdfield
