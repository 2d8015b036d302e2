#pragma once

// Run configuration: a flat key-value JSON document whose keys the
// command-line flags mirror one-to-one (--alpha <-> "alpha").

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "herdfield/error.hpp"
#include "herdfield/solver.hpp"
#include "herdfield/sweep.hpp"

namespace herdfield {

enum class Command { solve, simulate, sweep, threshold, figures };

std::string to_string(Command command);
/// Throws ConfigError for unknown names.
Command parse_command(const std::string& name);

struct RunConfig {
  std::optional<double> alpha;
  double delta = 0.9;
  double p1 = 0.1;
  double p2 = 0.3;

  std::size_t grid = 1001;
  double tol = 1e-9;
  std::size_t max_iter = 10000;
  std::string selection = "truthful-first";

  std::size_t horizon = 500;
  double z0 = 0.5;
  double herding_tol = 1e-9;
  std::size_t population = 0;  // finite-N run alongside simulate when > 0
  std::uint64_t seed = 1;

  std::vector<double> probes = kDefaultProbes;
  double sweep_start = 0.0;
  double sweep_stop = 1.0;
  double sweep_step = 0.02;

  std::string predicate = "herd-always";
  double threshold_lo = 0.0;
  double threshold_hi = 0.4;
  double threshold_tol = 0.01;

  std::string equilibrium;  // input equilibrium JSON (figures, optionally simulate)
  std::string out = ".";    // output directory

  bool operator==(const RunConfig&) const = default;

  /// Model parameters with alpha, or `fallback_alpha` when alpha is unset.
  ModelParams params(double fallback_alpha = 0.5) const;
  SolverOptions solver_options() const;
  SweepSettings sweep_settings() const;
};

/// Config failure tied to one key.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(ErrorKind::config, key.empty() ? what : "'" + key + "': " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Every key a config file or flag may set.
const std::vector<std::string>& config_keys();

/// Merges the optional JSON document with flag overrides (flag text is
/// parsed according to the key's type; lists are comma-separated), applies
/// defaults, then validates for `command`. Throws ConfigError naming the
/// offending key.
RunConfig parse_config(const std::optional<std::string>& file_text,
                       const std::map<std::string, std::string>& flags, Command command);

/// Flat JSON document that parse_config reads back to an equal config.
std::string config_to_json(const RunConfig& config);

}  // namespace herdfield
