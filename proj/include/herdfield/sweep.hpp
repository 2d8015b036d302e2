#pragma once

// Herding phase diagram over the preference weight alpha.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "herdfield/solver.hpp"
#include "herdfield/trajectory.hpp"

namespace herdfield {

enum class PhaseClass { herd_always, herd_never, initial_condition_dependent, unclassified };

std::string to_string(PhaseClass c);
PhaseClass parse_phase_class(const std::string& name);

struct ProbeOutcome {
  double z0 = 0.0;
  bool herded = false;
  std::optional<Action> herd_action;
  double limit_z1 = 0.0;
  double limit_mu1 = 0.0;
};

struct PhasePoint {
  double alpha = 0.0;
  PhaseClass classification = PhaseClass::unclassified;
  std::vector<ProbeOutcome> probes;
  SolveReport diagnostics;
  std::string error;  // set when the point is unclassified
};

inline const std::vector<double> kDefaultProbes{0.05, 0.25, 0.5, 0.75, 0.95};

/// Everything except alpha that a phase point needs.
struct SweepSettings {
  ModelParams base;                        // alpha is overwritten per point
  std::vector<double> probes = kDefaultProbes;
  std::size_t grid_points = 1001;
  SolverOptions solver;
  std::size_t horizon = 500;
  double herding_tol = 1e-9;
  std::size_t threads = 0;                 // across alpha points; 0 = auto
};

/// Solves the equilibrium at alpha, simulates from each probe and
/// classifies. A probe counts as herding only when the trajectory ends in
/// a type-independent suffix and its limit point has converged. Solver
/// non-convergence or failure yields an unclassified point.
PhasePoint classify_alpha(double alpha, const SweepSettings& settings);

/// One independent classify_alpha per entry, returned in input order.
std::vector<PhasePoint> alpha_sweep(std::span<const double> alphas, const SweepSettings& settings);

/// alphas lo, lo + step, ... up to and including hi (within step/1e6).
std::vector<double> alpha_grid(double lo, double hi, double step);

/// Points whose classification steps backwards along the
/// herd-always -> dependent -> herd-never ordering as alpha increases.
std::vector<double> monotonicity_anomalies(std::span<const PhasePoint> points);

struct PhasePredicate {
  std::string name;
  std::function<bool(const PhasePoint&)> holds;
};

/// "herd-always", "herd-never" or "initial-condition-dependent".
PhasePredicate predicate_for(PhaseClass c);

struct ThresholdResult {
  std::string predicate;
  double alpha_star = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  bool holds_at_lo = false;
  bool holds_at_hi = false;

  double width() const { return bracket_hi - bracket_lo; }
};

/// Bisection on alpha for the point where the predicate changes value.
/// Assumes a single crossing in [lo, hi]. Throws Error(ErrorKind::config)
/// when the predicate agrees at both ends.
ThresholdResult find_threshold(const PhasePredicate& predicate, double lo, double hi, double tol,
                               const SweepSettings& settings);

}  // namespace herdfield
