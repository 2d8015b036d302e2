#pragma once

// Mean-field trajectories under equilibrium play, herding detection, and a
// finite-population Monte Carlo check of the mean-field limit.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "herdfield/mean_field.hpp"
#include "herdfield/solver.hpp"

namespace herdfield {

struct TrajectoryStep {
  std::size_t t = 0;
  TypeMeanField z;
  Prescription gamma;
  ActionMeanField mu;

  bool operator==(const TrajectoryStep&) const = default;
};

/// Records for t = 0..T.
using Trajectory = std::vector<TrajectoryStep>;

/// Deterministic flow from z0: gamma_t is theta at the node nearest z_t,
/// mu_t = G(z_t, gamma_t) and z_{t+1} = phi(z_t, gamma_t).
Trajectory simulate(TypeMeanField z0, const EquilibriumTable& theta, const ModelParams& params,
                    std::size_t horizon);

inline constexpr std::size_t kLimitWindow = 10;

struct LimitPoint {
  double z1 = 0.0;
  double mu1 = 0.0;
  double residual = 0.0;  // max spread of z1 and mu1 over the tail window
  bool converged = false;
};

/// Tail averages over the last `window` records (or all of them, if fewer);
/// converged iff both z1 and mu1 vary by at most tol there.
LimitPoint limit_point(const Trajectory& traj, double tol, std::size_t window = kLimitWindow);

struct HerdingReport {
  bool herded = false;
  std::size_t onset = 0;              // first t from which the prescription ignores the type
  std::optional<Action> herd_action;  // set when the common prescription is pure
  LimitPoint limit;
};

/// herded iff some suffix of the trajectory has |g_minus - g_plus| <= tol at
/// every step; onset is the start of the longest such suffix.
HerdingReport detect_herding(const Trajectory& traj, double tol);

struct EmpiricalTrajectory {
  std::size_t population = 0;
  std::uint64_t seed = 0;
  std::vector<double> z1_hat;   // t = 0..T
  std::vector<double> mu1_hat;  // t = 0..T
};

/// N agents with types drawn from z0. Each period every agent draws its
/// action from theta at the node nearest the empirical type mass, then its
/// type moves through the kernel. Every random draw is a pure function of
/// (seed, agent, t), so results do not depend on scheduling.
EmpiricalTrajectory finite_n_simulate(std::size_t population, TypeMeanField z0,
                                      const EquilibriumTable& theta, const ModelParams& params,
                                      std::size_t horizon, std::uint64_t seed);

}  // namespace herdfield
