#include "herdfield/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace herdfield {

Trajectory simulate(TypeMeanField z0, const EquilibriumTable& theta, const ModelParams& params,
                    std::size_t horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  Trajectory traj;
  traj.reserve(horizon + 1);
  TypeMeanField z = z0;
  for (std::size_t t = 0; t <= horizon; ++t) {
    const Prescription& gamma = theta.lookup(z.z1);
    traj.push_back({t, z, gamma, action_mean_field(z, gamma)});
    z = propagate(z, gamma, params);
  }
  return traj;
}

LimitPoint limit_point(const Trajectory& traj, double tol, std::size_t window) {
  if (traj.empty()) throw std::invalid_argument("empty trajectory");
  window = std::clamp<std::size_t>(window, 1, traj.size());
  double z_min = std::numeric_limits<double>::infinity(), z_max = -z_min;
  double mu_min = z_min, mu_max = -z_min;
  double z_sum = 0.0, mu_sum = 0.0;
  for (auto it = traj.end() - static_cast<std::ptrdiff_t>(window); it != traj.end(); ++it) {
    z_min = std::min(z_min, it->z.z1);
    z_max = std::max(z_max, it->z.z1);
    mu_min = std::min(mu_min, it->mu.mu1);
    mu_max = std::max(mu_max, it->mu.mu1);
    z_sum += it->z.z1;
    mu_sum += it->mu.mu1;
  }
  LimitPoint out;
  const auto n = static_cast<double>(window);
  out.z1 = z_sum / n;
  out.mu1 = mu_sum / n;
  out.residual = std::max(z_max - z_min, mu_max - mu_min);
  out.converged = out.residual <= tol;
  return out;
}

HerdingReport detect_herding(const Trajectory& traj, double tol) {
  if (traj.empty()) throw std::invalid_argument("empty trajectory");
  auto type_blind = [tol](const TrajectoryStep& s) {
    return std::abs(s.gamma.g_minus - s.gamma.g_plus) <= tol;
  };

  HerdingReport report;
  report.limit = limit_point(traj, tol);

  std::size_t start = traj.size();
  while (start > 0 && type_blind(traj[start - 1])) --start;
  if (start == traj.size()) return report;

  report.herded = true;
  report.onset = traj[start].t;
  const Prescription& last = traj.back().gamma;
  const double common = 0.5 * (last.g_minus + last.g_plus);
  if (common <= tol)
    report.herd_action = Action::minus;
  else if (common >= 1.0 - tol)
    report.herd_action = Action::plus;
  return report;
}

namespace {

// splitmix64 finalizer; used as a counter-based generator so that each
// (seed, agent, t, purpose) tuple owns an independent uniform draw.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum class Draw : std::uint64_t { initial_type = 0, action = 1, transition = 2 };

double uniform(std::uint64_t seed, std::uint64_t agent, std::uint64_t t, Draw purpose) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ agent);
  h = mix64(h ^ ((t << 2) | static_cast<std::uint64_t>(purpose)));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace

EmpiricalTrajectory finite_n_simulate(std::size_t population, TypeMeanField z0,
                                      const EquilibriumTable& theta, const ModelParams& params,
                                      std::size_t horizon, std::uint64_t seed) {
  if (population < 1) throw std::invalid_argument("population must be at least 1");
  EmpiricalTrajectory out;
  out.population = population;
  out.seed = seed;
  out.z1_hat.reserve(horizon + 1);
  out.mu1_hat.reserve(horizon + 1);

  std::vector<AgentType> types(population);
  for (std::size_t i = 0; i < population; ++i)
    types[i] = uniform(seed, i, 0, Draw::initial_type) < z0.z1 ? AgentType::high : AgentType::low;

  const auto n = static_cast<double>(population);
  for (std::size_t t = 0; t <= horizon; ++t) {
    const auto highs = static_cast<double>(std::count(types.begin(), types.end(), AgentType::high));
    const double z_hat = highs / n;
    const Prescription& gamma = theta.lookup(z_hat);

    std::size_t plus = 0;
    for (std::size_t i = 0; i < population; ++i) {
      const AgentType x = types[i];
      const Action a = uniform(seed, i, t, Draw::action) < gamma.prob_plus(x) ? Action::plus : Action::minus;
      plus += a == Action::plus ? 1 : 0;
      const double stay = transition_prob(x, x, a, params);
      if (uniform(seed, i, t, Draw::transition) >= stay) types[i] = flip(x);
    }
    out.z1_hat.push_back(z_hat);
    out.mu1_hat.push_back(static_cast<double>(plus) / n);
  }
  return out;
}

}  // namespace herdfield
