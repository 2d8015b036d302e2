#include "herdfield/sweep.hpp"

#include <cmath>
#include <stdexcept>

#include "herdfield/error.hpp"
#include "herdfield/parallel.hpp"

namespace herdfield {

std::string to_string(PhaseClass c) {
  switch (c) {
    case PhaseClass::herd_always: return "herd-always";
    case PhaseClass::herd_never: return "herd-never";
    case PhaseClass::initial_condition_dependent: return "initial-condition-dependent";
    case PhaseClass::unclassified: return "unclassified";
  }
  return "unclassified";
}

PhaseClass parse_phase_class(const std::string& name) {
  for (PhaseClass c : {PhaseClass::herd_always, PhaseClass::herd_never,
                       PhaseClass::initial_condition_dependent, PhaseClass::unclassified})
    if (to_string(c) == name) return c;
  throw std::invalid_argument("unknown phase class '" + name + "'");
}

PhasePoint classify_alpha(double alpha, const SweepSettings& settings) {
  if (settings.probes.empty()) throw std::invalid_argument("no z0 probes");
  PhasePoint point;
  point.alpha = alpha;
  try {
    ModelParams params = settings.base;
    params.alpha = alpha;
    params = validate_params(params);
    const Solution solution = solve_mfe(params, Grid(settings.grid_points), settings.solver);
    point.diagnostics = solution.report;
    if (!solution.report.converged) {
      point.error = "solver did not converge within max_iter";
      return point;
    }
    std::size_t herded = 0;
    for (double z0 : settings.probes) {
      const Trajectory traj = simulate({z0}, solution.theta, params, settings.horizon);
      const HerdingReport report = detect_herding(traj, settings.herding_tol);
      ProbeOutcome outcome;
      outcome.z0 = z0;
      outcome.herded = report.herded && report.limit.converged;
      outcome.herd_action = outcome.herded ? report.herd_action : std::nullopt;
      outcome.limit_z1 = report.limit.z1;
      outcome.limit_mu1 = report.limit.mu1;
      herded += outcome.herded ? 1 : 0;
      point.probes.push_back(outcome);
    }
    if (herded == settings.probes.size())
      point.classification = PhaseClass::herd_always;
    else if (herded == 0)
      point.classification = PhaseClass::herd_never;
    else
      point.classification = PhaseClass::initial_condition_dependent;
  } catch (const std::exception& e) {
    point.classification = PhaseClass::unclassified;
    point.error = e.what();
  }
  return point;
}

std::vector<PhasePoint> alpha_sweep(std::span<const double> alphas, const SweepSettings& settings) {
  std::vector<PhasePoint> points(alphas.size());
  SweepSettings inner = settings;
  // Parallelism goes to the alpha points; each solve runs single-threaded.
  inner.solver.threads = 1;
  parallel_for(alphas.size(), settings.threads,
               [&](std::size_t i) { points[i] = classify_alpha(alphas[i], inner); });
  return points;
}

std::vector<double> alpha_grid(double lo, double hi, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("sweep step must be positive");
  if (!(hi >= lo)) throw std::invalid_argument("sweep stop must not precede start");
  std::vector<double> alphas;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-6));
  for (std::size_t k = 0; k <= count; ++k) alphas.push_back(lo + static_cast<double>(k) * step);
  return alphas;
}

namespace {

int phase_rank(PhaseClass c) {
  switch (c) {
    case PhaseClass::herd_always: return 0;
    case PhaseClass::initial_condition_dependent: return 1;
    case PhaseClass::herd_never: return 2;
    default: return -1;
  }
}

}  // namespace

std::vector<double> monotonicity_anomalies(std::span<const PhasePoint> points) {
  std::vector<double> anomalies;
  int highest = -1;
  for (const PhasePoint& p : points) {
    const int rank = phase_rank(p.classification);
    if (rank < 0) continue;
    if (rank < highest) anomalies.push_back(p.alpha);
    highest = std::max(highest, rank);
  }
  return anomalies;
}

PhasePredicate predicate_for(PhaseClass c) {
  return {to_string(c), [c](const PhasePoint& p) { return p.classification == c; }};
}

ThresholdResult find_threshold(const PhasePredicate& predicate, double lo, double hi, double tol,
                               const SweepSettings& settings) {
  if (!(tol > 0.0)) throw Error(ErrorKind::config, "threshold tolerance must be positive");
  if (!(lo < hi)) throw Error(ErrorKind::config, "threshold bracket needs lo < hi");

  auto evaluate = [&](double alpha) {
    const PhasePoint point = classify_alpha(alpha, settings);
    if (point.classification == PhaseClass::unclassified)
      throw Error(ErrorKind::convergence, "alpha = " + std::to_string(alpha) + " unclassified: " + point.error);
    return predicate.holds(point);
  };

  ThresholdResult result;
  result.predicate = predicate.name;
  result.holds_at_lo = evaluate(lo);
  result.holds_at_hi = evaluate(hi);
  if (result.holds_at_lo == result.holds_at_hi)
    throw Error(ErrorKind::config, "predicate '" + predicate.name +
                                       "' takes the same value at both bracket ends");

  while (hi - lo > tol * (1.0 + 1e-12)) {
    const double mid = 0.5 * (lo + hi);
    if (evaluate(mid) == result.holds_at_lo)
      lo = mid;
    else
      hi = mid;
  }
  result.bracket_lo = lo;
  result.bracket_hi = hi;
  result.alpha_star = 0.5 * (lo + hi);
  return result;
}

}  // namespace herdfield
