#include "herdfield/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "herdfield/error.hpp"
#include "herdfield/parallel.hpp"

namespace herdfield {

// ---------------------------------------------------------------- Grid

Grid::Grid(std::size_t n_points) {
  if (n_points < 2) throw std::invalid_argument("grid needs at least 2 points");
  nodes_.resize(n_points);
  const double last = static_cast<double>(n_points - 1);
  for (std::size_t i = 0; i < n_points; ++i) nodes_[i] = static_cast<double>(i) / last;
  nodes_.back() = 1.0;
}

std::size_t Grid::nearest(double z1) const {
  const double pos = std::clamp(z1, 0.0, 1.0) * static_cast<double>(size() - 1);
  return std::min(size() - 1, static_cast<std::size_t>(std::lround(pos)));
}

std::size_t Grid::lower_bracket(double z1) const {
  const std::size_t last = size() - 1;
  auto i = static_cast<std::size_t>(z1 * static_cast<double>(last));
  i = std::min(i, last - 1);
  // The index guess can be off by one in floating point.
  while (i > 0 && nodes_[i] > z1) --i;
  while (i + 1 < last && nodes_[i + 1] <= z1) ++i;
  return i;
}

// ---------------------------------------------------------------- Selection

std::string to_string(Selection selection) {
  return selection == Selection::truthful_first ? "truthful-first" : "herding-first";
}

Selection parse_selection(const std::string& name) {
  if (name == "truthful-first") return Selection::truthful_first;
  if (name == "herding-first") return Selection::herding_first;
  throw std::invalid_argument("unknown selection rule '" + name + "'");
}

// ---------------------------------------------------------------- values

double interpolate_value(const ValueTable& values, double z1, AgentType x) {
  if (!(z1 >= 0.0 && z1 <= 1.0)) throw std::out_of_range("interpolation point outside [0, 1]");
  const Grid& grid = values.grid;
  const std::size_t i = grid.lower_bracket(z1);
  const double left = grid.node(i);
  const double w = (z1 - left) / (grid.node(i + 1) - left);
  if (w == 0.0) return values.at(i, x);
  return (1.0 - w) * values.at(i, x) + w * values.at(i + 1, x);
}

namespace {

// Action values q[type][action] at one mean field when the population
// plays gamma, indexed with index(AgentType) and index(Action).
using QTable = std::array<std::array<double, 2>, 2>;

QTable action_values(TypeMeanField z, const Prescription& gamma, const ValueTable& values,
                     const ModelParams& params) {
  const double mu1 = action_mean_field(z, gamma).mu1;
  const double next = propagate(z, gamma, params).z1;
  const double v_low = interpolate_value(values, next, AgentType::low);
  const double v_high = interpolate_value(values, next, AgentType::high);
  QTable q{};
  for (AgentType x : kTypes) {
    for (Action a : kActions) {
      const double to_high = transition_prob(AgentType::high, x, a, params);
      const double continuation = to_high * v_high + (1.0 - to_high) * v_low;
      q[index(x)][index(a)] = reward(x, a, mu1, params) + params.delta * continuation;
    }
  }
  return q;
}

double value_under(const QTable& q, const Prescription& gamma, AgentType x) {
  const double p = gamma.prob_plus(x);
  const auto& row = q[index(x)];
  if (p == 0.0) return row[0];
  if (p == 1.0) return row[1];
  return (1.0 - p) * row[0] + p * row[1];
}

// Largest shortfall, over types and over actions in the support of
// gamma(.|x), from the best action value.
double support_violation(const QTable& q, const Prescription& gamma, AgentType* worst_type = nullptr) {
  double worst = 0.0;
  for (AgentType x : kTypes) {
    const auto& row = q[index(x)];
    const double best = std::max(row[0], row[1]);
    const double p = gamma.prob_plus(x);
    double shortfall = 0.0;
    if (p > 0.0) shortfall = std::max(shortfall, best - row[1]);
    if (p < 1.0) shortfall = std::max(shortfall, best - row[0]);
    if (shortfall > worst) {
      worst = shortfall;
      if (worst_type != nullptr) *worst_type = x;
    }
  }
  return worst;
}

double indifference_gap(TypeMeanField z, const Prescription& gamma, AgentType x,
                        const ValueTable& values, const ModelParams& params) {
  const QTable q = action_values(z, gamma, values, params);
  return q[index(x)][1] - q[index(x)][0];
}

Prescription with_prob(Prescription gamma, AgentType x, double p) {
  (x == AgentType::high ? gamma.g_plus : gamma.g_minus) = p;
  return gamma;
}

// Root of the continuous function f on [0, 1], or nullopt when f(0) and
// f(1) share a strict sign.
template <class F>
std::optional<double> bisect_unit(F&& f, double width) {
  double lo = 0.0, hi = 1.0;
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) return std::nullopt;
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<Prescription> pure_order(TypeMeanField z, Selection selection) {
  using namespace prescriptions;
  const Prescription majority = z.z1 > 0.5 ? all_plus : all_minus;
  std::vector<Prescription> order;
  if (selection == Selection::truthful_first) {
    order = {truthful, majority};
  } else {
    order = {majority, truthful};
  }
  // Lexicographic in (g_minus, g_plus).
  for (const Prescription& p : {all_minus, truthful, contrary, all_plus})
    if (std::find(order.begin(), order.end(), p) == order.end()) order.push_back(p);
  return order;
}

// Mixed answers are accepted when the residual indifference gap of every
// mixing type is at most this, in reward units.
constexpr double kMixedGapTol = 1e-7;

bool mixed_consistent(TypeMeanField z, const Prescription& gamma, const ValueTable& values,
                      const ModelParams& params, double indifference_tol) {
  const QTable q = action_values(z, gamma, values, params);
  for (AgentType x : kTypes) {
    const double p = gamma.prob_plus(x);
    const auto& row = q[index(x)];
    const double best = std::max(row[0], row[1]);
    const double tol = (p > 0.0 && p < 1.0) ? kMixedGapTol : indifference_tol;
    if (p > 0.0 && row[1] < best - tol) return false;
    if (p < 1.0 && row[0] < best - tol) return false;
  }
  return true;
}

bool is_mixing(const Prescription& gamma) {
  auto interior = [](double p) { return p > 0.0 && p < 1.0; };
  return interior(gamma.g_minus) || interior(gamma.g_plus);
}

void check_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw std::invalid_argument("equilibrium and value tables use different grids");
}

}  // namespace

// One type mixes, the other plays a pure action. Order: low mixes with
// high at 0 then 1, then high mixes with low at 0 then 1.
std::optional<Prescription> detail::single_mixing(TypeMeanField z, const ValueTable& values,
                                          const ModelParams& params, const SolverOptions& options) {
  for (AgentType mixer : kTypes) {
    for (double other : {0.0, 1.0}) {
      const Prescription base = with_prob(Prescription{}, flip(mixer), other);
      auto gap = [&](double p) {
        return indifference_gap(z, with_prob(base, mixer, p), mixer, values, params);
      };
      const auto root = bisect_unit(gap, options.mixing_tol);
      if (!root || *root <= 0.0 || *root >= 1.0) continue;
      const Prescription candidate = with_prob(base, mixer, *root);
      if (mixed_consistent(z, candidate, values, params, options.indifference_tol)) return candidate;
    }
  }
  return std::nullopt;
}

// Both types mix. For a given g_minus the inner bisection makes the high
// type indifferent; the outer search then zeroes the low type's gap. A
// coarse scan over g_minus locates sign changes of the outer gap, which
// each get refined by bisection. Assumes the inner gap is monotone in g_plus.
std::optional<Prescription> detail::double_mixing(TypeMeanField z, const ValueTable& values,
                                          const ModelParams& params, const SolverOptions& options) {
  auto inner = [&](double g_minus) -> std::optional<double> {
    return bisect_unit(
        [&](double g_plus) {
          return indifference_gap(z, Prescription{g_minus, g_plus}, AgentType::high, values, params);
        },
        options.mixing_tol);
  };
  auto outer = [&](double g_minus) -> std::optional<double> {
    const auto g_plus = inner(g_minus);
    if (!g_plus) return std::nullopt;
    return indifference_gap(z, Prescription{g_minus, *g_plus}, AgentType::low, values, params);
  };

  constexpr int kScan = 32;
  std::optional<double> prev_value;
  double prev_g = 0.0;
  for (int k = 0; k <= kScan; ++k) {
    const double g = static_cast<double>(k) / kScan;
    const auto value = outer(g);
    if (value && prev_value && ((*value > 0.0) != (*prev_value > 0.0) || *value == 0.0)) {
      double lo = prev_g, hi = g, f_lo = *prev_value;
      bool ok = true;
      while (hi - lo > options.mixing_tol) {
        const double mid = 0.5 * (lo + hi);
        const auto f_mid = outer(mid);
        if (!f_mid) {
          ok = false;
          break;
        }
        if ((*f_mid > 0.0) == (f_lo > 0.0)) {
          lo = mid;
          f_lo = *f_mid;
        } else {
          hi = mid;
        }
      }
      if (ok) {
        const double g_minus = 0.5 * (lo + hi);
        if (const auto g_plus = inner(g_minus)) {
          const Prescription candidate{g_minus, *g_plus};
          if (g_minus > 0.0 && g_minus < 1.0 && *g_plus > 0.0 && *g_plus < 1.0 &&
              mixed_consistent(z, candidate, values, params, options.indifference_tol))
            return candidate;
        }
      }
    }
    prev_value = value;
    prev_g = g;
  }
  return std::nullopt;
}

double action_value(TypeMeanField z, AgentType x, Action a, const Prescription& gamma_others,
                    const ValueTable& values, const ModelParams& params) {
  return action_values(z, gamma_others, values, params)[index(x)][index(a)];
}

BestResponses best_response_set(TypeMeanField z, const Prescription& gamma_others,
                                const ValueTable& values, const ModelParams& params,
                                double indifference_tol) {
  const QTable q = action_values(z, gamma_others, values, params);
  BestResponses out;
  for (AgentType x : kTypes) {
    const auto& row = q[index(x)];
    const double best = std::max(row[0], row[1]);
    ActionSet& set = x == AgentType::high ? out.high : out.low;
    set.minus = row[0] >= best - indifference_tol;
    set.plus = row[1] >= best - indifference_tol;
  }
  return out;
}

NodeEquilibrium equilibrium_at(TypeMeanField z, const ValueTable& values, const ModelParams& params,
                               const SolverOptions& options) {
  NodeEquilibrium result;
  std::size_t consistent = 0;
  for (const Prescription& candidate : pure_order(z, options.selection)) {
    const QTable q = action_values(z, candidate, values, params);
    if (support_violation(q, candidate) > options.indifference_tol) continue;
    if (consistent++ == 0) result.gamma = candidate;
  }
  if (consistent > 0) {
    result.multiple = consistent > 1;
    return result;
  }

  auto mixed = detail::single_mixing(z, values, params, options);
  if (!mixed) mixed = detail::double_mixing(z, values, params, options);
  if (!mixed) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "no equilibrium found at z1 = " << z.z1;
    throw Error(ErrorKind::solver, msg.str());
  }
  result.gamma = *mixed;
  result.mixing = is_mixing(*mixed);
  return result;
}

namespace {

// One synchronous sweep against a frozen V: per-node equilibria and the
// updated values.
void sweep(const ValueTable& values, const ModelParams& params, const SolverOptions& options,
           EquilibriumTable& theta, ValueTable& next) {
  const Grid& grid = values.grid;
  parallel_for(grid.size(), options.threads, [&](std::size_t i) {
    const TypeMeanField z{grid.node(i)};
    const NodeEquilibrium eq = equilibrium_at(z, values, params, options);
    const QTable q = action_values(z, eq.gamma, values, params);
    theta.nodes[i] = eq;
    next.low[i] = value_under(q, eq.gamma, AgentType::low);
    next.high[i] = value_under(q, eq.gamma, AgentType::high);
  });
}

double sup_change(const ValueTable& a, const ValueTable& b) {
  double change = 0.0;
  for (std::size_t i = 0; i < a.low.size(); ++i) {
    change = std::max(change, std::abs(a.low[i] - b.low[i]));
    change = std::max(change, std::abs(a.high[i] - b.high[i]));
  }
  return change;
}

}  // namespace

Solution solve_mfe(const ModelParams& params, const Grid& grid, const SolverOptions& options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (options.max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");

  ValueTable values(grid);
  ValueTable next(grid);
  EquilibriumTable theta(grid);
  SolveReport report;

  for (std::size_t k = 1; k <= options.max_iter; ++k) {
    sweep(values, params, options, theta, next);
    report.iterations = k;
    report.final_sup_change = sup_change(values, next);
    std::swap(values, next);
    if (report.final_sup_change < options.tol) {
      report.converged = true;
      break;
    }
  }

  // Re-solve theta against the final V and measure the Bellman residual.
  sweep(values, params, options, theta, next);
  report.bellman_residual = sup_change(values, next);
  for (const NodeEquilibrium& node : theta.nodes) {
    report.nodes_with_multiplicity += node.multiple ? 1 : 0;
    report.nodes_with_mixing += node.mixing ? 1 : 0;
  }
  return Solution{std::move(theta), std::move(values), report};
}

VerificationReport verify_equilibrium(const EquilibriumTable& theta, const ValueTable& values,
                                      const ModelParams& params, double eps) {
  check_same_grid(theta.grid, values.grid);
  VerificationReport report;
  for (std::size_t i = 0; i < theta.grid.size(); ++i) {
    const TypeMeanField z{theta.grid.node(i)};
    const Prescription& gamma = theta.at(i);
    AgentType worst_type = AgentType::low;
    const double violation =
        support_violation(action_values(z, gamma, values, params), gamma, &worst_type);
    if (violation > report.worst_violation) {
      report.worst_violation = violation;
      report.worst_node = i;
      report.worst_type = worst_type;
    }
  }
  report.passed = report.worst_violation <= eps;
  return report;
}

}  // namespace herdfield
