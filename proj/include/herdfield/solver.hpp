#pragma once

// Stationary mean field equilibrium on a uniform grid over z(1).
//
// The equilibrium-generating function theta maps a public mean field z to
// a prescription; V(z, x) is the reward-to-go of a type-x agent when
// everyone follows theta. Both are tabulated on the grid nodes and solved
// jointly by synchronous value iteration, re-solving the per-node
// equilibrium against the previous sweep's V.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "herdfield/mean_field.hpp"
#include "herdfield/model.hpp"

namespace herdfield {

/// Uniform partition of [0, 1] with nodes[0] == 0 and nodes[n-1] == 1.
class Grid {
 public:
  explicit Grid(std::size_t n_points);

  std::size_t size() const { return nodes_.size(); }
  double node(std::size_t i) const { return nodes_[i]; }
  const std::vector<double>& nodes() const { return nodes_; }

  /// Index of the node closest to z1 (z1 is clamped to [0, 1]).
  std::size_t nearest(double z1) const;

  /// Index i with nodes[i] <= z1 <= nodes[i+1]; requires z1 in [0, 1].
  std::size_t lower_bracket(double z1) const;

  bool operator==(const Grid& other) const { return nodes_ == other.nodes_; }

 private:
  std::vector<double> nodes_;
};

/// V(z, -1) and V(z, +1) at every grid node.
struct ValueTable {
  explicit ValueTable(Grid g) : grid(std::move(g)), low(grid.size(), 0.0), high(grid.size(), 0.0) {}

  double at(std::size_t i, AgentType x) const { return x == AgentType::high ? high[i] : low[i]; }
  double& at(std::size_t i, AgentType x) { return x == AgentType::high ? high[i] : low[i]; }

  Grid grid;
  std::vector<double> low;
  std::vector<double> high;
};

struct NodeEquilibrium {
  Prescription gamma;
  bool multiple = false;  // more than one pure prescription was consistent
  bool mixing = false;    // gamma randomizes for at least one type

  bool operator==(const NodeEquilibrium&) const = default;
};

/// theta[z] at every grid node.
struct EquilibriumTable {
  explicit EquilibriumTable(Grid g) : grid(std::move(g)), nodes(grid.size()) {}

  const Prescription& at(std::size_t i) const { return nodes[i].gamma; }
  /// Prescription at the node nearest to z1.
  const Prescription& lookup(double z1) const { return nodes[grid.nearest(z1)].gamma; }

  Grid grid;
  std::vector<NodeEquilibrium> nodes;
};

/// Tie-breaking among consistent pure prescriptions.
///
/// truthful_first: (0,1) if consistent, else herding on the current
/// majority type ((1,1) when z1 > 1/2, (0,0) otherwise, including z1 == 1/2),
/// then the remaining pure candidates in lexicographic (g_minus, g_plus) order.
///
/// herding_first: the majority herding prescription first, then truthful,
/// then the rest lexicographically.
///
/// Mixed prescriptions are tried only when no pure candidate is consistent.
enum class Selection { truthful_first, herding_first };

std::string to_string(Selection selection);
Selection parse_selection(const std::string& name);

inline constexpr double kIndifferenceTol = 1e-9;

struct SolverOptions {
  double tol = 1e-9;
  std::size_t max_iter = 10000;
  Selection selection = Selection::truthful_first;
  double indifference_tol = kIndifferenceTol;
  double mixing_tol = 1e-10;  // bisection width on a mixing probability
  std::size_t threads = 0;    // 0 = HERDFIELD_THREADS / hardware
};

struct SolveReport {
  std::size_t iterations = 0;
  double final_sup_change = 0.0;
  double bellman_residual = 0.0;
  std::size_t nodes_with_multiplicity = 0;
  std::size_t nodes_with_mixing = 0;
  bool converged = false;
};

struct Solution {
  EquilibriumTable theta;
  ValueTable values;
  SolveReport report;
};

/// Piecewise-linear interpolation of V(., x); exact at the nodes.
/// Throws std::out_of_range for z1 outside [0, 1].
double interpolate_value(const ValueTable& values, double z1, AgentType x);

/// Expected reward-to-go of a single type-x agent playing `a` while the
/// population plays gamma_others. The deviator changes neither mu nor the
/// next mean field.
double action_value(TypeMeanField z, AgentType x, Action a, const Prescription& gamma_others,
                    const ValueTable& values, const ModelParams& params);

struct ActionSet {
  bool minus = false;
  bool plus = false;

  bool contains(Action a) const { return a == Action::plus ? plus : minus; }
  std::size_t size() const { return static_cast<std::size_t>(minus) + static_cast<std::size_t>(plus); }
  bool operator==(const ActionSet&) const = default;
};

struct BestResponses {
  ActionSet low;
  ActionSet high;
  const ActionSet& of(AgentType x) const { return x == AgentType::high ? high : low; }
};

/// Actions within indifference_tol of the best action value, per type.
BestResponses best_response_set(TypeMeanField z, const Prescription& gamma_others,
                                const ValueTable& values, const ModelParams& params,
                                double indifference_tol = kIndifferenceTol);

/// Equilibrium prescription at one mean field against a fixed V.
///
/// Search order: the four pure prescriptions (ordered by options.selection),
/// then one type mixing with the other pure, then both mixing. Throws
/// Error(ErrorKind::solver) when every stage fails.
NodeEquilibrium equilibrium_at(TypeMeanField z, const ValueTable& values, const ModelParams& params,
                               const SolverOptions& options = {});

/// Value iteration from V = 0 until the sup-norm change drops below
/// options.tol or options.max_iter sweeps have run. The returned theta is
/// the equilibrium against the returned V, and report.bellman_residual is
/// the sup-norm gap between V and its one-step update.
/// Non-convergence is flagged in the report, not thrown.
Solution solve_mfe(const ModelParams& params, const Grid& grid, const SolverOptions& options = {});

struct VerificationReport {
  bool passed = true;
  double worst_violation = 0.0;
  std::size_t worst_node = 0;
  AgentType worst_type = AgentType::low;
};

/// Checks that every action in the support of theta[z](.|x) is within eps
/// of the best action value, given that the population plays theta[z].
VerificationReport verify_equilibrium(const EquilibriumTable& theta, const ValueTable& values,
                                      const ModelParams& params, double eps);

namespace detail {

/// Second search stage of equilibrium_at: one type mixes (bisection on its
/// indifference gap), the other plays pure.
std::optional<Prescription> single_mixing(TypeMeanField z, const ValueTable& values,
                                          const ModelParams& params, const SolverOptions& options);

/// Third stage: both types mix.
std::optional<Prescription> double_mixing(TypeMeanField z, const ValueTable& values,
                                          const ModelParams& params, const SolverOptions& options);

}  // namespace detail

}  // namespace herdfield
