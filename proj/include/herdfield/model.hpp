#pragma once

// Game primitives: binary types and actions, the sticky-preference
// transition kernel and the instantaneous reward.

#include <stdexcept>
#include <string>

namespace herdfield {

/// Private preference of an agent. `high` prefers technology A (+1),
/// `low` prefers technology B (-1).
enum class AgentType : int { low = -1, high = 1 };

/// Technology chosen in a period.
enum class Action : int { minus = -1, plus = 1 };

inline constexpr AgentType kTypes[] = {AgentType::low, AgentType::high};
inline constexpr Action kActions[] = {Action::minus, Action::plus};

constexpr int sign(AgentType x) { return static_cast<int>(x); }
constexpr int sign(Action a) { return static_cast<int>(a); }

constexpr AgentType flip(AgentType x) {
  return x == AgentType::low ? AgentType::high : AgentType::low;
}
constexpr Action flip(Action a) {
  return a == Action::minus ? Action::plus : Action::minus;
}

/// Index 0 for low/minus, 1 for high/plus.
constexpr std::size_t index(AgentType x) { return x == AgentType::high ? 1 : 0; }
constexpr std::size_t index(Action a) { return a == Action::plus ? 1 : 0; }

constexpr bool matches(AgentType x, Action a) { return sign(x) == sign(a); }

struct ModelParams {
  double p1 = 0.1;    // preference flip probability when the action matches the type
  double p2 = 0.3;    // flip probability when it does not
  double alpha = 0.5; // weight of the personal-preference term
  double delta = 0.9; // discount factor

  bool operator==(const ModelParams&) const = default;
};

/// Which invariant of ModelParams a candidate tuple breaks.
enum class ParamViolation {
  p1_out_of_range,
  p1_not_below_p2,
  p2_not_below_half,
  alpha_out_of_range,
  delta_out_of_range,
};

class InvalidParams : public std::invalid_argument {
 public:
  InvalidParams(ParamViolation violation, const std::string& what)
      : std::invalid_argument(what), violation_(violation) {}
  ParamViolation violation() const noexcept { return violation_; }

 private:
  ParamViolation violation_;
};

/// Returns `raw` unchanged if 0 <= p1 < p2 < 1/2, alpha in [0,1] and
/// delta in [0,1); throws InvalidParams naming the first broken invariant.
ModelParams validate_params(const ModelParams& raw);

/// P(x_next | x, a). The flip probability is p1 when a == x and p2 otherwise.
double transition_prob(AgentType x_next, AgentType x, Action a, const ModelParams& params);

/// alpha*x*a + (1-alpha)*a*(2*mu1 - 1), where mu1 is the population mass on action +1.
double reward(AgentType x, Action a, double mu1, const ModelParams& params);

}  // namespace herdfield
