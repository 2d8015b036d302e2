#include "herdfield/mean_field.hpp"

#include <algorithm>
#include <stdexcept>

namespace herdfield {

ActionMeanField action_mean_field(TypeMeanField z, const Prescription& gamma) {
  const double mu1 = (1.0 - z.z1) * gamma.g_minus + z.z1 * gamma.g_plus;
  return {std::clamp(mu1, 0.0, 1.0)};
}

TypeMeanField propagate(TypeMeanField z, const Prescription& gamma, const ModelParams& params) {
  double next = 0.0;
  for (AgentType x : kTypes) {
    const double mass = x == AgentType::high ? z.z1 : 1.0 - z.z1;
    for (Action a : kActions)
      next += mass * gamma.prob(a, x) * transition_prob(AgentType::high, x, a, params);
  }
  return {std::clamp(next, 0.0, 1.0)};
}

AffineFlow flow_coefficients(const Prescription& gamma, const ModelParams& params) {
  double from_low = 0.0;
  double from_high = 0.0;
  for (Action a : kActions) {
    from_low += gamma.prob(a, AgentType::low) * transition_prob(AgentType::high, AgentType::low, a, params);
    from_high += gamma.prob(a, AgentType::high) * transition_prob(AgentType::high, AgentType::high, a, params);
  }
  return {from_low, from_high - from_low};
}

TypeMeanField stationary_mean_field(const Prescription& gamma, const ModelParams& params) {
  const AffineFlow flow = flow_coefficients(gamma, params);
  const double gap = 1.0 - flow.slope;
  if (!(gap > 1e-15))
    throw std::domain_error("mean-field flow is the identity; no unique stationary point");
  return {std::clamp(flow.intercept / gap, 0.0, 1.0)};
}

}  // namespace herdfield
