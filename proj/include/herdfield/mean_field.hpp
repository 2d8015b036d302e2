#pragma once

// Forward equations of the population: the action mean field G and the
// discrete-time Fokker-Planck map phi.
//
// Both mean fields live on {-1, +1}, so each is stored as its mass on +1.

#include "herdfield/model.hpp"

namespace herdfield {

/// Population mass on type +1.
struct TypeMeanField {
  double z1 = 0.5;
  bool operator==(const TypeMeanField&) const = default;
};

/// Population mass on action +1.
struct ActionMeanField {
  double mu1 = 0.5;
  bool operator==(const ActionMeanField&) const = default;
};

/// Probability of action +1 for each type; the type-to-action map every
/// agent applies to its private preference in one period.
struct Prescription {
  double g_minus = 0.0;  // P(a = +1 | x = -1)
  double g_plus = 1.0;   // P(a = +1 | x = +1)

  double prob_plus(AgentType x) const { return x == AgentType::high ? g_plus : g_minus; }
  double prob(Action a, AgentType x) const {
    return a == Action::plus ? prob_plus(x) : 1.0 - prob_plus(x);
  }

  bool operator==(const Prescription&) const = default;
};

namespace prescriptions {
inline constexpr Prescription all_minus{0.0, 0.0};
inline constexpr Prescription truthful{0.0, 1.0};
inline constexpr Prescription contrary{1.0, 0.0};
inline constexpr Prescription all_plus{1.0, 1.0};
}  // namespace prescriptions

/// mu1 = (1 - z1) * g_minus + z1 * g_plus.
ActionMeanField action_mean_field(TypeMeanField z, const Prescription& gamma);

/// One step of the Fokker-Planck flow: z1' = sum_{x,a} z(x) gamma(a|x) Q(+1 | x, a).
TypeMeanField propagate(TypeMeanField z, const Prescription& gamma, const ModelParams& params);

/// Slope and intercept of the affine map z1 -> propagate(z1).
struct AffineFlow {
  double intercept;
  double slope;
};
AffineFlow flow_coefficients(const Prescription& gamma, const ModelParams& params);

/// Unique fixed point of propagate(., gamma, params), in closed form.
///
/// The slope of the flow lies in [1 - 2 p2, 1 - 2 p1]. It reaches 1 only
/// for p1 = 0 under truthful play, where every z1 is stationary; that case
/// throws std::domain_error.
TypeMeanField stationary_mean_field(const Prescription& gamma, const ModelParams& params);

}  // namespace herdfield
