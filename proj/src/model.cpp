#include "herdfield/model.hpp"

#include <sstream>

namespace herdfield {

namespace {

std::string describe(const char* what, double value) {
  std::ostringstream out;
  out.precision(17);
  out << what << " (got " << value << ")";
  return out.str();
}

}  // namespace

ModelParams validate_params(const ModelParams& raw) {
  // Negated comparisons so that NaN is rejected too.
  if (!(raw.p1 >= 0.0 && raw.p1 < 1.0))
    throw InvalidParams(ParamViolation::p1_out_of_range, describe("p1 must lie in [0, 1)", raw.p1));
  if (!(raw.p1 < raw.p2))
    throw InvalidParams(ParamViolation::p1_not_below_p2,
                        describe("p1 must be strictly below p2", raw.p1) + ", p2 = " +
                            std::to_string(raw.p2));
  if (!(raw.p2 < 0.5))
    throw InvalidParams(ParamViolation::p2_not_below_half,
                        describe("p2 must be strictly below 1/2", raw.p2));
  if (!(raw.alpha >= 0.0 && raw.alpha <= 1.0))
    throw InvalidParams(ParamViolation::alpha_out_of_range,
                        describe("alpha must lie in [0, 1]", raw.alpha));
  if (!(raw.delta >= 0.0 && raw.delta < 1.0))
    throw InvalidParams(ParamViolation::delta_out_of_range,
                        describe("delta must lie in [0, 1)", raw.delta));
  return raw;
}

double transition_prob(AgentType x_next, AgentType x, Action a, const ModelParams& params) {
  const double flip_prob = matches(x, a) ? params.p1 : params.p2;
  return x_next == x ? 1.0 - flip_prob : flip_prob;
}

double reward(AgentType x, Action a, double mu1, const ModelParams& params) {
  const double xa = sign(x) * sign(a);
  return params.alpha * xa + (1.0 - params.alpha) * sign(a) * (2.0 * mu1 - 1.0);
}

}  // namespace herdfield
