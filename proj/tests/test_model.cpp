#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "herdfield/model.hpp"
#include "oracles.hpp"

using namespace herdfield;

namespace {

ModelParams with(double p1, double p2, double alpha, double delta) { return {p1, p2, alpha, delta}; }

ParamViolation violation_of(const ModelParams& m) {
  try {
    validate_params(m);
  } catch (const InvalidParams& e) {
    return e.violation();
  }
  ADD_FAILURE() << "expected InvalidParams";
  return ParamViolation::p1_out_of_range;
}

}  // namespace

TEST(ValidateParams, AcceptsDefaults) {
  const ModelParams m = with(0.1, 0.3, 0.5, 0.9);
  EXPECT_EQ(validate_params(m), m);
}

TEST(ValidateParams, AcceptsEdgeValues) {
  EXPECT_NO_THROW(validate_params(with(0.0, 0.3, 0.0, 0.0)));
  EXPECT_NO_THROW(validate_params(with(0.1, 0.3, 1.0, 0.9)));
}

TEST(ValidateParams, NamesEachBrokenInvariant) {
  EXPECT_EQ(violation_of(with(-0.1, 0.3, 0.5, 0.9)), ParamViolation::p1_out_of_range);
  EXPECT_EQ(violation_of(with(0.3, 0.1, 0.5, 0.9)), ParamViolation::p1_not_below_p2);
  EXPECT_EQ(violation_of(with(0.3, 0.3, 0.5, 0.9)), ParamViolation::p1_not_below_p2);
  EXPECT_EQ(violation_of(with(0.1, 0.5, 0.5, 0.9)), ParamViolation::p2_not_below_half);
  EXPECT_EQ(violation_of(with(0.1, 0.3, 1.2, 0.9)), ParamViolation::alpha_out_of_range);
  EXPECT_EQ(violation_of(with(0.1, 0.3, -0.01, 0.9)), ParamViolation::alpha_out_of_range);
  EXPECT_EQ(violation_of(with(0.1, 0.3, 0.5, 1.0)), ParamViolation::delta_out_of_range);
  EXPECT_EQ(violation_of(with(0.1, 0.3, 0.5, -0.5)), ParamViolation::delta_out_of_range);
}

TEST(ValidateParams, RejectsNaN) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(validate_params(with(nan, 0.3, 0.5, 0.9)), InvalidParams);
  EXPECT_THROW(validate_params(with(0.1, nan, 0.5, 0.9)), InvalidParams);
  EXPECT_THROW(validate_params(with(0.1, 0.3, nan, 0.9)), InvalidParams);
  EXPECT_THROW(validate_params(with(0.1, 0.3, 0.5, nan)), InvalidParams);
}

TEST(ValidateParams, MessagesAreDistinct) {
  std::set<std::string> messages;
  for (const ModelParams& m : {with(-0.1, 0.3, 0.5, 0.9), with(0.3, 0.1, 0.5, 0.9), with(0.1, 0.5, 0.5, 0.9),
                               with(0.1, 0.3, 1.2, 0.9), with(0.1, 0.3, 0.5, 1.0)}) {
    try {
      validate_params(m);
    } catch (const InvalidParams& e) {
      messages.insert(e.what());
    }
  }
  EXPECT_EQ(messages.size(), 5u);
}

TEST(TransitionProb, Examples) {
  const ModelParams m;
  EXPECT_DOUBLE_EQ(transition_prob(AgentType::high, AgentType::high, Action::plus, m), 0.9);
  EXPECT_DOUBLE_EQ(transition_prob(AgentType::low, AgentType::high, Action::plus, m), 0.1);
  EXPECT_DOUBLE_EQ(transition_prob(AgentType::high, AgentType::high, Action::minus, m), 0.7);
  EXPECT_DOUBLE_EQ(transition_prob(AgentType::low, AgentType::high, Action::minus, m), 0.3);
  EXPECT_DOUBLE_EQ(transition_prob(AgentType::high, AgentType::low, Action::minus, m), 0.1);
  EXPECT_DOUBLE_EQ(transition_prob(AgentType::high, AgentType::low, Action::plus, m), 0.3);
}

TEST(Reward, Examples) {
  EXPECT_DOUBLE_EQ(reward(AgentType::high, Action::plus, 1.0, with(0.1, 0.3, 0.5, 0.9)), 1.0);
  EXPECT_DOUBLE_EQ(reward(AgentType::high, Action::minus, 1.0, with(0.1, 0.3, 0.5, 0.9)), -1.0);
  EXPECT_DOUBLE_EQ(reward(AgentType::low, Action::plus, 0.5, with(0.1, 0.3, 0.5, 0.9)), -0.5);
  EXPECT_DOUBLE_EQ(reward(AgentType::low, Action::minus, 0.0, with(0.1, 0.3, 0.1, 0.9)), 1.0);
  EXPECT_DOUBLE_EQ(reward(AgentType::high, Action::minus, 0.0, with(0.1, 0.3, 0.1, 0.9)), 0.8);
}

TEST(Reward, PureNetworkAndPurePreference) {
  const ModelParams net = with(0.1, 0.3, 0.0, 0.9);
  const ModelParams pref = with(0.1, 0.3, 1.0, 0.9);
  for (double mu : {0.0, 0.3, 1.0}) {
    for (AgentType x : kTypes) {
      EXPECT_DOUBLE_EQ(reward(x, Action::plus, mu, net), 2 * mu - 1);
      EXPECT_DOUBLE_EQ(reward(x, Action::plus, mu, pref), sign(x));
    }
  }
}

// ---------------------------------------------------------------- properties

TEST(ModelProperties, KernelRowsAreDistributions) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const ModelParams m = oracle::random_params(rng);
    for (AgentType x : kTypes) {
      for (Action a : kActions) {
        const double up = transition_prob(AgentType::high, x, a, m);
        const double down = transition_prob(AgentType::low, x, a, m);
        EXPECT_GE(up, 0.0);
        EXPECT_GE(down, 0.0);
        EXPECT_NEAR(up + down, 1.0, 1e-15);
      }
    }
  }
}

TEST(ModelProperties, KernelAndRewardAreFlipSymmetric) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const ModelParams m = oracle::random_params(rng);
    const double mu = u(rng);
    for (AgentType x : kTypes) {
      for (Action a : kActions) {
        for (AgentType y : kTypes)
          EXPECT_DOUBLE_EQ(transition_prob(y, x, a, m), transition_prob(flip(y), flip(x), flip(a), m));
        EXPECT_NEAR(reward(x, a, mu, m), reward(flip(x), flip(a), 1.0 - mu, m), 1e-15);
      }
    }
  }
}

TEST(ModelProperties, RewardIsBounded) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const ModelParams m = oracle::random_params(rng);
    const double mu = u(rng);
    for (AgentType x : kTypes)
      for (Action a : kActions) EXPECT_LE(std::abs(reward(x, a, mu, m)), 1.0 + 1e-15);
  }
}

TEST(ModelProperties, RewardSlopeInMu) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  const double h = 1e-4;
  for (int trial = 0; trial < 500; ++trial) {
    const ModelParams m = oracle::random_params(rng);
    const double mu = u(rng);
    for (AgentType x : kTypes) {
      for (Action a : kActions) {
        const double slope = (reward(x, a, mu + h, m) - reward(x, a, mu - h, m)) / (2 * h);
        EXPECT_NEAR(slope, 2 * (1 - m.alpha) * sign(a), 1e-9);
      }
    }
  }
}
