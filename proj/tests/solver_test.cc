// Copyright 2026 The cnnscale Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cnnscale/solver.h"

#include <vector>

#include "cnnscale/errors.h"
#include "cnnscale/factor_space.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace cnnscale {
namespace {

using testing::AlexNet;

SolveRequest MakeRequest(const Network& net, const Rational& fraction,
                         ObjectiveMode objective = ObjectiveMode::kCapMaximize,
                         BottleneckPolicy policy = {}) {
  SolveRequest request;
  request.network = net;
  request.budget.fraction = fraction;
  request.budget.phi_prime_floor =
      ToInt64(Ceil(fraction * CountParameters(net)));
  request.objective = objective;
  request.policy = policy;
  return request;
}

// Everything the two solvers must agree on.
void ExpectSameResult(const SolveResult& dp, const SolveResult& brute) {
  ASSERT_EQ(dp.feasible(), brute.feasible());
  if (dp.feasible()) {
    EXPECT_EQ(dp.plan->phi_prime, brute.plan->phi_prime);
    EXPECT_EQ(dp.plan->factors, brute.plan->factors);
    EXPECT_EQ(dp.min_channel_ratio, brute.min_channel_ratio);
  } else {
    EXPECT_EQ(dp.nearest_below, brute.nearest_below);
    EXPECT_EQ(dp.nearest_above, brute.nearest_above);
  }
}

TEST(SolverTest, AlexNetCapMatchesBruteForce) {
  const SolveRequest request = MakeRequest(AlexNet(), Rational(8, 100));
  const SolveResult dp = SolveDp(request);
  const SolveResult brute = SolveBruteForce(request);
  ExpectSameResult(dp, brute);
  ASSERT_TRUE(dp.feasible());
  EXPECT_EQ(dp.plan->phi_prime, 299661);
  EXPECT_LE(dp.plan->phi_prime, request.budget.phi_prime_floor);
  EXPECT_TRUE(CheckBottleneck(AlexNet(), *dp.plan, request.policy).empty());
  EXPECT_FALSE(dp.approximate);
}

TEST(SolverTest, AlexNetWindowMatchesBruteForce) {
  const SolveRequest request =
      MakeRequest(AlexNet(), Rational(8, 100), ObjectiveMode::kWindow);
  const SolveResult dp = SolveDp(request);
  ExpectSameResult(dp, SolveBruteForce(request));
  ASSERT_TRUE(dp.feasible());
  const FeasibleRegion region = ComputeFeasibleRegion(request);
  EXPECT_TRUE(region.Contains(dp.plan->phi_prime));
  EXPECT_EQ(dp.plan->phi_prime, 307095);
}

TEST(SolverTest, FeasibleRegionIsStrictWindow) {
  SolveRequest request =
      MakeRequest(AlexNet(), Rational(8, 100), ObjectiveMode::kWindow);
  // center 299665.92, half-width 7491.648
  const FeasibleRegion region = ComputeFeasibleRegion(request);
  EXPECT_EQ(region.lower, 292175);
  EXPECT_EQ(region.upper, 307157);
  request.objective = ObjectiveMode::kCapMaximize;
  EXPECT_EQ(ComputeFeasibleRegion(request).lower, 0);
  EXPECT_EQ(ComputeFeasibleRegion(request).upper, 299666);
}

TEST(SolverTest, SingleLayerPicksHalf) {
  Network net;
  net.name = "one";
  net.input_channels = 3;
  net.macro_layers = {testing::Single("c", testing::Conv(3, 96, 8))};
  const SolveResult result = SolveDp(MakeRequest(net, Rational(1, 2)));
  ASSERT_TRUE(result.feasible());
  EXPECT_EQ(result.plan->factors, (std::vector<std::int64_t>{2}));
  EXPECT_EQ(result.plan->phi_prime, CountParameters(net) / 2);
  EXPECT_FALSE(result.min_channel_ratio.has_value());
}

TEST(SolverTest, IdentityAtFullBudget) {
  for (ObjectiveMode mode :
       {ObjectiveMode::kCapMaximize, ObjectiveMode::kWindow}) {
    const SolveResult result = SolveDp(MakeRequest(AlexNet(), 1, mode));
    ASSERT_TRUE(result.feasible());
    EXPECT_EQ(result.plan->factors,
              (std::vector<std::int64_t>{1, 1, 1, 1, 1}));
    EXPECT_EQ(result.plan->phi_prime, CountParameters(AlexNet()));
  }
}

TEST(SolverTest, InfeasibleReportsNearestValues) {
  // No plan reaches below a handful of parameters.
  const SolveRequest request = MakeRequest(AlexNet(), Rational(1, 1'000'000));
  const SolveResult dp = SolveDp(request);
  EXPECT_FALSE(dp.feasible());
  EXPECT_FALSE(dp.nearest_below.has_value());
  ASSERT_TRUE(dp.nearest_above.has_value());
  EXPECT_GT(*dp.nearest_above, request.budget.phi_prime_floor);
  ExpectSameResult(dp, SolveBruteForce(request));

  // Window with nothing inside it: both neighbours exist.
  SolveRequest window =
      MakeRequest(AlexNet(), Rational(8, 100), ObjectiveMode::kWindow);
  window.window_tolerance = 0;
  const SolveResult empty = SolveDp(window);
  EXPECT_FALSE(empty.feasible());
  ExpectSameResult(empty, SolveBruteForce(window));
}

TEST(SolverTest, ThreadCountDoesNotChangeResult) {
  const Network google = testing::LoadFixture("googlenet.json");
  SolveRequest request = MakeRequest(google, Rational(1, 4));
  const SolveResult serial = SolveDp(request);
  ASSERT_TRUE(serial.feasible());
  for (int threads : {2, 4, 7}) {
    request.threads = threads;
    const SolveResult parallel = SolveDp(request);
    ASSERT_TRUE(parallel.feasible());
    EXPECT_EQ(parallel.plan->factors, serial.plan->factors);
    EXPECT_EQ(parallel.min_channel_ratio, serial.min_channel_ratio);
  }
}

TEST(SolverTest, QuantizedResultIsMarkedAndFeasible) {
  SolveRequest request = MakeRequest(AlexNet(), Rational(8, 100));
  request.quantization = 1000;
  const SolveResult result = SolveDp(request);
  EXPECT_TRUE(result.approximate);
  ASSERT_TRUE(result.feasible());
  EXPECT_LE(result.plan->phi_prime, request.budget.phi_prime_floor);
  EXPECT_LE(result.plan->phi_prime, 299661);
  EXPECT_TRUE(CheckBottleneck(AlexNet(), *result.plan, request.policy).empty());
}

TEST(SolverTest, RejectsMalformedRequests) {
  SolveRequest request = MakeRequest(AlexNet(), Rational(8, 100));
  request.budget.phi_prime_floor = CountParameters(AlexNet()) + 1;
  EXPECT_THROW(SolveDp(request), PreconditionError);
  request = MakeRequest(AlexNet(), Rational(8, 100));
  request.quantization = -1;
  EXPECT_THROW(SolveDp(request), PreconditionError);
  request = MakeRequest(AlexNet(), Rational(8, 100));
  request.policy.theta = 2;
  EXPECT_THROW(SolveDp(request), PreconditionError);
  request = MakeRequest(AlexNet(), Rational(8, 100));
  request.enumeration_cap = 100;
  EXPECT_THROW(SolveBruteForce(request), CapExceededError);
}

TEST(SolverTest, ObjectiveNames) {
  EXPECT_EQ(ParseObjective(ObjectiveName(ObjectiveMode::kWindow)),
            ObjectiveMode::kWindow);
  EXPECT_EQ(ParseObjective("cap-maximize"), ObjectiveMode::kCapMaximize);
  EXPECT_FALSE(ParseObjective("max").has_value());
}

// Property: on random small networks the DP agrees with exhaustive search
// for every objective and policy, the optimum never decreases as the
// budget grows, and the full budget returns the identity plan.
TEST(SolverProperty, DpMatchesBruteForceOnRandomNetworks) {
  testing::NetworkGenerator gen(2026, 6, 20'000);
  const std::vector<BottleneckPolicy> policies = {
      BottleneckPolicy::AbsoluteRatio(), BottleneckPolicy::BaselineRelative(),
      BottleneckPolicy::StrictNondecreasing()};
  for (int trial = 0; trial < 120; ++trial) {
    SCOPED_TRACE(trial);
    const Network net = gen.Next();
    const BottleneckPolicy& policy = policies[trial % policies.size()];
    const ObjectiveMode mode =
        trial % 2 ? ObjectiveMode::kWindow : ObjectiveMode::kCapMaximize;
    const Rational fraction(1 + trial % 7, 8);
    SolveRequest request = MakeRequest(net, fraction, mode, policy);
    request.window_tolerance = Rational(1, 20);
    request.threads = 1 + trial % 3;
    ExpectSameResult(SolveDp(request), SolveBruteForce(request));

    std::int64_t previous = -1;
    for (int eighths = 1; eighths <= 8; ++eighths) {
      const SolveResult r = SolveDp(
          MakeRequest(net, Rational(eighths, 8), ObjectiveMode::kCapMaximize,
                      policy));
      const std::int64_t value = r.feasible() ? r.plan->phi_prime : -1;
      EXPECT_GE(value, previous);
      previous = value;
    }

    // Identity is bottleneck-free under the two relative policies and under
    // the absolute one whenever the baseline itself passes.
    const ScalePlan identity =
        MakePlan(net, std::vector<std::int64_t>(net.macro_layers.size(), 1));
    if (CheckBottleneck(net, identity, policy).empty()) {
      const SolveResult full = SolveDp(
          MakeRequest(net, 1, ObjectiveMode::kCapMaximize, policy));
      ASSERT_TRUE(full.feasible());
      EXPECT_EQ(full.plan->phi_prime, CountParameters(net));
      EXPECT_EQ(full.plan->factors, identity.factors);
    }
  }
}

}  // namespace
}  // namespace cnnscale
