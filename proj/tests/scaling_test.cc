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

#include "cnnscale/scaling.h"

#include <vector>

#include "cnnscale/errors.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace cnnscale {
namespace {

using testing::AlexNet;

std::vector<std::int64_t> Ofms(const Network& net) {
  std::vector<std::int64_t> out;
  for (const MacroLayer& layer : net.macro_layers) {
    out.push_back(OutputChannels(layer));
  }
  return out;
}

std::vector<int> Flags(const std::vector<std::int64_t>& factors) {
  const Network net = AlexNet();
  return CheckBottleneck(net, MakePlan(net, factors),
                         BottleneckPolicy::AbsoluteRatio());
}

TEST(ScalingTest, CaseFourPlan) {
  const Network net = AlexNet();
  const ScalePlan plan = MakePlan(net, {8, 8, 4, 3, 2});
  EXPECT_EQ(plan.phi_prime, 299652);
  const Network scaled = ApplyPlan(net, plan);
  EXPECT_EQ(Ofms(scaled), (std::vector<std::int64_t>{12, 32, 96, 128, 128}));
  EXPECT_EQ(CountParameters(scaled), 299652);
  EXPECT_EQ(plan.scaled_depths[2][0][0], 96);
}

TEST(ScalingTest, ReferenceScenarioOfms) {
  const Network net = AlexNet();
  EXPECT_EQ(Ofms(ApplyFactors(net, {24, 4, 128, 3, 1})),
            (std::vector<std::int64_t>{4, 64, 3, 128, 256}));
  EXPECT_EQ(Ofms(ApplyFactors(net, {2, 4, 2, 12, 2})),
            (std::vector<std::int64_t>{48, 64, 192, 32, 128}));
  EXPECT_EQ(Ofms(ApplyFactors(net, {3, 1, 12, 8, 128})),
            (std::vector<std::int64_t>{32, 256, 32, 48, 2}));
}

TEST(ScalingTest, IdentityPlan) {
  const Network net = AlexNet();
  const ScalePlan plan = MakePlan(net, {1, 1, 1, 1, 1});
  EXPECT_EQ(plan.phi_prime, CountParameters(net));
  EXPECT_EQ(plan.phi_prime, 3745824);
  EXPECT_EQ(Ofms(ApplyPlan(net, plan)), Ofms(net));
}

TEST(ScalingTest, RejectsBadPlans) {
  const Network net = AlexNet();
  EXPECT_THROW(MakePlan(net, {8, 8, 4, 3}), PreconditionError);
  EXPECT_THROW(MakePlan(net, {5, 1, 1, 1, 1}), DivisibilityError);
  EXPECT_THROW(MakePlan(net, {0, 1, 1, 1, 1}), DivisibilityError);
}

TEST(ScalingTest, RewritesDeclaredWiringAndAnnotations) {
  const Network net = testing::LoadFixture("alexnet.json");
  const Network scaled = ApplyFactors(net, {8, 8, 4, 3, 2});
  EXPECT_EQ(Ofms(scaled), (std::vector<std::int64_t>{12, 32, 96, 128, 128}));
  for (std::size_t i = 1; i < scaled.macro_layers.size(); ++i) {
    const MacroLayer& layer = scaled.macro_layers[i];
    if (layer.input_channels) {
      EXPECT_EQ(*layer.input_channels,
                OutputChannels(scaled.macro_layers[i - 1]));
    }
  }
  for (const MacroLayer& layer : scaled.macro_layers) {
    for (const Annotation& a : layer.annotations) {
      if (a.channels && a.site == AnnotationSite::kOutput) {
        EXPECT_EQ(*a.channels, OutputChannels(layer)) << layer.name;
      }
    }
  }
  EXPECT_TRUE(Validate(scaled).empty());
}

TEST(ScalingTest, GoogLeNetPlanStaysValid) {
  const Network net = testing::LoadFixture("googlenet.json");
  std::vector<std::int64_t> factors;
  for (const FactorSet& set : ComputeFactorSets(net)) {
    factors.push_back(set.factors.back());
  }
  const Network scaled = ApplyFactors(net, factors);
  EXPECT_TRUE(Validate(scaled).empty());
  EXPECT_LT(CountParameters(scaled), CountParameters(net));
}

// Reference scenarios: the default policy flags exactly these stages.
TEST(BottleneckTest, ReferenceScenarioCases) {
  EXPECT_EQ(Flags({24, 4, 128, 3, 1}), (std::vector<int>{2}));
  EXPECT_EQ(Flags({2, 4, 2, 12, 2}), (std::vector<int>{3}));
  EXPECT_EQ(Flags({3, 1, 12, 8, 128}), (std::vector<int>{2, 4}));
  EXPECT_TRUE(Flags({8, 8, 4, 3, 2}).empty());
  EXPECT_TRUE(Flags({1, 1, 1, 1, 1}).empty());
}

TEST(BottleneckTest, ThresholdIsStrict) {
  const auto policy = BottleneckPolicy::AbsoluteRatio(Rational(1, 2));
  // 50 is exactly half of 100: not a bottleneck.
  EXPECT_TRUE(CheckBottleneck({100, 100}, {100, 50}, policy).empty());
  EXPECT_EQ(CheckBottleneck({100, 100}, {100, 49}, policy),
            (std::vector<int>{1}));
  EXPECT_TRUE(IsBottleneck(policy, 100, 1, 98, 2));
  EXPECT_FALSE(IsBottleneck(policy, 100, 1, 100, 2));
}

TEST(BottleneckTest, OtherModes) {
  const auto strict = BottleneckPolicy::StrictNondecreasing();
  EXPECT_EQ(CheckBottleneck({10, 20, 20}, {10, 9, 9}, strict),
            (std::vector<int>{1}));

  // Baseline-relative: a drop already present in the baseline is tolerated.
  const auto relative = BottleneckPolicy::BaselineRelative(Rational(1, 4));
  EXPECT_TRUE(CheckBottleneck({256, 32}, {256, 32}, relative).empty());
  EXPECT_TRUE(CheckBottleneck({256, 32}, {256, 8}, relative).empty());
  EXPECT_EQ(CheckBottleneck({256, 32}, {256, 4}, relative),
            (std::vector<int>{1}));
  // The absolute policy flags the unscaled baseline drop.
  EXPECT_EQ(CheckBottleneck({256, 32}, {256, 32},
                            BottleneckPolicy::AbsoluteRatio()),
            (std::vector<int>{1}));
}

TEST(BottleneckTest, PolicyValidationAndNames) {
  EXPECT_THROW(CheckPolicy(BottleneckPolicy::AbsoluteRatio(0)),
               PreconditionError);
  EXPECT_THROW(CheckPolicy(BottleneckPolicy::AbsoluteRatio(Rational(3, 2))),
               PreconditionError);
  EXPECT_NO_THROW(CheckPolicy(BottleneckPolicy::AbsoluteRatio(1)));
  for (BottleneckMode mode :
       {BottleneckMode::kAbsoluteRatio, BottleneckMode::kBaselineRelative,
        BottleneckMode::kStrictNondecreasing}) {
    EXPECT_EQ(ParseMode(ModeName(mode)), mode);
  }
  EXPECT_FALSE(ParseMode("sideways").has_value());
}

TEST(BottleneckTest, IsBottleneckAgreesWithRationalCheck) {
  testing::NetworkGenerator gen(21, 6, 4000);
  for (int trial = 0; trial < 60; ++trial) {
    const Network net = gen.Next();
    const auto sets = ComputeFactorSets(net);
    std::vector<std::int64_t> factors;
    for (const FactorSet& set : sets) {
      std::uniform_int_distribution<std::size_t> d(0, set.factors.size() - 1);
      factors.push_back(set.factors[d(gen.rng())]);
    }
    const ScalePlan plan = MakePlan(net, factors);
    for (const BottleneckPolicy& policy :
         {BottleneckPolicy::AbsoluteRatio(),
          BottleneckPolicy::BaselineRelative(),
          BottleneckPolicy::StrictNondecreasing()}) {
      std::vector<int> fast;
      for (std::size_t i = 1; i < factors.size(); ++i) {
        if (IsBottleneck(policy, ChannelSum(net.macro_layers[i - 1]),
                         factors[i - 1], ChannelSum(net.macro_layers[i]),
                         factors[i])) {
          fast.push_back(static_cast<int>(i));
        }
      }
      EXPECT_EQ(fast, CheckBottleneck(net, plan, policy));
    }
  }
}

TEST(MinChannelRatioTest, Basics) {
  EXPECT_FALSE(MinChannelRatio({7}).has_value());
  EXPECT_EQ(MinChannelRatio({4, 64, 3, 128}), Rational(3, 64));
  EXPECT_EQ(MinChannelRatio({10, 20}), Rational(2));
}

}  // namespace
}  // namespace cnnscale
