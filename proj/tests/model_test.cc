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

#include "cnnscale/model.h"

#include <random>

#include "gtest/gtest.h"
#include "test_util.h"

namespace cnnscale {
namespace {

using testing::AlexNet;
using testing::Conv;
using testing::Single;

TEST(CountParametersTest, MicroLayerIsBiasFreeProduct) {
  EXPECT_EQ(CountParameters(Conv(5, 256, 27), 96), 614400);
  EXPECT_EQ(CountParameters(Conv(1, 1, 1), 1), 1);
  EXPECT_EQ(CountParameters(Conv(3, 384, 13), 384), 1327104);
}

TEST(CountParametersTest, AlexNetPerLayerAndTotal) {
  const Network net = AlexNet();
  EXPECT_EQ(CountLayerParameters(net),
            (std::vector<std::int64_t>{34848, 614400, 884736, 1327104,
                                       884736}));
  EXPECT_EQ(CountParameters(net), 3745824);
}

TEST(CountParametersTest, SingleLayer) {
  Network net;
  net.name = "one";
  net.input_channels = 3;
  net.macro_layers = {Single("conv1", Conv(11, 96, 55))};
  EXPECT_EQ(CountParameters(net), 34848);
}

TEST(CountParametersTest, BranchChainsAndConcatenation) {
  // in=8; branch A: 1x1 4; branch B: 1x1 2 -> 3x3 6. Output 10 channels.
  Network net;
  net.name = "inception";
  net.input_channels = 8;
  MacroLayer layer;
  layer.name = "mixed";
  layer.branches = {{{Conv(1, 4, 7)}}, {{Conv(1, 2, 7), Conv(3, 6, 7)}}};
  net.macro_layers = {layer, Single("next", Conv(1, 5, 7))};
  EXPECT_EQ(OutputChannels(net.macro_layers[0]), 10);
  EXPECT_EQ(ChannelSum(net.macro_layers[0]), 12);
  EXPECT_EQ(MicroLayerCount(net.macro_layers[0]), 3);
  // 8*4 + 8*2 + 2*9*6 = 32 + 16 + 108; then 10*5.
  EXPECT_EQ(CountLayerParameters(net),
            (std::vector<std::int64_t>{156, 50}));
  EXPECT_EQ(PropagatedInputChannels(net),
            (std::vector<std::int64_t>{8, 10}));
}

TEST(CountFlopsTest, Examples) {
  Network conv1;
  conv1.name = "conv1";
  conv1.input_channels = 3;
  conv1.macro_layers = {Single("conv1", Conv(11, 96, 55))};
  EXPECT_EQ(CountFlops(conv1), 210830400);

  Network unit;
  unit.name = "unit";
  unit.input_channels = 1;
  unit.macro_layers = {Single("c", Conv(1, 1, 1))};
  EXPECT_EQ(CountFlops(unit), 2);
}

TEST(CountFlopsTest, DividingDepthDividesFlops) {
  for (std::int64_t f : {1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 96}) {
    Network net;
    net.name = "n";
    net.input_channels = 3;
    net.macro_layers = {Single("conv1", Conv(11, 96 / f, 55))};
    EXPECT_EQ(CountFlops(net) * f, 210830400) << "factor " << f;
  }
}

TEST(ValidateTest, WellFormedAlexNet) { EXPECT_TRUE(Validate(AlexNet()).empty()); }

TEST(ValidateTest, DeclaredInputMismatchIsOneWiringFinding) {
  Network net = AlexNet();
  net.macro_layers[1].input_channels = 95;
  const std::vector<Finding> findings = Validate(net);
  ASSERT_EQ(findings.size(), 1u);
  EXPECT_EQ(findings[0].location, "conv2");
  EXPECT_EQ(findings[0].rule, "channel-wiring");
}

TEST(ValidateTest, ZeroDepthIsOneInvariantFinding) {
  Network net = AlexNet();
  net.macro_layers[2].branches[0].micro_layers[0].depth = 0;
  net.macro_layers[3].input_channels = 384;
  const std::vector<Finding> findings = Validate(net);
  ASSERT_EQ(findings.size(), 1u);
  EXPECT_EQ(findings[0].location, "conv3");
  EXPECT_EQ(findings[0].rule, "positive-dimension");
}

TEST(ValidateTest, StructuralRules) {
  Network net = AlexNet();
  net.macro_layers[1].name = "conv1";
  net.macro_layers[2].branches.clear();
  net.macro_layers[3].branches[0].micro_layers.clear();
  net.classifier_classes = 0;
  std::vector<std::string> rules;
  for (const Finding& f : Validate(net)) rules.push_back(f.rule);
  EXPECT_EQ(rules, (std::vector<std::string>{"positive-classifier",
                                             "unique-name",
                                             "non-empty-macro-layer",
                                             "non-empty-branch"}));

  Network empty;
  empty.name = "empty";
  ASSERT_EQ(Validate(empty).size(), 1u);
  EXPECT_EQ(Validate(empty)[0].rule, "non-empty-network");
}

TEST(ValidateTest, AnnotationChannelsMustTrackWiring) {
  Network net = AlexNet();
  net.macro_layers[0].annotations.push_back(
      {"maxpool", AnnotationSite::kOutput, 96, {}});
  net.macro_layers[1].annotations.push_back(
      {"pool", AnnotationSite::kInput, 96, {}});
  EXPECT_TRUE(Validate(net).empty());
  net.macro_layers[1].annotations.back().channels = 3;
  ASSERT_EQ(Validate(net).size(), 1u);
  EXPECT_EQ(Validate(net)[0].rule, "annotation-channels");
}

TEST(ValidateTest, CountingRejectsInvalidNetworks) {
  Network net = AlexNet();
  net.macro_layers[1].input_channels = 1;
  EXPECT_THROW(CountParameters(net), ValidationError);
  EXPECT_THROW(CountFlops(net), ValidationError);
}

// Property: raising any single depth strictly raises the parameter count.
TEST(CountParametersProperty, StrictlyMonotoneInEveryDepth) {
  testing::NetworkGenerator gen(7, 6, 1'000'000);
  for (int trial = 0; trial < 200; ++trial) {
    const Network net = gen.Next();
    const std::int64_t base = CountParameters(net);
    for (std::size_t i = 0; i < net.macro_layers.size(); ++i) {
      for (std::size_t b = 0; b < net.macro_layers[i].branches.size(); ++b) {
        const auto& chain = net.macro_layers[i].branches[b].micro_layers;
        for (std::size_t m = 0; m < chain.size(); ++m) {
          Network bigger = net;
          ++bigger.macro_layers[i].branches[b].micro_layers[m].depth;
          EXPECT_GT(CountParameters(bigger), base);
        }
      }
    }
  }
}

}  // namespace
}  // namespace cnnscale
