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

#include <string>
#include <utility>
#include <vector>

namespace cnnscale {
namespace {

Network ScaleNetwork(const Network& network,
                     const std::vector<std::int64_t>& factors) {
  RequireValid(network);
  if (factors.size() != network.macro_layers.size()) {
    throw PreconditionError(
        "plan has " + std::to_string(factors.size()) + " factors for " +
        std::to_string(network.macro_layers.size()) + " macro-layers");
  }
  Network scaled = network;
  std::int64_t channels = scaled.input_channels;
  for (std::size_t i = 0; i < scaled.macro_layers.size(); ++i) {
    MacroLayer& layer = scaled.macro_layers[i];
    const std::int64_t f = factors[i];
    if (f < 1) {
      throw DivisibilityError(layer.name, "scaling factor " +
                                              std::to_string(f) +
                                              " is not positive");
    }
    for (Branch& branch : layer.branches) {
      for (MicroLayer& micro : branch.micro_layers) {
        if (micro.depth % f != 0) {
          throw DivisibilityError(
              layer.name, "scaling factor " + std::to_string(f) +
                              " does not divide depth " +
                              std::to_string(micro.depth));
        }
        micro.depth /= f;
      }
    }
    if (layer.input_channels) layer.input_channels = channels;
    const std::int64_t out = OutputChannels(layer);
    for (Annotation& note : layer.annotations) {
      if (!note.channels) continue;
      note.channels = note.site == AnnotationSite::kOutput ? out : channels;
    }
    channels = out;
  }
  return scaled;
}

std::pair<std::int64_t, std::int64_t> ThetaParts(const Rational& theta) {
  return {ToInt64(boost::multiprecision::numerator(theta)),
          ToInt64(boost::multiprecision::denominator(theta))};
}

}  // namespace

ScalePlan MakePlan(const Network& network, std::vector<std::int64_t> factors) {
  const Network scaled = ScaleNetwork(network, factors);
  ScalePlan plan;
  plan.factors = std::move(factors);
  plan.scaled_depths.reserve(scaled.macro_layers.size());
  for (const MacroLayer& layer : scaled.macro_layers) {
    std::vector<std::vector<std::int64_t>> branches;
    for (const Branch& branch : layer.branches) {
      std::vector<std::int64_t> depths;
      for (const MicroLayer& micro : branch.micro_layers) {
        depths.push_back(micro.depth);
      }
      branches.push_back(std::move(depths));
    }
    plan.scaled_depths.push_back(std::move(branches));
  }
  plan.phi_prime = CountParameters(scaled);
  return plan;
}

Network ApplyPlan(const Network& network, const ScalePlan& plan) {
  return ScaleNetwork(network, plan.factors);
}

Network ApplyFactors(const Network& network,
                     const std::vector<std::int64_t>& factors) {
  return ScaleNetwork(network, factors);
}

BottleneckPolicy BottleneckPolicy::AbsoluteRatio(Rational theta) {
  return {BottleneckMode::kAbsoluteRatio, std::move(theta)};
}

BottleneckPolicy BottleneckPolicy::BaselineRelative(Rational theta) {
  return {BottleneckMode::kBaselineRelative, std::move(theta)};
}

BottleneckPolicy BottleneckPolicy::StrictNondecreasing() {
  return {BottleneckMode::kStrictNondecreasing, Rational(1)};
}

void CheckPolicy(const BottleneckPolicy& policy) {
  if (policy.mode == BottleneckMode::kStrictNondecreasing) return;
  if (policy.theta <= 0 || policy.theta > 1) {
    throw PreconditionError("bottleneck theta must lie in (0, 1], got " +
                            FormatExact(policy.theta));
  }
  ThetaParts(policy.theta);
}

std::string_view ModeName(BottleneckMode mode) {
  switch (mode) {
    case BottleneckMode::kAbsoluteRatio:
      return "absolute-ratio";
    case BottleneckMode::kBaselineRelative:
      return "baseline-relative";
    case BottleneckMode::kStrictNondecreasing:
      return "strict-nondecreasing";
  }
  return "unknown";
}

std::optional<BottleneckMode> ParseMode(std::string_view name) {
  for (BottleneckMode mode :
       {BottleneckMode::kAbsoluteRatio, BottleneckMode::kBaselineRelative,
        BottleneckMode::kStrictNondecreasing}) {
    if (ModeName(mode) == name) return mode;
  }
  return std::nullopt;
}

bool IsBottleneck(const BottleneckPolicy& policy, std::int64_t prev_sum,
                  std::int64_t prev_factor, std::int64_t sum,
                  std::int64_t factor) {
  __extension__ typedef __int128 Wide;
  const Wide prev_scaled = prev_sum / prev_factor;
  const Wide scaled = sum / factor;
  switch (policy.mode) {
    case BottleneckMode::kStrictNondecreasing:
      return scaled < prev_scaled;
    case BottleneckMode::kAbsoluteRatio: {
      const auto [p, q] = ThetaParts(policy.theta);
      return scaled * q < prev_scaled * p;
    }
    case BottleneckMode::kBaselineRelative: {
      // scaled / prev_scaled < theta * sum / prev_sum
      const auto [p, q] = ThetaParts(policy.theta);
      return scaled * prev_sum * q < prev_scaled * sum * p;
    }
  }
  return false;
}

std::vector<int> CheckBottleneck(const std::vector<std::int64_t>& base_sums,
                                 const std::vector<std::int64_t>& scaled_sums,
                                 const BottleneckPolicy& policy) {
  CheckPolicy(policy);
  if (base_sums.size() != scaled_sums.size()) {
    throw PreconditionError("channel sum lists differ in length");
  }
  std::vector<int> flagged;
  for (std::size_t i = 1; i < base_sums.size(); ++i) {
    bool flag = false;
    switch (policy.mode) {
      case BottleneckMode::kStrictNondecreasing:
        flag = scaled_sums[i] < scaled_sums[i - 1];
        break;
      case BottleneckMode::kAbsoluteRatio:
        flag = Rational(scaled_sums[i]) < policy.theta * scaled_sums[i - 1];
        break;
      case BottleneckMode::kBaselineRelative:
        flag = Rational(scaled_sums[i], scaled_sums[i - 1]) <
               policy.theta * Rational(base_sums[i], base_sums[i - 1]);
        break;
    }
    if (flag) flagged.push_back(static_cast<int>(i));
  }
  return flagged;
}

std::vector<int> CheckBottleneck(const Network& network, const ScalePlan& plan,
                                 const BottleneckPolicy& policy) {
  const Network scaled = ApplyPlan(network, plan);
  std::vector<std::int64_t> base;
  std::vector<std::int64_t> after;
  for (std::size_t i = 0; i < network.macro_layers.size(); ++i) {
    base.push_back(ChannelSum(network.macro_layers[i]));
    after.push_back(ChannelSum(scaled.macro_layers[i]));
  }
  return CheckBottleneck(base, after, policy);
}

std::optional<Rational> MinChannelRatio(
    const std::vector<std::int64_t>& scaled_sums) {
  std::optional<Rational> best;
  for (std::size_t i = 1; i < scaled_sums.size(); ++i) {
    Rational ratio(scaled_sums[i], scaled_sums[i - 1]);
    if (!best || ratio < *best) best = ratio;
  }
  return best;
}

}  // namespace cnnscale
