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

#ifndef CNNSCALE_SCALING_H_
#define CNNSCALE_SCALING_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cnnscale/model.h"
#include "cnnscale/rational.h"

namespace cnnscale {

// One scaling factor per macro-layer and what it produces.
struct ScalePlan {
  std::vector<std::int64_t> factors;
  // scaled_depths[macro][branch][micro] = depth / factors[macro].
  std::vector<std::vector<std::vector<std::int64_t>>> scaled_depths;
  std::int64_t phi_prime = 0;

  bool operator==(const ScalePlan&) const = default;
};

// Builds the plan for `factors`. Throws PreconditionError on a length
// mismatch and DivisibilityError when a factor does not divide a depth.
ScalePlan MakePlan(const Network& network, std::vector<std::int64_t> factors);

// Divides every depth of macro-layer i by plan.factors[i]. Kernels,
// geometry, topology and annotations are kept; declared input channels and
// annotation channel counts are rewritten to the new wiring.
Network ApplyPlan(const Network& network, const ScalePlan& plan);
Network ApplyFactors(const Network& network,
                     const std::vector<std::int64_t>& factors);

enum class BottleneckMode {
  // Flag i when S'_i < theta * S'_{i-1}.
  kAbsoluteRatio,
  // Flag i when S'_i / S'_{i-1} < theta * S_i / S_{i-1}.
  kBaselineRelative,
  // Flag i when S'_i < S'_{i-1}.
  kStrictNondecreasing,
};

// S is a macro-layer's channel sum (see ChannelSum()), S' the scaled one.
struct BottleneckPolicy {
  BottleneckMode mode = BottleneckMode::kAbsoluteRatio;
  Rational theta = Rational(1, 2);

  static BottleneckPolicy AbsoluteRatio(Rational theta = Rational(1, 2));
  static BottleneckPolicy BaselineRelative(Rational theta = Rational(1, 4));
  static BottleneckPolicy StrictNondecreasing();
};

// Throws PreconditionError when theta is outside (0, 1] for a ratio mode.
void CheckPolicy(const BottleneckPolicy& policy);

std::string_view ModeName(BottleneckMode mode);
// Accepts "absolute-ratio", "baseline-relative", "strict-nondecreasing".
std::optional<BottleneckMode> ParseMode(std::string_view name);

// Whether the transition between consecutive stages with baseline channel
// sums (prev_sum, sum) scaled by (prev_factor, factor) is a bottleneck.
bool IsBottleneck(const BottleneckPolicy& policy, std::int64_t prev_sum,
                  std::int64_t prev_factor, std::int64_t sum,
                  std::int64_t factor);

// Zero-based indices of the macro-layers flagged as bottlenecks.
std::vector<int> CheckBottleneck(const Network& network, const ScalePlan& plan,
                                 const BottleneckPolicy& policy);

// Same check on explicit channel sums, baseline and scaled.
std::vector<int> CheckBottleneck(const std::vector<std::int64_t>& base_sums,
                                 const std::vector<std::int64_t>& scaled_sums,
                                 const BottleneckPolicy& policy);

// min over i >= 1 of scaled_sums[i] / scaled_sums[i-1]; nullopt for fewer
// than two stages.
std::optional<Rational> MinChannelRatio(
    const std::vector<std::int64_t>& scaled_sums);

}  // namespace cnnscale

#endif  // CNNSCALE_SCALING_H_
