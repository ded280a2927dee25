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

#ifndef CNNSCALE_SYNTHESIS_H_
#define CNNSCALE_SYNTHESIS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cnnscale/budget.h"
#include "cnnscale/model.h"
#include "cnnscale/rational.h"
#include "cnnscale/scaling.h"
#include "cnnscale/solver.h"

namespace cnnscale {

struct SynthesisOptions {
  bool scope_aware = false;
  // Overrides the class-derived budget fraction when set.
  std::optional<Rational> target_fraction;
  Rational window_tolerance = Rational(2, 1000);
  BottleneckPolicy policy;
  ObjectiveMode objective = ObjectiveMode::kCapMaximize;
  std::int64_t quantization = 0;
  std::uint64_t enumeration_cap = 10'000'000;
  int threads = 1;
};

struct LayerReport {
  std::string name;
  std::int64_t factor = 1;
  std::int64_t output_channels = 0;
  std::int64_t scaled_output_channels = 0;
  std::int64_t channel_sum = 0;
  std::int64_t scaled_channel_sum = 0;
  std::int64_t parameters = 0;
  std::int64_t scaled_parameters = 0;
  std::vector<std::int64_t> scaled_depths;
};

struct SynthesisReport {
  std::string network_name;
  ClassScope scope;
  bool scope_aware = false;
  ObjectiveMode objective = ObjectiveMode::kCapMaximize;
  BottleneckPolicy policy;
  Rational window_tolerance;

  std::int64_t phi = 0;
  BudgetResult budget;
  FeasibleRegion region;

  bool feasible = false;
  bool approximate = false;
  std::int64_t phi_prime = 0;
  std::vector<std::int64_t> factors;
  std::vector<LayerReport> layers;
  std::vector<int> bottlenecks;
  std::optional<Rational> min_channel_ratio;
  std::optional<std::int64_t> nearest_below;
  std::optional<std::int64_t> nearest_above;

  std::int64_t flops = 0;
  std::int64_t scaled_flops = 0;
  BigInt affine_solutions;
  BigInt non_affine_solutions;
  std::int64_t classifier_classes = 0;
  std::int64_t scaled_classifier_classes = 0;
};

struct SynthesisOutcome {
  // Empty when no plan satisfies the budget and the bottleneck policy.
  std::optional<Network> network;
  SynthesisReport report;
};

// Budget, factor sets, dynamic program, plan application and classifier
// rewrite in sequence. Throws ValidationError on an invalid network and
// PreconditionError on inconsistent options.
SynthesisOutcome Synthesize(const Network& network, const ClassScope& scope,
                            const SynthesisOptions& options);

nlohmann::ordered_json ToJson(const SynthesisReport& report);

// Fixed-width text table; parameters in 2-decimal millions, ratios to 2
// decimals.
std::string FormatReportTable(const SynthesisReport& report);

}  // namespace cnnscale

#endif  // CNNSCALE_SYNTHESIS_H_
