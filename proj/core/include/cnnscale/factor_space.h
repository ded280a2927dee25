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

#ifndef CNNSCALE_FACTOR_SPACE_H_
#define CNNSCALE_FACTOR_SPACE_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cnnscale/model.h"
#include "cnnscale/rational.h"

namespace cnnscale {

// All divisors of n in ascending order. Requires n >= 1.
std::vector<std::int64_t> Divisors(std::int64_t n);

// Admissible scaling factors of one macro-layer: the common divisors of all
// of its micro-layer depths, ascending. Always contains 1.
struct FactorSet {
  std::string macro_layer;
  std::vector<std::int64_t> factors;

  bool operator==(const FactorSet&) const = default;
};

FactorSet ComputeFactorSet(const MacroLayer& layer);
std::vector<FactorSet> ComputeFactorSets(const Network& network);

// affine: product over macro-layers of the factor-set sizes.
// !affine: product over every micro-layer of the divisor count of its depth,
// i.e. what independent per-micro-layer scaling would allow.
BigInt CountSolutionSpace(const Network& network, bool affine);

// Parameter cost of every macro-layer under every pair (previous factor,
// own factor). A macro-layer's cost depends on the previous factor because
// that factor fixes its input channel count.
class LayerCostTable {
 public:
  explicit LayerCostTable(const Network& network);

  int layer_count() const { return static_cast<int>(factors_.size()); }
  std::span<const std::int64_t> factors(int layer) const {
    return factors_[layer];
  }
  int factor_count(int layer) const {
    return static_cast<int>(factors_[layer].size());
  }

  // For layer 0 `prev_index` is ignored.
  std::int64_t Cost(int layer, int prev_index, int index) const;

  // Unscaled channel sum of the macro-layer.
  std::int64_t BaseChannelSum(int layer) const { return channel_sums_[layer]; }
  std::int64_t ScaledChannelSum(int layer, int index) const {
    return channel_sums_[layer] / factors_[layer][index];
  }

  // Parameter count of the plan given as one factor index per layer.
  std::int64_t PlanCost(std::span<const int> indices) const;

 private:
  std::vector<std::vector<std::int64_t>> factors_;
  std::vector<std::int64_t> channel_sums_;
  // costs_[layer][prev_index * factor_count(layer) + index]
  std::vector<std::vector<std::int64_t>> costs_;
};

struct WindowQuery {
  // Plans count when |target_fraction * phi - phi'| / phi < tolerance.
  Rational target_fraction = Rational(8, 100);
  Rational tolerance = Rational(2, 1000);
  std::uint64_t enumeration_cap = 10'000'000;
  int threads = 1;
};

struct WindowCount {
  std::uint64_t matching = 0;
  std::uint64_t visited = 0;
  // Set when the space exceeded the cap but the window covers every plan,
  // so the closed-form product was returned without visiting.
  bool closed_form = false;
};

// Receives each matching plan: factors in macro-layer order and phi'.
using PlanSink =
    std::function<void(std::span<const std::int64_t> factors,
                       std::int64_t phi_prime)>;

// Visits every affine factor assignment, ignoring bottlenecks, and counts
// those inside the window. Streams matches to `sink` when given, in
// lexicographic factor order. Enumeration is split by the first layer's
// factor across `threads`; counts do not depend on the split.
//
// Throws CapExceededError when the affine space exceeds
// query.enumeration_cap, unless the window covers all of [0, phi] and no
// sink was given.
WindowCount EnumerateWindow(const Network& network, const WindowQuery& query,
                            const PlanSink& sink = {});

}  // namespace cnnscale

#endif  // CNNSCALE_FACTOR_SPACE_H_
