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

#ifndef CNNSCALE_SOLVER_H_
#define CNNSCALE_SOLVER_H_

#include <cstdint>
#include <optional>
#include <string_view>

#include "cnnscale/budget.h"
#include "cnnscale/model.h"
#include "cnnscale/rational.h"
#include "cnnscale/scaling.h"

namespace cnnscale {

enum class ObjectiveMode {
  // Largest phi' not above budget.phi_prime_floor.
  kCapMaximize,
  // Largest phi' with |fraction * phi - phi'| / phi < window_tolerance.
  kWindow,
};

std::string_view ObjectiveName(ObjectiveMode mode);
// Accepts "cap-maximize" and "window".
std::optional<ObjectiveMode> ParseObjective(std::string_view name);

struct SolveRequest {
  Network network;
  BudgetResult budget;
  BottleneckPolicy policy;
  ObjectiveMode objective = ObjectiveMode::kCapMaximize;
  Rational window_tolerance = Rational(2, 1000);
  // When positive, the dynamic program keeps only the largest reachable sum
  // per bucket of this many parameters and the result is marked approximate.
  std::int64_t quantization = 0;
  // Brute force refuses spaces larger than this.
  std::uint64_t enumeration_cap = 10'000'000;
  int threads = 1;
};

// Inclusive range of acceptable phi' values.
struct FeasibleRegion {
  std::int64_t lower = 0;
  std::int64_t upper = 0;

  bool Contains(std::int64_t v) const { return lower <= v && v <= upper; }
  bool empty() const { return lower > upper; }
};

// Throws PreconditionError when the request is malformed or invalid.
FeasibleRegion ComputeFeasibleRegion(const SolveRequest& request);

struct SolveResult {
  std::optional<ScalePlan> plan;
  // Minimum consecutive channel ratio of the returned plan.
  std::optional<Rational> min_channel_ratio;
  // Filled when no plan exists: the closest bottleneck-free phi' values
  // below and above the feasible region.
  std::optional<std::int64_t> nearest_below;
  std::optional<std::int64_t> nearest_above;
  bool approximate = false;

  bool feasible() const { return plan.has_value(); }
};

// Dynamic program over macro-layers. The state for layer i and factor f is
// the exact set of parameter sums reachable by layers i+1..N-1 given f, so
// the input-channel dependency between adjacent layers is carried in the
// state. Among equal phi' optima it prefers the largest minimum consecutive
// channel ratio, then the lexicographically smallest factor vector.
SolveResult SolveDp(const SolveRequest& request);

// Visits every affine assignment. Same objective, constraints and tie-break
// as SolveDp(). Throws CapExceededError above request.enumeration_cap.
SolveResult SolveBruteForce(const SolveRequest& request);

}  // namespace cnnscale

#endif  // CNNSCALE_SOLVER_H_
