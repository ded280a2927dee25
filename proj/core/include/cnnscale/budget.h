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

#ifndef CNNSCALE_BUDGET_H_
#define CNNSCALE_BUDGET_H_

#include <cstdint>

#include "cnnscale/model.h"
#include "cnnscale/rational.h"

namespace cnnscale {

// Cardinalities of the class sets: `alpha` classes in the baseline,
// `beta` of them of interest, and `lambda` the share of a per-class budget
// needed for each out-of-scope class folded into a miscellaneous class.
struct ClassScope {
  std::int64_t alpha = 1;
  std::int64_t beta = 1;
  Rational lambda = Rational(1, 4);

  bool operator==(const ClassScope&) const = default;
};

// Throws PreconditionError unless 1 <= beta <= alpha and 0 < lambda <= 1.
void CheckScope(const ClassScope& scope);

// The scope block a network document may carry.
struct ScopeSettings {
  ClassScope scope;
  bool scope_aware = false;

  bool operator==(const ScopeSettings&) const = default;
};

struct BudgetSpec {
  std::int64_t phi = 0;
  ClassScope scope;
  bool scope_aware = false;
  Rational window_tolerance = Rational(2, 1000);
};

struct BudgetResult {
  // Smallest integer parameter count not below phi * fraction.
  std::int64_t phi_prime_floor = 0;
  // Average parameters per baseline class.
  Rational gamma_ideal;
  // Share of phi the reduced network needs.
  Rational fraction;
};

Rational IdealGamma(std::int64_t phi, std::int64_t alpha);

// beta / alpha, or (beta + lambda * (alpha - beta)) / alpha when the
// reduced network must also reject out-of-scope inputs.
Rational BudgetFraction(const ClassScope& scope, bool scope_aware);

BudgetResult ComputeBudget(const BudgetSpec& spec);

// Replaces the alpha-way classifier by a beta-way one, or beta + 1 when a
// miscellaneous class is added. Throws PreconditionError if the network's
// classifier width is not scope.alpha.
Network RewriteClassifier(const Network& network, const ClassScope& scope,
                          bool scope_aware);

}  // namespace cnnscale

#endif  // CNNSCALE_BUDGET_H_
