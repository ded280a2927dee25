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

#include "cnnscale/budget.h"

#include <string>

namespace cnnscale {

void CheckScope(const ClassScope& scope) {
  if (scope.alpha < 1) {
    throw PreconditionError("alpha must be >= 1, got " +
                            std::to_string(scope.alpha));
  }
  if (scope.beta < 1 || scope.beta > scope.alpha) {
    throw PreconditionError("beta must lie in [1, alpha=" +
                            std::to_string(scope.alpha) + "], got " +
                            std::to_string(scope.beta));
  }
  if (scope.lambda <= 0 || scope.lambda > 1) {
    throw PreconditionError("lambda must lie in (0, 1], got " +
                            FormatExact(scope.lambda));
  }
}

Rational IdealGamma(std::int64_t phi, std::int64_t alpha) {
  if (alpha < 1) throw PreconditionError("alpha must be >= 1");
  return Rational(phi, alpha);
}

Rational BudgetFraction(const ClassScope& scope, bool scope_aware) {
  CheckScope(scope);
  Rational share(scope.beta);
  if (scope_aware) share += scope.lambda * (scope.alpha - scope.beta);
  return share / scope.alpha;
}

BudgetResult ComputeBudget(const BudgetSpec& spec) {
  if (spec.phi < 0) throw PreconditionError("phi must be >= 0");
  if (spec.window_tolerance < 0) {
    throw PreconditionError("window tolerance must be >= 0");
  }
  BudgetResult result;
  result.fraction = BudgetFraction(spec.scope, spec.scope_aware);
  result.gamma_ideal = IdealGamma(spec.phi, spec.scope.alpha);
  result.phi_prime_floor = ToInt64(Ceil(result.fraction * spec.phi));
  return result;
}

Network RewriteClassifier(const Network& network, const ClassScope& scope,
                          bool scope_aware) {
  CheckScope(scope);
  if (network.classifier_classes != scope.alpha) {
    throw PreconditionError(
        "classifier has " + std::to_string(network.classifier_classes) +
        " classes but the scope declares alpha=" +
        std::to_string(scope.alpha));
  }
  Network rewritten = network;
  rewritten.classifier_classes = scope.beta + (scope_aware ? 1 : 0);
  return rewritten;
}

}  // namespace cnnscale
