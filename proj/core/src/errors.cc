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

#include "cnnscale/errors.h"

#include <string>
#include <utility>
#include <vector>

namespace cnnscale {
namespace {

std::string Summarize(const std::vector<Finding>& findings) {
  std::string text = "network failed validation";
  for (const Finding& f : findings) text += "\n  " + FormatFinding(f);
  return text;
}

}  // namespace

std::string FormatFinding(const Finding& finding) {
  return finding.location + ": [" + finding.rule + "] " + finding.message;
}

ParseError::ParseError(std::string location, const std::string& message)
    : std::runtime_error((location.empty() ? "(root)" : location) + ": " +
                         message),
      location_(location.empty() ? "(root)" : std::move(location)) {}

ValidationError::ValidationError(std::vector<Finding> findings)
    : std::runtime_error(Summarize(findings)), findings_(std::move(findings)) {}

DivisibilityError::DivisibilityError(std::string macro_layer,
                                     const std::string& message)
    : PreconditionError(macro_layer + ": " + message),
      macro_layer_(std::move(macro_layer)) {}

}  // namespace cnnscale
