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

#ifndef CNNSCALE_ERRORS_H_
#define CNNSCALE_ERRORS_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace cnnscale {

// A structural problem found by Validate(). `location` is a macro-layer
// name, or "network" for top-level fields.
struct Finding {
  std::string location;
  std::string rule;
  std::string message;

  bool operator==(const Finding&) const = default;
};

std::string FormatFinding(const Finding& finding);

// Malformed network or report document. `location` is a JSON pointer
// ("/macro_layers/1/branches/0/0/depth") or a byte offset for syntax errors.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string location, const std::string& message);
  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Finding> findings);
  const std::vector<Finding>& findings() const { return findings_; }

 private:
  std::vector<Finding> findings_;
};

// A caller-supplied argument violates an operation's precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A scaling factor does not divide every depth of its macro-layer.
class DivisibilityError : public PreconditionError {
 public:
  DivisibilityError(std::string macro_layer, const std::string& message);
  const std::string& macro_layer() const { return macro_layer_; }

 private:
  std::string macro_layer_;
};

// Exhaustive enumeration was asked to visit more plans than its cap allows.
class CapExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cnnscale

#endif  // CNNSCALE_ERRORS_H_
