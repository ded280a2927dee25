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

#ifndef CNNSCALE_DOCUMENT_H_
#define CNNSCALE_DOCUMENT_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "cnnscale/budget.h"
#include "cnnscale/model.h"

namespace cnnscale {

// A network document: the network itself plus an optional scope block.
//
//   {
//     "name": "alexnet",
//     "input_channels": 3,
//     "classifier_classes": 1000,
//     "scope": {"alpha": 1000, "beta": 5, "lambda": 0.25,
//               "scope_aware": true},                        // optional
//     "macro_layers": [
//       {"name": "conv1",
//        "input_channels": 3,                                // optional
//        "branches": [[{"kernel_width": 11, "kernel_height": 11,
//                       "depth": 96, "out_rows": 55, "out_cols": 55}]],
//        "annotations": [{"kind": "maxpool", "site": "output",
//                         "channels": 96,
//                         "attributes": {"size": 3}}]}       // optional
//     ]
//   }
//
// Unknown fields are rejected. Integer fields must be JSON integers; range
// checks are left to Validate() so that a document with a zero depth still
// loads and reports a finding.
struct NetworkDocument {
  Network network;
  std::optional<ScopeSettings> scope;

  bool operator==(const NetworkDocument&) const = default;
};

nlohmann::ordered_json ToJson(const NetworkDocument& document);
nlohmann::ordered_json ToJson(const Network& network);

// Throws ParseError with a JSON pointer to the offending field.
NetworkDocument NetworkDocumentFromJson(const nlohmann::ordered_json& json);

// Two-space indented JSON with a trailing newline.
std::string Serialize(const NetworkDocument& document);
std::string Serialize(const Network& network);

// Throws ParseError on syntax errors (with byte offset) or schema errors.
NetworkDocument Deserialize(std::string_view text);

NetworkDocument ReadNetworkDocument(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, std::string_view text);
std::string ReadTextFile(const std::filesystem::path& path);

}  // namespace cnnscale

#endif  // CNNSCALE_DOCUMENT_H_
