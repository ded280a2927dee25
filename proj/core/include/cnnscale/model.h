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

#ifndef CNNSCALE_MODEL_H_
#define CNNSCALE_MODEL_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cnnscale/errors.h"

namespace cnnscale {

// One filter-bank: `depth` kernels of kernel_width x kernel_height over the
// input channels, producing an out_rows x out_cols feature map per kernel.
struct MicroLayer {
  std::int64_t kernel_width = 1;
  std::int64_t kernel_height = 1;
  std::int64_t depth = 1;
  std::int64_t out_rows = 1;
  std::int64_t out_cols = 1;

  bool operator==(const MicroLayer&) const = default;
};

// A sequential chain of micro-layers; each one consumes the depth of the
// previous one, the first consumes the macro-layer input.
struct Branch {
  std::vector<MicroLayer> micro_layers;

  bool operator==(const Branch&) const = default;
};

// Where an annotation's channel count is taken from.
enum class AnnotationSite { kOutput, kInput };

// A non-convolutional layer (pooling, normalization, ...) carried along with
// a macro-layer. It holds no parameters; `channels`, when present, tracks the
// macro-layer's input or output channel count and is rewritten on scaling.
struct Annotation {
  std::string kind;
  AnnotationSite site = AnnotationSite::kOutput;
  std::optional<std::int64_t> channels;
  nlohmann::ordered_json attributes = nlohmann::ordered_json::object();

  bool operator==(const Annotation&) const = default;
};

// A sequential stage. Branch outputs are concatenated.
struct MacroLayer {
  std::string name;
  // Declared input channel count; checked against the wiring when present.
  std::optional<std::int64_t> input_channels;
  std::vector<Branch> branches;
  std::vector<Annotation> annotations;

  bool operator==(const MacroLayer&) const = default;
};

struct Network {
  std::string name;
  std::int64_t input_channels = 3;
  std::vector<MacroLayer> macro_layers;
  std::int64_t classifier_classes = 1;

  bool operator==(const Network&) const = default;
};

// in_channels * kernel_width * kernel_height * depth. Biases are not counted.
std::int64_t CountParameters(const MicroLayer& layer, std::int64_t in_channels);

// Sum of the last micro-layer depth over all branches.
std::int64_t OutputChannels(const MacroLayer& layer);

// Sum of every micro-layer depth in the macro-layer, reduce layers included.
// This is the quantity compared between consecutive stages when looking for
// bottlenecks.
std::int64_t ChannelSum(const MacroLayer& layer);

// Total number of micro-layers across branches.
std::int64_t MicroLayerCount(const MacroLayer& layer);

// Channel count entering each macro-layer, propagated from
// network.input_channels. Does not validate.
std::vector<std::int64_t> PropagatedInputChannels(const Network& network);

// Parameters per macro-layer with propagated input channels. Throws
// ValidationError on an invalid network.
std::vector<std::int64_t> CountLayerParameters(const Network& network);

// Convolutional parameters of the whole network; the classifier is excluded.
// Throws ValidationError on an invalid network.
std::int64_t CountParameters(const Network& network);

// 2 * params * out_rows * out_cols summed over micro-layers.
std::int64_t CountFlops(const Network& network);

// Empty iff every structural invariant and the channel wiring hold.
std::vector<Finding> Validate(const Network& network);

// Throws ValidationError carrying the findings when Validate() is non-empty.
void RequireValid(const Network& network);

}  // namespace cnnscale

#endif  // CNNSCALE_MODEL_H_
