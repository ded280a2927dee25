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

#include "cnnscale/model.h"

#include <set>
#include <string>
#include <vector>

#include "checked.h"

namespace cnnscale {

using internal::CheckedAdd;
using internal::CheckedMul;

std::int64_t CountParameters(const MicroLayer& layer,
                             std::int64_t in_channels) {
  return CheckedMul(
      CheckedMul(CheckedMul(in_channels, layer.kernel_width),
                 layer.kernel_height),
      layer.depth);
}

std::int64_t OutputChannels(const MacroLayer& layer) {
  std::int64_t total = 0;
  for (const Branch& branch : layer.branches) {
    if (!branch.micro_layers.empty()) {
      total += branch.micro_layers.back().depth;
    }
  }
  return total;
}

std::int64_t ChannelSum(const MacroLayer& layer) {
  std::int64_t total = 0;
  for (const Branch& branch : layer.branches) {
    for (const MicroLayer& micro : branch.micro_layers) total += micro.depth;
  }
  return total;
}

std::int64_t MicroLayerCount(const MacroLayer& layer) {
  std::int64_t total = 0;
  for (const Branch& branch : layer.branches) {
    total += static_cast<std::int64_t>(branch.micro_layers.size());
  }
  return total;
}

std::vector<std::int64_t> PropagatedInputChannels(const Network& network) {
  std::vector<std::int64_t> inputs;
  inputs.reserve(network.macro_layers.size());
  std::int64_t channels = network.input_channels;
  for (const MacroLayer& layer : network.macro_layers) {
    inputs.push_back(channels);
    channels = OutputChannels(layer);
  }
  return inputs;
}

std::vector<Finding> Validate(const Network& network) {
  std::vector<Finding> findings;
  auto add = [&](const std::string& where, const char* rule,
                 std::string message) {
    findings.push_back({where, rule, std::move(message)});
  };

  if (network.name.empty()) {
    add("network", "name", "network name is empty");
  }
  if (network.input_channels < 1) {
    add("network", "positive-input-channels",
        "input_channels must be >= 1, got " +
            std::to_string(network.input_channels));
  }
  if (network.classifier_classes < 1) {
    add("network", "positive-classifier",
        "classifier_classes must be >= 1, got " +
            std::to_string(network.classifier_classes));
  }
  if (network.macro_layers.empty()) {
    add("network", "non-empty-network", "network has no macro-layers");
  }

  std::set<std::string> names;
  // Wiring can only be checked when the producer of the channels is sound.
  bool upstream_sound = network.input_channels >= 1;
  std::int64_t channels = network.input_channels;
  for (std::size_t i = 0; i < network.macro_layers.size(); ++i) {
    const MacroLayer& layer = network.macro_layers[i];
    const std::string where =
        layer.name.empty() ? "macro_layers[" + std::to_string(i) + "]"
                           : layer.name;
    const std::size_t before = findings.size();

    if (layer.name.empty()) {
      add(where, "name", "macro-layer name is empty");
    } else if (!names.insert(layer.name).second) {
      add(where, "unique-name", "duplicate macro-layer name");
    }
    if (layer.branches.empty()) {
      add(where, "non-empty-macro-layer", "macro-layer has no branches");
    }
    for (std::size_t b = 0; b < layer.branches.size(); ++b) {
      const Branch& branch = layer.branches[b];
      if (branch.micro_layers.empty()) {
        add(where, "non-empty-branch",
            "branch " + std::to_string(b) + " has no micro-layers");
      }
      for (std::size_t m = 0; m < branch.micro_layers.size(); ++m) {
        const MicroLayer& micro = branch.micro_layers[m];
        const std::string at =
            "branch " + std::to_string(b) + " micro-layer " +
            std::to_string(m) + ": ";
        auto positive = [&](std::int64_t v, const char* field) {
          if (v < 1) {
            add(where, "positive-dimension",
                at + field + " must be >= 1, got " + std::to_string(v));
          }
        };
        positive(micro.kernel_width, "kernel_width");
        positive(micro.kernel_height, "kernel_height");
        positive(micro.depth, "depth");
        positive(micro.out_rows, "out_rows");
        positive(micro.out_cols, "out_cols");
      }
    }
    const bool layer_sound = findings.size() == before;

    if (upstream_sound && layer.input_channels &&
        *layer.input_channels != channels) {
      add(where, "channel-wiring",
          "declares " + std::to_string(*layer.input_channels) +
              " input channels but its predecessor produces " +
              std::to_string(channels));
    }
    if (layer_sound) {
      const std::int64_t out = OutputChannels(layer);
      for (const Annotation& note : layer.annotations) {
        if (!note.channels) continue;
        if (note.site == AnnotationSite::kOutput && *note.channels != out) {
          add(where, "annotation-channels",
              note.kind + " annotation carries " +
                  std::to_string(*note.channels) +
                  " channels but the layer outputs " + std::to_string(out));
        } else if (note.site == AnnotationSite::kInput && upstream_sound &&
                   *note.channels != channels) {
          add(where, "annotation-channels",
              note.kind + " annotation carries " +
                  std::to_string(*note.channels) +
                  " channels but the layer consumes " +
                  std::to_string(channels));
        }
      }
    }
    upstream_sound = layer_sound;
    channels = OutputChannels(layer);
  }
  return findings;
}

void RequireValid(const Network& network) {
  std::vector<Finding> findings = Validate(network);
  if (!findings.empty()) throw ValidationError(std::move(findings));
}

std::vector<std::int64_t> CountLayerParameters(const Network& network) {
  RequireValid(network);
  std::vector<std::int64_t> counts;
  counts.reserve(network.macro_layers.size());
  std::int64_t channels = network.input_channels;
  for (const MacroLayer& layer : network.macro_layers) {
    std::int64_t total = 0;
    for (const Branch& branch : layer.branches) {
      std::int64_t in = channels;
      for (const MicroLayer& micro : branch.micro_layers) {
        total = CheckedAdd(total, CountParameters(micro, in));
        in = micro.depth;
      }
    }
    counts.push_back(total);
    channels = OutputChannels(layer);
  }
  return counts;
}

std::int64_t CountParameters(const Network& network) {
  std::int64_t total = 0;
  for (std::int64_t count : CountLayerParameters(network)) {
    total = CheckedAdd(total, count);
  }
  return total;
}

std::int64_t CountFlops(const Network& network) {
  RequireValid(network);
  std::int64_t total = 0;
  std::int64_t channels = network.input_channels;
  for (const MacroLayer& layer : network.macro_layers) {
    for (const Branch& branch : layer.branches) {
      std::int64_t in = channels;
      for (const MicroLayer& micro : branch.micro_layers) {
        const std::int64_t macs = CheckedMul(
            CheckedMul(CountParameters(micro, in), micro.out_rows),
            micro.out_cols);
        total = CheckedAdd(total, CheckedMul(2, macs));
        in = micro.depth;
      }
    }
    channels = OutputChannels(layer);
  }
  return total;
}

}  // namespace cnnscale
