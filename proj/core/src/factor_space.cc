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

#include "cnnscale/factor_space.h"

#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "checked.h"
#include "window.h"

namespace cnnscale {

using internal::CheckedAdd;
using internal::CheckedMul;

std::vector<std::int64_t> Divisors(std::int64_t n) {
  if (n < 1) {
    throw PreconditionError("divisors of " + std::to_string(n) +
                            " requested; need n >= 1");
  }
  std::vector<std::int64_t> low;
  std::vector<std::int64_t> high;
  for (std::int64_t d = 1; d <= n / d; ++d) {
    if (n % d != 0) continue;
    low.push_back(d);
    if (d != n / d) high.push_back(n / d);
  }
  low.insert(low.end(), high.rbegin(), high.rend());
  return low;
}

FactorSet ComputeFactorSet(const MacroLayer& layer) {
  std::int64_t common = 0;
  for (const Branch& branch : layer.branches) {
    for (const MicroLayer& micro : branch.micro_layers) {
      common = std::gcd(common, micro.depth);
    }
  }
  if (common < 1) {
    throw PreconditionError("macro-layer '" + layer.name +
                            "' has no positive depths");
  }
  return {layer.name, Divisors(common)};
}

std::vector<FactorSet> ComputeFactorSets(const Network& network) {
  RequireValid(network);
  std::vector<FactorSet> sets;
  sets.reserve(network.macro_layers.size());
  for (const MacroLayer& layer : network.macro_layers) {
    sets.push_back(ComputeFactorSet(layer));
  }
  return sets;
}

BigInt CountSolutionSpace(const Network& network, bool affine) {
  RequireValid(network);
  BigInt count = 1;
  for (const MacroLayer& layer : network.macro_layers) {
    if (affine) {
      count *= ComputeFactorSet(layer).factors.size();
      continue;
    }
    for (const Branch& branch : layer.branches) {
      for (const MicroLayer& micro : branch.micro_layers) {
        count *= Divisors(micro.depth).size();
      }
    }
  }
  return count;
}

LayerCostTable::LayerCostTable(const Network& network) {
  for (FactorSet& set : ComputeFactorSets(network)) {
    factors_.push_back(std::move(set.factors));
  }
  const int layers = layer_count();
  costs_.resize(layers);
  channel_sums_.reserve(layers);
  for (int i = 0; i < layers; ++i) {
    const MacroLayer& layer = network.macro_layers[i];
    channel_sums_.push_back(ChannelSum(layer));
    const int own = factor_count(i);
    // The first layer always sees the unscaled network input.
    const int prev = i == 0 ? 1 : factor_count(i - 1);
    const std::int64_t prev_out =
        i == 0 ? network.input_channels
               : OutputChannels(network.macro_layers[i - 1]);
    costs_[i].resize(static_cast<std::size_t>(prev) * own);
    for (int a = 0; a < prev; ++a) {
      const std::int64_t in = i == 0 ? prev_out : prev_out / factors_[i - 1][a];
      for (int b = 0; b < own; ++b) {
        const std::int64_t f = factors_[i][b];
        std::int64_t total = 0;
        for (const Branch& branch : layer.branches) {
          std::int64_t chain_in = in;
          for (const MicroLayer& micro : branch.micro_layers) {
            const std::int64_t q = micro.depth / f;
            total = CheckedAdd(
                total, CheckedMul(CheckedMul(chain_in, micro.kernel_width),
                                  CheckedMul(micro.kernel_height, q)));
            chain_in = q;
          }
        }
        costs_[i][static_cast<std::size_t>(a) * own + b] = total;
      }
    }
  }
}

std::int64_t LayerCostTable::Cost(int layer, int prev_index, int index) const {
  const int prev = layer == 0 ? 0 : prev_index;
  return costs_[layer][static_cast<std::size_t>(prev) * factor_count(layer) +
                       index];
}

std::int64_t LayerCostTable::PlanCost(std::span<const int> indices) const {
  std::int64_t total = 0;
  for (int i = 0; i < layer_count(); ++i) {
    total += Cost(i, i == 0 ? 0 : indices[i - 1], indices[i]);
  }
  return total;
}

namespace {

struct Enumerator {
  const LayerCostTable& table;
  std::int64_t lo;
  std::int64_t hi;
  const PlanSink* sink;
  std::vector<int> indices;
  std::vector<std::int64_t> factors;
  std::uint64_t matching = 0;
  std::uint64_t visited = 0;

  void Walk(int layer, std::int64_t partial) {
    const int n = table.layer_count();
    if (layer == n) {
      ++visited;
      if (lo <= partial && partial <= hi) {
        ++matching;
        if (sink != nullptr && *sink) (*sink)(factors, partial);
      }
      return;
    }
    const int prev = layer == 0 ? 0 : indices[layer - 1];
    for (int b = 0; b < table.factor_count(layer); ++b) {
      indices[layer] = b;
      factors[layer] = table.factors(layer)[b];
      Walk(layer + 1, partial + table.Cost(layer, prev, b));
    }
  }

  // Only first-layer factors with index % stride == offset.
  void WalkPartition(int offset, int stride) {
    for (int b = offset; b < table.factor_count(0); b += stride) {
      indices[0] = b;
      factors[0] = table.factors(0)[b];
      Walk(1, table.Cost(0, 0, b));
    }
  }
};

}  // namespace

WindowCount EnumerateWindow(const Network& network, const WindowQuery& query,
                            const PlanSink& sink) {
  if (query.target_fraction <= 0 || query.target_fraction > 1) {
    throw PreconditionError("target fraction must lie in (0, 1], got " +
                            FormatExact(query.target_fraction));
  }
  if (query.tolerance < 0) {
    throw PreconditionError("tolerance must be >= 0");
  }
  const std::int64_t phi = CountParameters(network);
  const auto [lo, hi] = internal::OpenInterval(query.target_fraction * phi,
                                               query.tolerance * phi);
  const BigInt space = CountSolutionSpace(network, /*affine=*/true);
  if (space > query.enumeration_cap) {
    if (!sink && lo <= 0 && hi >= phi) {
      WindowCount result;
      result.matching = space.convert_to<std::uint64_t>();
      result.closed_form = true;
      return result;
    }
    throw CapExceededError(
        "affine solution space has " + space.str() +
        " plans, above the enumeration cap of " +
        std::to_string(query.enumeration_cap) +
        "; use the dynamic-programming solver (synthesize) instead");
  }

  const LayerCostTable table(network);
  const int n = table.layer_count();
  auto make = [&](const PlanSink* s) {
    return Enumerator{table, lo, hi, s, std::vector<int>(n),
                      std::vector<std::int64_t>(n)};
  };

  const int threads =
      sink ? 1 : std::max(1, std::min(query.threads, table.factor_count(0)));
  WindowCount result;
  if (threads == 1) {
    Enumerator e = make(&sink);
    e.WalkPartition(0, 1);
    result.matching = e.matching;
    result.visited = e.visited;
    return result;
  }
  std::vector<Enumerator> parts;
  parts.reserve(threads);
  for (int t = 0; t < threads; ++t) parts.push_back(make(nullptr));
  std::vector<std::thread> workers;
  for (int t = 0; t < threads; ++t) {
    workers.emplace_back([&parts, t, threads] {
      parts[t].WalkPartition(t, threads);
    });
  }
  for (std::thread& w : workers) w.join();
  for (const Enumerator& e : parts) {
    result.matching += e.matching;
    result.visited += e.visited;
  }
  return result;
}

}  // namespace cnnscale
