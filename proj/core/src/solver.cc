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

#include "cnnscale/solver.h"

#include <algorithm>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "cnnscale/factor_space.h"
#include "window.h"

namespace cnnscale {
namespace {

constexpr std::int64_t kNone = std::numeric_limits<std::int64_t>::max();

// Sorted, duplicate-free parameter sums reachable by a suffix of layers,
// plus the smallest reachable sum that was cut off above the limit.
struct SuffixSums {
  std::vector<std::int64_t> sums;
  std::int64_t overflow = kNone;
};

struct Instance {
  explicit Instance(const Network& network) : table(network) {}

  LayerCostTable table;
  // allowed[i][a * factor_count(i) + b]: layer i-1 at index a may be
  // followed by layer i at index b. allowed[0] is unused.
  std::vector<std::vector<char>> allowed;

  int n() const { return table.layer_count(); }
  bool Allowed(int layer, int a, int b) const {
    return allowed[layer][static_cast<std::size_t>(a) *
                              table.factor_count(layer) +
                          b] != 0;
  }
  Rational Ratio(int layer, int a, int b) const {
    return Rational(table.ScaledChannelSum(layer, b),
                    table.ScaledChannelSum(layer - 1, a));
  }
};

void BuildAllowed(Instance& inst, const BottleneckPolicy& policy) {
  const LayerCostTable& t = inst.table;
  inst.allowed.assign(inst.n(), {});
  for (int i = 1; i < inst.n(); ++i) {
    const int prev = t.factor_count(i - 1);
    const int own = t.factor_count(i);
    inst.allowed[i].assign(static_cast<std::size_t>(prev) * own, 0);
    for (int a = 0; a < prev; ++a) {
      for (int b = 0; b < own; ++b) {
        inst.allowed[i][static_cast<std::size_t>(a) * own + b] =
            !IsBottleneck(policy, t.BaseChannelSum(i - 1), t.factors(i - 1)[a],
                          t.BaseChannelSum(i), t.factors(i)[b]);
      }
    }
  }
}

// Keeps the largest sum of every bucket of `granularity` parameters.
void Thin(std::vector<std::int64_t>& sums, std::int64_t granularity) {
  if (granularity <= 0 || sums.empty()) return;
  std::size_t out = 0;
  for (std::size_t i = 0; i < sums.size(); ++i) {
    const bool last_in_bucket =
        i + 1 == sums.size() ||
        sums[i + 1] / granularity != sums[i] / granularity;
    if (last_in_bucket) sums[out++] = sums[i];
  }
  sums.resize(out);
}

class SuffixProgram {
 public:
  // `min_ratio`, when set, additionally forbids transitions whose channel
  // ratio falls below it.
  SuffixProgram(const Instance& inst, std::int64_t limit,
                std::int64_t granularity, const Rational* min_ratio,
                int threads)
      : inst_(inst),
        limit_(limit),
        granularity_(granularity),
        min_ratio_(min_ratio),
        threads_(std::max(1, threads)) {}

  const std::vector<std::vector<SuffixSums>>& Run() {
    const int n = inst_.n();
    states_.assign(n, {});
    states_[n - 1].resize(inst_.table.factor_count(n - 1));
    for (SuffixSums& s : states_[n - 1]) s.sums = {0};
    for (int i = n - 2; i >= 0; --i) {
      const int count = inst_.table.factor_count(i);
      states_[i].resize(count);
      const int workers = std::min(threads_, count);
      if (workers == 1) {
        for (int a = 0; a < count; ++a) Expand(i, a);
        continue;
      }
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back([this, i, w, workers, count] {
          for (int a = w; a < count; a += workers) Expand(i, a);
        });
      }
      for (std::thread& t : pool) t.join();
    }
    return states_;
  }

  bool Transition(int layer, int a, int b) const {
    if (!inst_.Allowed(layer, a, b)) return false;
    return min_ratio_ == nullptr || inst_.Ratio(layer, a, b) >= *min_ratio_;
  }

 private:
  // states_[i][a] from states_[i + 1].
  void Expand(int i, int a) {
    const LayerCostTable& t = inst_.table;
    SuffixSums& out = states_[i][a];
    std::vector<std::int64_t> merged;
    std::vector<std::size_t> run_starts;
    for (int b = 0; b < t.factor_count(i + 1); ++b) {
      if (!Transition(i + 1, a, b)) continue;
      const std::int64_t cost = t.Cost(i + 1, a, b);
      const SuffixSums& next = states_[i + 1][b];
      if (next.overflow != kNone) {
        out.overflow = std::min(out.overflow, next.overflow + cost);
      }
      run_starts.push_back(merged.size());
      for (std::int64_t s : next.sums) {
        const std::int64_t v = s + cost;
        if (v > limit_) {
          out.overflow = std::min(out.overflow, v);
          break;
        }
        merged.push_back(v);
      }
    }
    run_starts.push_back(merged.size());
    // Pairwise merge of the sorted runs.
    while (run_starts.size() > 2) {
      std::vector<std::size_t> next_starts;
      for (std::size_t r = 0; r + 1 < run_starts.size(); r += 2) {
        next_starts.push_back(run_starts[r]);
        if (r + 2 < run_starts.size()) {
          std::inplace_merge(merged.begin() + run_starts[r],
                             merged.begin() + run_starts[r + 1],
                             merged.begin() + run_starts[r + 2]);
        }
      }
      next_starts.push_back(merged.size());
      run_starts = std::move(next_starts);
    }
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    Thin(merged, granularity_);
    merged.shrink_to_fit();
    out.sums = std::move(merged);
  }

  const Instance& inst_;
  std::int64_t limit_;
  std::int64_t granularity_;
  const Rational* min_ratio_;
  int threads_;
  std::vector<std::vector<SuffixSums>> states_;
};

bool Contains(const std::vector<std::int64_t>& sums, std::int64_t v) {
  return v >= 0 && std::binary_search(sums.begin(), sums.end(), v);
}

bool Reaches(const Instance& inst,
             const std::vector<std::vector<SuffixSums>>& states,
             std::int64_t total) {
  for (int b = 0; b < inst.table.factor_count(0); ++b) {
    if (Contains(states[0][b].sums, total - inst.table.Cost(0, 0, b))) {
      return true;
    }
  }
  return false;
}

// Lexicographically smallest index vector summing to `total`.
std::vector<int> Reconstruct(const Instance& inst, const SuffixProgram& program,
                             const std::vector<std::vector<SuffixSums>>& states,
                             std::int64_t total) {
  const LayerCostTable& t = inst.table;
  std::vector<int> indices;
  std::int64_t remaining = total;
  for (int i = 0; i < inst.n(); ++i) {
    int chosen = -1;
    for (int b = 0; b < t.factor_count(i) && chosen < 0; ++b) {
      const int prev = i == 0 ? 0 : indices.back();
      if (i > 0 && !program.Transition(i, prev, b)) continue;
      if (Contains(states[i][b].sums, remaining - t.Cost(i, prev, b))) {
        chosen = b;
      }
    }
    if (chosen < 0) {
      throw std::logic_error("dynamic program lost its optimal path");
    }
    remaining -= t.Cost(i, i == 0 ? 0 : indices.back(), chosen);
    indices.push_back(chosen);
  }
  return indices;
}

std::vector<std::int64_t> ToFactors(const LayerCostTable& t,
                                    const std::vector<int>& indices) {
  std::vector<std::int64_t> factors;
  for (int i = 0; i < t.layer_count(); ++i) {
    factors.push_back(t.factors(i)[indices[i]]);
  }
  return factors;
}

std::vector<std::int64_t> ScaledSums(const Network& network,
                                     const ScalePlan& plan) {
  std::vector<std::int64_t> sums;
  for (std::size_t i = 0; i < network.macro_layers.size(); ++i) {
    sums.push_back(ChannelSum(network.macro_layers[i]) / plan.factors[i]);
  }
  return sums;
}

// Candidate order shared by both solvers: larger phi', then larger minimum
// channel ratio, then lexicographically smaller factors.
bool Better(std::int64_t phi, const std::optional<Rational>& ratio,
            const std::vector<std::int64_t>& factors, std::int64_t best_phi,
            const std::optional<Rational>& best_ratio,
            const std::vector<std::int64_t>& best_factors) {
  if (phi != best_phi) return phi > best_phi;
  if (ratio && best_ratio && *ratio != *best_ratio) return *ratio > *best_ratio;
  return factors < best_factors;
}

}  // namespace

std::string_view ObjectiveName(ObjectiveMode mode) {
  return mode == ObjectiveMode::kWindow ? "window" : "cap-maximize";
}

std::optional<ObjectiveMode> ParseObjective(std::string_view name) {
  if (name == "cap-maximize") return ObjectiveMode::kCapMaximize;
  if (name == "window") return ObjectiveMode::kWindow;
  return std::nullopt;
}

FeasibleRegion ComputeFeasibleRegion(const SolveRequest& request) {
  CheckPolicy(request.policy);
  const std::int64_t phi = CountParameters(request.network);
  if (request.budget.phi_prime_floor > phi) {
    throw PreconditionError("budget of " +
                            std::to_string(request.budget.phi_prime_floor) +
                            " parameters exceeds the baseline's " +
                            std::to_string(phi));
  }
  if (request.quantization < 0) {
    throw PreconditionError("quantization must be >= 0");
  }
  if (request.objective == ObjectiveMode::kCapMaximize) {
    return {0, request.budget.phi_prime_floor};
  }
  if (request.window_tolerance < 0) {
    throw PreconditionError("window tolerance must be >= 0");
  }
  const auto [lo, hi] = internal::OpenInterval(
      request.budget.fraction * phi, request.window_tolerance * phi);
  return {std::max<std::int64_t>(lo, 0), hi};
}

SolveResult SolveDp(const SolveRequest& request) {
  const FeasibleRegion region = ComputeFeasibleRegion(request);
  Instance inst(request.network);
  BuildAllowed(inst, request.policy);
  const LayerCostTable& t = inst.table;
  const std::int64_t granularity = request.quantization;

  SolveResult result;
  result.approximate = granularity > 0;
  // An empty region still needs every sum below it for the diagnostics.
  SuffixProgram program(inst, std::max(region.upper, region.lower - 1),
                        granularity, nullptr, request.threads);
  const auto& states = program.Run();

  std::int64_t best = -1;
  std::int64_t below = -1;
  std::int64_t above = kNone;
  for (int b = 0; b < t.factor_count(0); ++b) {
    const std::int64_t head = t.Cost(0, 0, b);
    const SuffixSums& s = states[0][b];
    if (s.overflow != kNone) above = std::min(above, s.overflow + head);
    for (std::int64_t v : s.sums) {
      const std::int64_t total = v + head;
      if (region.Contains(total)) {
        best = std::max(best, total);
      } else if (total < region.lower) {
        below = std::max(below, total);
      } else {
        above = std::min(above, total);
      }
    }
  }
  if (best < 0) {
    if (below >= 0) result.nearest_below = below;
    if (above != kNone) result.nearest_above = above;
    return result;
  }

  std::vector<int> indices;
  if (granularity > 0 || inst.n() < 2) {
    indices = Reconstruct(inst, program, states, best);
  } else {
    // Largest minimum channel ratio still reaching `best`, by bisection
    // over the ratios that allowed transitions can produce.
    std::vector<Rational> ratios;
    for (int i = 1; i < inst.n(); ++i) {
      for (int a = 0; a < t.factor_count(i - 1); ++a) {
        for (int b = 0; b < t.factor_count(i); ++b) {
          if (inst.Allowed(i, a, b)) ratios.push_back(inst.Ratio(i, a, b));
        }
      }
    }
    std::sort(ratios.begin(), ratios.end());
    ratios.erase(std::unique(ratios.begin(), ratios.end()), ratios.end());
    std::size_t lo = 0;  // reaches `best` by construction
    std::size_t hi = ratios.size() - 1;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo + 1) / 2;
      SuffixProgram probe(inst, best, 0, &ratios[mid], request.threads);
      if (Reaches(inst, probe.Run(), best)) {
        lo = mid;
      } else {
        hi = mid - 1;
      }
    }
    SuffixProgram final_program(inst, best, 0, &ratios[lo], request.threads);
    const auto& final_states = final_program.Run();
    indices = Reconstruct(inst, final_program, final_states, best);
  }

  ScalePlan plan = MakePlan(request.network, ToFactors(t, indices));
  if (plan.phi_prime != best) {
    throw std::logic_error("dynamic program cost table disagrees with the "
                           "network parameter count");
  }
  result.min_channel_ratio =
      MinChannelRatio(ScaledSums(request.network, plan));
  result.plan = std::move(plan);
  return result;
}

namespace {

struct BruteForcePart {
  std::int64_t best_phi = -1;
  std::optional<Rational> best_ratio;
  std::vector<std::int64_t> best_factors;
  std::int64_t below = -1;
  std::int64_t above = kNone;
};

void SearchFromFirst(const Network& network,
                     const std::vector<FactorSet>& sets,
                     const std::vector<std::int64_t>& base_sums,
                     const BottleneckPolicy& policy,
                     const FeasibleRegion& region, int first,
                     BruteForcePart& part) {
  const std::size_t n = sets.size();
  std::vector<std::size_t> odometer(n, 0);
  odometer[0] = static_cast<std::size_t>(first);
  std::vector<std::int64_t> factors(n);
  while (true) {
    for (std::size_t i = 0; i < n; ++i) factors[i] = sets[i].factors[odometer[i]];

    const Network scaled = ApplyFactors(network, factors);
    std::vector<std::int64_t> scaled_sums;
    for (const MacroLayer& layer : scaled.macro_layers) {
      scaled_sums.push_back(ChannelSum(layer));
    }
    if (CheckBottleneck(base_sums, scaled_sums, policy).empty()) {
      const std::int64_t phi = CountParameters(scaled);
      if (region.Contains(phi)) {
        const std::optional<Rational> ratio = MinChannelRatio(scaled_sums);
        if (part.best_phi < 0 ||
            Better(phi, ratio, factors, part.best_phi, part.best_ratio,
                   part.best_factors)) {
          part.best_phi = phi;
          part.best_ratio = ratio;
          part.best_factors = factors;
        }
      } else if (phi < region.lower) {
        part.below = std::max(part.below, phi);
      } else {
        part.above = std::min(part.above, phi);
      }
    }

    // Advance layers 1..n-1; layer 0 is fixed for this partition.
    bool wrapped = true;
    for (std::size_t i = n; i > 1;) {
      --i;
      if (++odometer[i] < sets[i].factors.size()) {
        wrapped = false;
        break;
      }
      odometer[i] = 0;
    }
    if (wrapped) return;
  }
}

}  // namespace

SolveResult SolveBruteForce(const SolveRequest& request) {
  const FeasibleRegion region = ComputeFeasibleRegion(request);
  const BigInt space = CountSolutionSpace(request.network, /*affine=*/true);
  if (space > request.enumeration_cap) {
    throw CapExceededError("brute force over " + space.str() +
                           " plans exceeds the enumeration cap of " +
                           std::to_string(request.enumeration_cap));
  }
  const std::vector<FactorSet> sets = ComputeFactorSets(request.network);
  std::vector<std::int64_t> base_sums;
  for (const MacroLayer& layer : request.network.macro_layers) {
    base_sums.push_back(ChannelSum(layer));
  }

  const int firsts = static_cast<int>(sets[0].factors.size());
  const int workers = std::max(1, std::min(request.threads, firsts));
  std::vector<BruteForcePart> parts(firsts);
  auto search = [&](int w) {
    for (int first = w; first < firsts; first += workers) {
      SearchFromFirst(request.network, sets, base_sums, request.policy,
                      region, first, parts[first]);
    }
  };
  if (workers == 1) {
    search(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(search, w);
    for (std::thread& t : pool) t.join();
  }

  BruteForcePart merged;
  for (const BruteForcePart& part : parts) {
    merged.below = std::max(merged.below, part.below);
    merged.above = std::min(merged.above, part.above);
    if (part.best_phi < 0) continue;
    if (merged.best_phi < 0 ||
        Better(part.best_phi, part.best_ratio, part.best_factors,
               merged.best_phi, merged.best_ratio, merged.best_factors)) {
      merged.best_phi = part.best_phi;
      merged.best_ratio = part.best_ratio;
      merged.best_factors = part.best_factors;
    }
  }

  SolveResult result;
  if (merged.best_phi < 0) {
    if (merged.below >= 0) result.nearest_below = merged.below;
    if (merged.above != kNone) result.nearest_above = merged.above;
    return result;
  }
  result.plan = MakePlan(request.network, merged.best_factors);
  result.min_channel_ratio = merged.best_ratio;
  return result;
}

}  // namespace cnnscale
