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

#include <string>

#include "benchmark/benchmark.h"
#include "cnnscale/document.h"
#include "cnnscale/factor_space.h"
#include "cnnscale/solver.h"

namespace cnnscale {
namespace {

Network Load(const std::string& name) {
  return ReadNetworkDocument(std::string(CNNSCALE_FIXTURE_DIR) + "/" + name)
      .network;
}

SolveRequest Request(const Network& net, const Rational& fraction,
                     int threads) {
  SolveRequest r;
  r.network = net;
  r.budget.fraction = fraction;
  r.budget.phi_prime_floor = ToInt64(Ceil(fraction * CountParameters(net)));
  r.threads = threads;
  return r;
}

void BM_DpAlexNet(benchmark::State& state) {
  const SolveRequest r = Request(Load("alexnet.json"), Rational(8, 100), 1);
  for (auto _ : state) benchmark::DoNotOptimize(SolveDp(r));
}
BENCHMARK(BM_DpAlexNet)->Unit(benchmark::kMillisecond);

void BM_BruteForceAlexNet(benchmark::State& state) {
  const SolveRequest r = Request(Load("alexnet.json"), Rational(8, 100), 1);
  for (auto _ : state) benchmark::DoNotOptimize(SolveBruteForce(r));
}
BENCHMARK(BM_BruteForceAlexNet)->Unit(benchmark::kMillisecond);

void BM_DpGoogLeNet(benchmark::State& state) {
  const SolveRequest r =
      Request(Load("googlenet.json"), Rational(203, 800),
              static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(SolveDp(r));
}
BENCHMARK(BM_DpGoogLeNet)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_DpGoogLeNetQuantized(benchmark::State& state) {
  SolveRequest r = Request(Load("googlenet.json"), Rational(203, 800), 1);
  r.quantization = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(SolveDp(r));
}
BENCHMARK(BM_DpGoogLeNetQuantized)->Arg(100)->Arg(10000)
    ->Unit(benchmark::kMillisecond);

void BM_EnumerateWindowAlexNet(benchmark::State& state) {
  const Network net = Load("alexnet.json");
  WindowQuery q;
  q.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(EnumerateWindow(net, q));
}
BENCHMARK(BM_EnumerateWindowAlexNet)->Arg(1)->Arg(4)
    ->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace cnnscale

// The packaged benchmark_main archive carries LTO objects from another gcc
// release, so main is defined here.
BENCHMARK_MAIN();
