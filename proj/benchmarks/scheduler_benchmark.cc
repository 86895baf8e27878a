// Copyright 2026 The Elastic Serving Authors
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

#include <chrono>
#include <string>

#include "benchmark/benchmark.h"
#include "elastic_serving/profiles.h"
#include "elastic_serving/schedule_cache.h"
#include "elastic_serving/scheduler.h"
#include "elastic_serving/serving_sim.h"

namespace elastic_serving {
namespace {

const ProfileSet& Xray() {
  static const ProfileSet* profiles = [] {
    auto loaded = LoadProfileSetFromFile(std::string(ELASTIC_SERVING_SOURCE_DIR) +
                                         "/profiles/resnet50_xray.json");
    if (!loaded.ok()) std::abort();
    return new ProfileSet(*std::move(loaded));
  }();
  return *profiles;
}

void BM_BranchAndBound(benchmark::State& state) {
  const SchedulingInstance instance{Xray(), std::chrono::seconds(8),
                                    state.range(0)};
  for (auto _ : state) {
    auto result = ScheduleBranchAndBound(instance);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_BranchAndBound)->Arg(200)->Arg(400)->Arg(700)->Arg(938);

void BM_KnapsackDp(benchmark::State& state) {
  const SchedulingInstance instance{Xray(), std::chrono::seconds(8),
                                    state.range(0)};
  for (auto _ : state) {
    auto result = ScheduleKnapsackDp(instance, DefaultDpResolution(instance.deadline));
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_KnapsackDp)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_BruteForce(benchmark::State& state) {
  const SchedulingInstance instance{Xray(), std::chrono::seconds(1),
                                    state.range(0)};
  for (auto _ : state) {
    auto result = ScheduleBruteForce(instance);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_BruteForce)->Arg(20)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_CacheHit(benchmark::State& state) {
  ScheduleCache cache(1024);
  const SchedulingInstance instance{Xray(), std::chrono::seconds(8), 400};
  if (!CacheLookupOrSchedule(cache, instance).ok()) std::abort();
  for (auto _ : state) {
    auto result = CacheLookupOrSchedule(cache, instance);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_CacheHit);

void BM_SweepPoint(benchmark::State& state) {
  const SimConfig config{Xray(), 1, ExpectedCorrectness{}, SchedulerConfig{},
                         SingleTaskWorkload{state.range(0), std::chrono::seconds(8)},
                         false};
  for (auto _ : state) {
    auto metrics = RunSimulation(config);
    benchmark::DoNotOptimize(metrics);
  }
}
BENCHMARK(BM_SweepPoint)->Arg(800)->Arg(12800)->Arg(30000);

}  // namespace
}  // namespace elastic_serving

BENCHMARK_MAIN();
