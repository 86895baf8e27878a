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

#ifndef ELASTIC_SERVING_WORKLOAD_H_
#define ELASTIC_SERVING_WORKLOAD_H_

#include <cstdint>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "elastic_serving/duration.h"

namespace elastic_serving {

// A client request of `num_instances` instances that must all be answered
// within `deadline` of `arrival`.
struct PredictionTask {
  int64_t task_id = 0;
  int64_t num_instances = 0;
  Duration deadline{0};
  Timestamp arrival{0};

  friend bool operator==(const PredictionTask&,
                         const PredictionTask&) = default;
};

struct SingleTaskWorkload {
  int64_t num_instances = 0;
  Duration deadline{0};
};

// One task per rate with N = round(rate * D), arriving `spacing` apart.
struct RateSweepWorkload {
  std::vector<double> rates;  // instances per second
  Duration deadline{0};
  Duration spacing{0};
};

struct FixedTaskSize {
  int64_t num_instances = 0;
};
struct UniformTaskSize {
  int64_t min_instances = 0;
  int64_t max_instances = 0;
};
using TaskSizeDistribution = std::variant<FixedTaskSize, UniformTaskSize>;

// Poisson task arrivals over [0, horizon).
struct PoissonWorkload {
  double tasks_per_second = 0.0;
  TaskSizeDistribution task_size = FixedTaskSize{};
  Duration deadline{0};
  Duration horizon{0};
  uint64_t seed = 0;
};

using WorkloadSpec =
    std::variant<SingleTaskWorkload, RateSweepWorkload, PoissonWorkload>;

absl::Status ValidateWorkload(const WorkloadSpec& spec);

// Arrival times are non-decreasing and task ids are 1..n in order.
absl::StatusOr<std::vector<PredictionTask>> GenerateTasks(
    const WorkloadSpec& spec);

// N = round(rate * D) for one sweep point.
int64_t InstancesForRate(double rate, Duration deadline);

}  // namespace elastic_serving

#endif  // ELASTIC_SERVING_WORKLOAD_H_
