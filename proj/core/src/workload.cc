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

#include "elastic_serving/workload.h"

#include <cmath>
#include <random>

#include "absl/strings/str_cat.h"

namespace elastic_serving {
namespace {

// Uniform double in [0, 1) from the top 53 bits. Unlike the standard
// distributions this is identical across standard library implementations.
double UnitUniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

absl::Status CheckDeadline(Duration deadline) {
  if (deadline <= Duration::zero()) {
    return absl::InvalidArgumentError("deadline: must be positive");
  }
  return absl::OkStatus();
}

}  // namespace

int64_t InstancesForRate(double rate, Duration deadline) {
  return std::llround(rate * ToSeconds(deadline));
}

absl::Status ValidateWorkload(const WorkloadSpec& spec) {
  return std::visit(
      Overloaded{
          [](const SingleTaskWorkload& w) -> absl::Status {
            if (w.num_instances < 1) {
              return absl::InvalidArgumentError(
                  "num_instances: must be >= 1");
            }
            return CheckDeadline(w.deadline);
          },
          [](const RateSweepWorkload& w) -> absl::Status {
            if (w.rates.empty()) {
              return absl::InvalidArgumentError("rates: must be non-empty");
            }
            if (auto s = CheckDeadline(w.deadline); !s.ok()) return s;
            if (w.spacing < Duration::zero()) {
              return absl::InvalidArgumentError("spacing: must be >= 0");
            }
            for (size_t i = 0; i < w.rates.size(); ++i) {
              if (!(w.rates[i] > 0.0) || !std::isfinite(w.rates[i])) {
                return absl::InvalidArgumentError(
                    absl::StrCat("rates[", i, "]: must be positive"));
              }
              if (InstancesForRate(w.rates[i], w.deadline) < 1) {
                return absl::InvalidArgumentError(absl::StrCat(
                    "rates[", i, "]: rate * deadline is below one instance"));
              }
            }
            return absl::OkStatus();
          },
          [](const PoissonWorkload& w) -> absl::Status {
            if (!(w.tasks_per_second > 0.0) ||
                !std::isfinite(w.tasks_per_second)) {
              return absl::InvalidArgumentError(
                  "tasks_per_second: must be positive");
            }
            if (auto s = CheckDeadline(w.deadline); !s.ok()) return s;
            if (w.horizon <= Duration::zero()) {
              return absl::InvalidArgumentError("horizon: must be positive");
            }
            if (const auto* fixed = std::get_if<FixedTaskSize>(&w.task_size)) {
              if (fixed->num_instances < 1) {
                return absl::InvalidArgumentError(
                    "task_size.num_instances: must be >= 1");
              }
            } else {
              const auto& u = std::get<UniformTaskSize>(w.task_size);
              if (u.min_instances < 1 || u.max_instances < u.min_instances) {
                return absl::InvalidArgumentError(
                    "task_size: need 1 <= min_instances <= max_instances");
              }
            }
            return absl::OkStatus();
          },
      },
      spec);
}

absl::StatusOr<std::vector<PredictionTask>> GenerateTasks(
    const WorkloadSpec& spec) {
  if (auto s = ValidateWorkload(spec); !s.ok()) return s;
  std::vector<PredictionTask> tasks;

  if (const auto* single = std::get_if<SingleTaskWorkload>(&spec)) {
    tasks.push_back({1, single->num_instances, single->deadline, Timestamp(0)});
  } else if (const auto* sweep = std::get_if<RateSweepWorkload>(&spec)) {
    for (size_t i = 0; i < sweep->rates.size(); ++i) {
      tasks.push_back({static_cast<int64_t>(i) + 1,
                       InstancesForRate(sweep->rates[i], sweep->deadline),
                       sweep->deadline,
                       sweep->spacing * static_cast<int64_t>(i)});
    }
  } else {
    const auto& poisson = std::get<PoissonWorkload>(spec);
    std::mt19937_64 rng(poisson.seed);
    double clock_s = 0.0;
    const double horizon_s = ToSeconds(poisson.horizon);
    for (int64_t id = 1;; ++id) {
      clock_s += -std::log1p(-UnitUniform(rng)) / poisson.tasks_per_second;
      if (clock_s >= horizon_s) break;
      int64_t size = 0;
      if (const auto* fixed = std::get_if<FixedTaskSize>(&poisson.task_size)) {
        size = fixed->num_instances;
      } else {
        const auto& u = std::get<UniformTaskSize>(poisson.task_size);
        const auto span =
            static_cast<uint64_t>(u.max_instances - u.min_instances + 1);
        size = u.min_instances + static_cast<int64_t>(rng() % span);
      }
      tasks.push_back({id, size, poisson.deadline, FromSeconds(clock_s)});
    }
  }
  return tasks;
}

}  // namespace elastic_serving
