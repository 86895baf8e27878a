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

#ifndef ELASTIC_SERVING_TOOLS_SWEEP_H_
#define ELASTIC_SERVING_TOOLS_SWEEP_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "elastic_serving/duration.h"
#include "elastic_serving/profiles.h"
#include "elastic_serving/serving_sim.h"

namespace elastic_serving {

inline constexpr absl::string_view kSweepCsvSchema = "elastic-serve/sweep/v1";

struct SweepOptions {
  Duration deadline{8'000'000};
  int num_workers = 1;
  CorrectnessMode correctness = ExpectedCorrectness{};
  SchedulerConfig scheduler;
  bool parallel = false;
};

struct SweepRow {
  double rate = 0.0;
  int64_t num_instances = 0;
  SimMetrics metrics;
};

// Each rate is simulated on its own as one task of round(rate * D)
// instances arriving at t = 0.
absl::StatusOr<std::vector<SweepRow>> RunSweep(const ProfileSet& profiles,
                                               const std::vector<double>& rates,
                                               const SweepOptions& options);

// "a,b,c" or "start:stop:step" (inclusive of stop when it lands on a step).
absl::StatusOr<std::vector<double>> ParseRates(absl::string_view text);

// Columns, in order: rate_instances_per_s, one n_r<slice rate> per
// sub-model, theoretical_p_eff, measured_p_eff, throughput, p50_ms, p95_ms,
// p99_ms, drop_rate. Preceded by a "# schema" comment line.
void WriteSweepCsv(const ProfileSet& profiles,
                   const std::vector<SweepRow>& rows, std::ostream& out);

}  // namespace elastic_serving

#endif  // ELASTIC_SERVING_TOOLS_SWEEP_H_
