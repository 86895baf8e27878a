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

#ifndef ELASTIC_SERVING_SCHEDULER_H_
#define ELASTIC_SERVING_SCHEDULER_H_

#include <cstdint>
#include <optional>
#include <span>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "elastic_serving/duration.h"
#include "elastic_serving/profiles.h"

namespace elastic_serving {

// One scheduling decision: N_mb mini-batches that must finish within D.
struct SchedulingInstance {
  const ProfileSet& profiles;
  Duration deadline;
  int64_t num_minibatches;
};

absl::Status ValidateInstance(const SchedulingInstance& instance);

enum class SolverKind { kShortcut, kBranchAndBound, kKnapsackDp, kBruteForce };
absl::string_view SolverKindName(SolverKind kind);

// counts[i] mini-batches go to sub-model i+1; the rest are dropped.
struct SchedulingPolicy {
  std::vector<int64_t> counts;
  double theoretical_effective_accuracy = 0.0;
  SolverKind solver_used = SolverKind::kShortcut;

  int64_t total() const;
  friend bool operator==(const SchedulingPolicy&,
                         const SchedulingPolicy&) = default;
};

// sum_i (n_i / N_mb) * p_i.
absl::StatusOr<double> EffectiveAccuracy(std::span<const int64_t> counts,
                                         const SchedulingInstance& instance);

// Mini-batch budget and deadline, checked in exact integer microseconds.
bool IsFeasible(std::span<const int64_t> counts,
                const SchedulingInstance& instance);

struct SchedulerOptions {
  int64_t node_budget = 100000;
  // Unset means DefaultDpResolution(deadline).
  std::optional<Duration> dp_resolution;
  int64_t brute_force_budget = 10'000'000;
};

// max(D / 10000, 1us).
Duration DefaultDpResolution(Duration deadline);

// Full decision procedure: saturation and nothing-fits shortcuts, then
// branch-and-bound with the knapsack DP as fallback. The result is feasible
// and optimal up to kObjectiveTolerance.
absl::StatusOr<SchedulingPolicy> Schedule(const SchedulingInstance& instance,
                                          const SchedulerOptions& options = {});

struct BranchAndBoundStats {
  int64_t nodes_explored = 0;
  int64_t branchings = 0;
  int64_t incumbent_updates = 0;
  double root_bound = 0.0;
  // Largest incumbent value seen at any point of the search.
  double best_incumbent = 0.0;
};

struct BranchAndBoundResult {
  SchedulingPolicy policy;
  BranchAndBoundStats stats;
};

// Best-first LP branch-and-bound. Returns ResourceExhausted when the node
// budget runs out before the open-node queue empties.
absl::StatusOr<BranchAndBoundResult> ScheduleBranchAndBound(
    const SchedulingInstance& instance, int64_t node_budget = 100000);

// Two-dimensional unbounded knapsack over (mini-batches, time units of
// `resolution`). Latencies are rounded up to whole units, so the result
// never overruns the real deadline; it is exact when every latency and the
// deadline are multiples of `resolution`.
absl::StatusOr<SchedulingPolicy> ScheduleKnapsackDp(
    const SchedulingInstance& instance, Duration resolution);

// Exhaustive enumeration of every count vector with sum <= N_mb. Fails with
// ResourceExhausted if C(N_mb + K, K) exceeds `budget`.
absl::StatusOr<SchedulingPolicy> ScheduleBruteForce(
    const SchedulingInstance& instance, int64_t budget = 10'000'000);

enum class ScheduleMethod { kAuto, kBranchAndBound, kKnapsackDp, kBruteForce };
absl::StatusOr<ScheduleMethod> ParseScheduleMethod(absl::string_view name);

// Runs exactly the requested solver; kAuto is Schedule().
absl::StatusOr<SchedulingPolicy> SolveWith(ScheduleMethod method,
                                           const SchedulingInstance& instance,
                                           const SchedulerOptions& options = {});

}  // namespace elastic_serving

#endif  // ELASTIC_SERVING_SCHEDULER_H_
