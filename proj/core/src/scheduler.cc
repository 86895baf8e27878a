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

#include "elastic_serving/scheduler.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "elastic_serving/lp_solver.h"

namespace elastic_serving {
namespace {

struct Candidate {
  std::vector<int64_t> counts;
  double value = 0.0;
};

int64_t Sum(std::span<const int64_t> counts) {
  return std::accumulate(counts.begin(), counts.end(), int64_t{0});
}

double Objective(std::span<const int64_t> counts, const ProfileSet& profiles,
                 int64_t num_minibatches) {
  double value = 0.0;
  for (size_t i = 0; i < counts.size(); ++i) {
    value += static_cast<double>(counts[i]) /
             static_cast<double>(num_minibatches) *
             profiles.sub_models()[i].accuracy;
  }
  return value;
}

// Deterministic preference: objective first, then more scheduled
// mini-batches, then lexicographically more weight on lower indices.
bool Better(const Candidate& a, const Candidate& b) {
  if (a.value > b.value + kObjectiveTolerance) return true;
  if (a.value < b.value - kObjectiveTolerance) return false;
  const int64_t sa = Sum(a.counts), sb = Sum(b.counts);
  if (sa != sb) return sa > sb;
  return a.counts > b.counts;
}

SchedulingPolicy MakePolicy(std::vector<int64_t> counts,
                            const SchedulingInstance& instance,
                            SolverKind solver) {
  SchedulingPolicy policy;
  policy.theoretical_effective_accuracy =
      Objective(counts, instance.profiles, instance.num_minibatches);
  policy.counts = std::move(counts);
  policy.solver_used = solver;
  return policy;
}

// Best policy that uses a single sub-model, n_i = min(N_mb, floor(D / t_i)).
Candidate BestSingleModel(const SchedulingInstance& instance) {
  const ProfileSet& profiles = instance.profiles;
  const int k = profiles.size();
  Candidate best{std::vector<int64_t>(k, 0), 0.0};
  for (int i = 0; i < k; ++i) {
    Candidate c{std::vector<int64_t>(k, 0), 0.0};
    c.counts[i] = std::min(instance.num_minibatches,
                           instance.deadline / profiles.sub_models()[i].batch_latency);
    c.value = Objective(c.counts, profiles, instance.num_minibatches);
    if (Better(c, best)) best = std::move(c);
  }
  return best;
}

// Open subproblem: the root LP plus per-variable integer bounds.
struct Node {
  std::vector<int64_t> lower;
  std::vector<int64_t> upper;  // -1 means unbounded
  double parent_bound;
  int64_t sequence;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.parent_bound != b.parent_bound) return a.parent_bound < b.parent_bound;
    return a.sequence > b.sequence;
  }
};

LpProblem BuildRelaxation(const SchedulingInstance& instance,
                          const Node& node) {
  const ProfileSet& profiles = instance.profiles;
  const int k = profiles.size();
  const double n_mb = static_cast<double>(instance.num_minibatches);
  const double deadline = static_cast<double>(instance.deadline.count());
  LpProblem lp;
  lp.num_vars = k;
  lp.objective.resize(k);
  LpConstraint batches{std::vector<double>(k, 1.0), Relation::kLessEqual, n_mb};
  // Time row is normalized by D so every row is O(1).
  LpConstraint time{std::vector<double>(k), Relation::kLessEqual, 1.0};
  for (int i = 0; i < k; ++i) {
    const SubModelProfile& m = profiles.sub_models()[i];
    lp.objective[i] = m.accuracy / n_mb;
    time.coefficients[i] =
        static_cast<double>(m.batch_latency.count()) / deadline;
  }
  lp.constraints.push_back(std::move(batches));
  lp.constraints.push_back(std::move(time));
  for (int i = 0; i < k; ++i) {
    if (node.lower[i] > 0) {
      LpConstraint row{std::vector<double>(k, 0.0), Relation::kGreaterEqual,
                       static_cast<double>(node.lower[i])};
      row.coefficients[i] = 1.0;
      lp.constraints.push_back(std::move(row));
    }
    if (node.upper[i] >= 0) {
      LpConstraint row{std::vector<double>(k, 0.0), Relation::kLessEqual,
                       static_cast<double>(node.upper[i])};
      row.coefficients[i] = 1.0;
      lp.constraints.push_back(std::move(row));
    }
  }
  return lp;
}

// C(n + k, k), saturating at `cap` + 1.
int64_t BoundedBinomial(int64_t n, int64_t k, int64_t cap) {
  // Multiplicative form keeps every partial product an exact binomial.
  __int128 result = 1;
  for (int64_t i = 1; i <= k; ++i) {
    result = result * (n + i) / i;
    if (result > cap) return cap + 1;
  }
  return static_cast<int64_t>(result);
}

void Enumerate(const SchedulingInstance& instance, size_t index,
               int64_t batches_left, Duration time_left,
               std::vector<int64_t>& counts, Candidate& best) {
  const auto& models = instance.profiles.sub_models();
  if (index == models.size()) {
    Candidate c{counts,
                Objective(counts, instance.profiles, instance.num_minibatches)};
    if (Better(c, best)) best = std::move(c);
    return;
  }
  const Duration t = models[index].batch_latency;
  const int64_t max_here = std::min(batches_left, time_left / t);
  for (int64_t n = max_here; n >= 0; --n) {
    counts[index] = n;
    Enumerate(instance, index + 1, batches_left - n, time_left - t * n, counts,
              best);
  }
  counts[index] = 0;
}

}  // namespace

absl::string_view SolverKindName(SolverKind kind) {
  switch (kind) {
    case SolverKind::kShortcut:
      return "shortcut";
    case SolverKind::kBranchAndBound:
      return "branch_and_bound";
    case SolverKind::kKnapsackDp:
      return "knapsack_dp";
    case SolverKind::kBruteForce:
      return "brute_force";
  }
  return "unknown";
}

int64_t SchedulingPolicy::total() const { return Sum(counts); }

absl::Status ValidateInstance(const SchedulingInstance& instance) {
  if (instance.deadline <= Duration::zero()) {
    return absl::InvalidArgumentError("deadline must be positive");
  }
  if (instance.num_minibatches < 1) {
    return absl::InvalidArgumentError("number of mini-batches must be >= 1");
  }
  return absl::OkStatus();
}

absl::StatusOr<double> EffectiveAccuracy(std::span<const int64_t> counts,
                                         const SchedulingInstance& instance) {
  if (counts.size() != static_cast<size_t>(instance.profiles.size())) {
    return absl::InvalidArgumentError(
        absl::StrFormat("policy has %d entries for %d sub-models",
                        counts.size(), instance.profiles.size()));
  }
  if (auto status = ValidateInstance(instance); !status.ok()) return status;
  return Objective(counts, instance.profiles, instance.num_minibatches);
}

bool IsFeasible(std::span<const int64_t> counts,
                const SchedulingInstance& instance) {
  const auto& models = instance.profiles.sub_models();
  if (counts.size() != models.size()) return false;
  int64_t batches = 0;
  Duration time{0};
  for (size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 0) return false;
    batches += counts[i];
    time += models[i].batch_latency * counts[i];
  }
  return batches <= instance.num_minibatches && time <= instance.deadline;
}

Duration DefaultDpResolution(Duration deadline) {
  return std::max(deadline / 10000, Duration(1));
}

absl::StatusOr<SchedulingPolicy> Schedule(const SchedulingInstance& instance,
                                          const SchedulerOptions& options) {
  if (auto status = ValidateInstance(instance); !status.ok()) return status;
  const ProfileSet& profiles = instance.profiles;
  const int k = profiles.size();

  // Everything fits even on the slowest sub-model: use the most accurate
  // one, ties going to the larger slice rate.
  if (instance.deadline >= profiles.slow_time(instance.num_minibatches)) {
    int best = 0;
    for (int i = 1; i < k; ++i) {
      const auto& cand = profiles.sub_models()[i];
      const auto& cur = profiles.sub_models()[best];
      if (cand.accuracy > cur.accuracy ||
          (cand.accuracy == cur.accuracy && cand.slice_rate > cur.slice_rate)) {
        best = i;
      }
    }
    std::vector<int64_t> counts(k, 0);
    counts[best] = instance.num_minibatches;
    return MakePolicy(std::move(counts), instance, SolverKind::kShortcut);
  }
  if (instance.deadline < profiles.min_latency()) {
    return MakePolicy(std::vector<int64_t>(k, 0), instance,
                      SolverKind::kShortcut);
  }

  auto bnb = ScheduleBranchAndBound(instance, options.node_budget);
  if (bnb.ok()) return std::move(bnb->policy);
  if (!absl::IsResourceExhausted(bnb.status())) return bnb.status();
  return ScheduleKnapsackDp(instance, options.dp_resolution.value_or(
                                          DefaultDpResolution(instance.deadline)));
}

absl::StatusOr<BranchAndBoundResult> ScheduleBranchAndBound(
    const SchedulingInstance& instance, int64_t node_budget) {
  if (auto status = ValidateInstance(instance); !status.ok()) return status;
  const int k = instance.profiles.size();

  BranchAndBoundResult result;
  BranchAndBoundStats& stats = result.stats;
  Candidate incumbent = BestSingleModel(instance);
  stats.best_incumbent = incumbent.value;

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  int64_t sequence = 0;
  open.push(Node{std::vector<int64_t>(k, 0), std::vector<int64_t>(k, -1),
                 std::numeric_limits<double>::infinity(), sequence++});
  bool at_root = true;

  while (!open.empty()) {
    Node node = open.top();
    open.pop();
    if (node.parent_bound <= incumbent.value + kObjectiveTolerance) continue;
    if (stats.nodes_explored >= node_budget) {
      return absl::ResourceExhaustedError(absl::StrCat(
          "branch-and-bound node budget of ", node_budget, " exhausted"));
    }
    ++stats.nodes_explored;

    auto lp = SolveLp(BuildRelaxation(instance, node));
    if (!lp.ok()) return lp.status();
    if (at_root) {
      stats.root_bound = lp->status == LpStatus::kOptimal
                             ? lp->objective_value
                             : incumbent.value;
      at_root = false;
    }
    if (lp->status == LpStatus::kInfeasible) continue;
    if (lp->status == LpStatus::kUnbounded) {
      return absl::InternalError("scheduling relaxation is unbounded");
    }
    const double bound = lp->objective_value;
    if (bound <= incumbent.value + kObjectiveTolerance) continue;

    // Most fractional component; ties go to the lowest index.
    int branch_var = -1;
    double best_distance = 0.0;
    for (int i = 0; i < k; ++i) {
      const double x = lp->x[i];
      if (std::fabs(x - std::round(x)) <= kIntegralityTolerance) continue;
      const double distance = 0.5 - std::fabs(x - std::floor(x) - 0.5);
      if (branch_var < 0 || distance > best_distance) {
        branch_var = i;
        best_distance = distance;
      }
    }

    if (branch_var < 0) {
      Candidate c{std::vector<int64_t>(k), 0.0};
      for (int i = 0; i < k; ++i) {
        c.counts[i] = std::max<int64_t>(0, std::llround(lp->x[i]));
      }
      // The LP works in floating point; only accept points that are
      // feasible in exact integer time.
      if (!IsFeasible(c.counts, instance)) continue;
      c.value = Objective(c.counts, instance.profiles, instance.num_minibatches);
      if (Better(c, incumbent)) {
        incumbent = std::move(c);
        ++stats.incumbent_updates;
        stats.best_incumbent = std::max(stats.best_incumbent, incumbent.value);
      }
      continue;
    }

    ++stats.branchings;
    const auto floor_value =
        static_cast<int64_t>(std::floor(lp->x[branch_var]));
    Node down = node;
    down.upper[branch_var] = floor_value;
    down.parent_bound = bound;
    down.sequence = sequence++;
    if (down.upper[branch_var] >= down.lower[branch_var]) {
      open.push(std::move(down));
    }
    Node up = std::move(node);
    up.lower[branch_var] = floor_value + 1;
    up.parent_bound = bound;
    up.sequence = sequence++;
    if (up.upper[branch_var] < 0 ||
        up.lower[branch_var] <= up.upper[branch_var]) {
      open.push(std::move(up));
    }
  }

  result.policy = MakePolicy(std::move(incumbent.counts), instance,
                             SolverKind::kBranchAndBound);
  return result;
}

absl::StatusOr<SchedulingPolicy> ScheduleKnapsackDp(
    const SchedulingInstance& instance, Duration resolution) {
  if (auto status = ValidateInstance(instance); !status.ok()) return status;
  if (resolution <= Duration::zero()) {
    return absl::InvalidArgumentError("DP time resolution must be positive");
  }
  const auto& models = instance.profiles.sub_models();
  const int k = static_cast<int>(models.size());
  const int64_t n_mb = instance.num_minibatches;
  const int64_t capacity = instance.deadline / resolution;

  // Weights round up, so sum(weights) <= capacity implies the true
  // deadline holds.
  std::vector<int64_t> weight(k);
  std::vector<double> value(k);
  for (int i = 0; i < k; ++i) {
    const int64_t t = models[i].batch_latency.count();
    weight[i] = (t + resolution.count() - 1) / resolution.count();
    value[i] = models[i].accuracy / static_cast<double>(n_mb);
  }

  // No more than capacity / min(weight) mini-batches can ever fit.
  const int64_t rows =
      std::min(n_mb, capacity / *std::min_element(weight.begin(), weight.end()));
  constexpr int64_t kMaxCells = 400'000'000;
  if ((rows + 1) * (capacity + 1) > kMaxCells) {
    return absl::ResourceExhaustedError(absl::StrFormat(
        "knapsack table of %d x %d cells is too large; use a coarser "
        "resolution",
        rows + 1, capacity + 1));
  }

  // best[j][u]: max objective with at most j mini-batches and at most u
  // time units. choice[j][u] is the sub-model added at that step, or -1.
  const int64_t width = capacity + 1;
  std::vector<double> best((rows + 1) * width, 0.0);
  std::vector<int16_t> choice((rows + 1) * width, -1);
  for (int64_t j = 1; j <= rows; ++j) {
    const double* prev = &best[(j - 1) * width];
    double* row = &best[j * width];
    int16_t* pick = &choice[j * width];
    for (int64_t u = 0; u <= capacity; ++u) {
      double best_value = prev[u];
      int16_t best_pick = -1;
      for (int i = 0; i < k; ++i) {
        if (weight[i] > u) continue;
        const double cand = prev[u - weight[i]] + value[i];
        // On ties, schedule the extra mini-batch (more work done) and keep
        // the lowest index.
        if (cand > best_value + kObjectiveTolerance ||
            (best_pick < 0 && cand >= best_value - kObjectiveTolerance)) {
          best_value = cand;
          best_pick = static_cast<int16_t>(i);
        }
      }
      row[u] = best_value;
      pick[u] = best_pick;
    }
  }

  std::vector<int64_t> counts(k, 0);
  int64_t u = capacity;
  for (int64_t j = rows; j >= 1; --j) {
    const int16_t i = choice[j * width + u];
    if (i < 0) continue;
    ++counts[i];
    u -= weight[i];
  }
  return MakePolicy(std::move(counts), instance, SolverKind::kKnapsackDp);
}

absl::StatusOr<SchedulingPolicy> ScheduleBruteForce(
    const SchedulingInstance& instance, int64_t budget) {
  if (auto status = ValidateInstance(instance); !status.ok()) return status;
  const int k = instance.profiles.size();
  const int64_t combinations =
      BoundedBinomial(instance.num_minibatches, k, budget);
  if (combinations > budget) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "enumeration of C(", instance.num_minibatches + k, ", ", k,
        ") count vectors exceeds the budget of ", budget));
  }
  std::vector<int64_t> counts(k, 0);
  Candidate best{std::vector<int64_t>(k, 0), 0.0};
  Enumerate(instance, 0, instance.num_minibatches, instance.deadline, counts,
            best);
  return MakePolicy(std::move(best.counts), instance, SolverKind::kBruteForce);
}

absl::StatusOr<ScheduleMethod> ParseScheduleMethod(absl::string_view name) {
  if (name == "auto") return ScheduleMethod::kAuto;
  if (name == "bnb") return ScheduleMethod::kBranchAndBound;
  if (name == "dp") return ScheduleMethod::kKnapsackDp;
  if (name == "brute") return ScheduleMethod::kBruteForce;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown method '", name, "' (expected auto, bnb, dp or brute)"));
}

absl::StatusOr<SchedulingPolicy> SolveWith(ScheduleMethod method,
                                           const SchedulingInstance& instance,
                                           const SchedulerOptions& options) {
  switch (method) {
    case ScheduleMethod::kAuto:
      return Schedule(instance, options);
    case ScheduleMethod::kBranchAndBound: {
      auto result = ScheduleBranchAndBound(instance, options.node_budget);
      if (!result.ok()) return result.status();
      return std::move(result->policy);
    }
    case ScheduleMethod::kKnapsackDp:
      return ScheduleKnapsackDp(
          instance, options.dp_resolution.value_or(
                        DefaultDpResolution(instance.deadline)));
    case ScheduleMethod::kBruteForce:
      return ScheduleBruteForce(instance, options.brute_force_budget);
  }
  return absl::InvalidArgumentError("unknown schedule method");
}

}  // namespace elastic_serving
