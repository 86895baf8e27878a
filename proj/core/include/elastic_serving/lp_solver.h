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

#ifndef ELASTIC_SERVING_LP_SOLVER_H_
#define ELASTIC_SERVING_LP_SOLVER_H_

#include <vector>

#include "absl/status/statusor.h"

namespace elastic_serving {

inline constexpr double kFeasibilityTolerance = 1e-9;
inline constexpr double kObjectiveTolerance = 1e-9;
inline constexpr double kIntegralityTolerance = 1e-6;

enum class Relation { kLessEqual, kGreaterEqual };

struct LpConstraint {
  std::vector<double> coefficients;
  Relation relation = Relation::kLessEqual;
  double bound = 0.0;
};

// maximize objective . x  subject to constraints and x >= 0.
struct LpProblem {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<LpConstraint> constraints;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;  // meaningful only when kOptimal
  double objective_value = 0.0;
};

// Dense two-phase primal simplex with Bland's rule. Meant for the handful
// of variables and rows that branch-and-bound produces, with no presolve
// or warm start. Deterministic: identical input gives an
// identical pivot sequence. Returns InvalidArgument on dimension mismatch or
// non-finite data.
absl::StatusOr<LpSolution> SolveLp(const LpProblem& problem);

}  // namespace elastic_serving

#endif  // ELASTIC_SERVING_LP_SOLVER_H_
