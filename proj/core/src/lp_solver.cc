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

#include "elastic_serving/lp_solver.h"

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace elastic_serving {
namespace {

constexpr double kPivotTolerance = 1e-11;
constexpr int kMaxPivots = 100000;

enum class ColumnKind { kStructural, kSlack, kArtificial };

// Canonical-form tableau: rows_[r] holds B^-1 A in columns [0, cols) and
// B^-1 b in column `cols`.
class Tableau {
 public:
  Tableau(size_t rows, size_t cols)
      : cols_(cols),
        rows_(rows, std::vector<double>(cols + 1, 0.0)),
        basis_(rows, 0) {}

  size_t num_rows() const { return rows_.size(); }
  size_t num_cols() const { return cols_; }
  double& at(size_t r, size_t c) { return rows_[r][c]; }
  double at(size_t r, size_t c) const { return rows_[r][c]; }
  double& rhs(size_t r) { return rows_[r][cols_]; }
  double rhs(size_t r) const { return rows_[r][cols_]; }
  size_t& basic(size_t r) { return basis_[r]; }
  size_t basic(size_t r) const { return basis_[r]; }

  void Pivot(size_t row, size_t col) {
    std::vector<double>& p = rows_[row];
    const double inv = 1.0 / p[col];
    for (double& v : p) v *= inv;
    p[col] = 1.0;
    for (size_t r = 0; r < rows_.size(); ++r) {
      if (r == row) continue;
      const double factor = rows_[r][col];
      if (factor == 0.0) continue;
      for (size_t c = 0; c <= cols_; ++c) rows_[r][c] -= factor * p[c];
      rows_[r][col] = 0.0;
    }
    basis_[row] = col;
  }

 private:
  size_t cols_;
  std::vector<std::vector<double>> rows_;
  std::vector<size_t> basis_;
};

enum class PhaseResult { kOptimal, kUnbounded, kIterationLimit };

// Maximizes cost . x over the current tableau, never letting a column with
// allowed[c] == false enter the basis.
PhaseResult RunPhase(Tableau& t, const std::vector<double>& cost,
                     const std::vector<bool>& allowed) {
  for (int iter = 0; iter < kMaxPivots; ++iter) {
    // Bland: lowest-index column with positive reduced cost.
    std::optional<size_t> entering;
    for (size_t c = 0; c < t.num_cols() && !entering; ++c) {
      if (!allowed[c]) continue;
      double reduced = cost[c];
      for (size_t r = 0; r < t.num_rows(); ++r) {
        reduced -= cost[t.basic(r)] * t.at(r, c);
      }
      if (reduced > kPivotTolerance) entering = c;
    }
    if (!entering) return PhaseResult::kOptimal;

    std::optional<size_t> leaving;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (size_t r = 0; r < t.num_rows(); ++r) {
      const double a = t.at(r, *entering);
      if (a <= kPivotTolerance) continue;
      const double ratio = t.rhs(r) / a;
      // Ties go to the lowest basic variable index (Bland).
      if (ratio < best_ratio - kPivotTolerance ||
          (leaving && std::fabs(ratio - best_ratio) <= kPivotTolerance &&
           t.basic(r) < t.basic(*leaving))) {
        best_ratio = ratio;
        leaving = r;
      }
    }
    if (!leaving) return PhaseResult::kUnbounded;
    t.Pivot(*leaving, *entering);
  }
  return PhaseResult::kIterationLimit;
}

}  // namespace

absl::StatusOr<LpSolution> SolveLp(const LpProblem& problem) {
  const size_t n = static_cast<size_t>(problem.num_vars);
  if (problem.num_vars <= 0 || problem.objective.size() != n) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "objective has %d entries for %d variables", problem.objective.size(),
        problem.num_vars));
  }
  for (double c : problem.objective) {
    if (!std::isfinite(c)) {
      return absl::InvalidArgumentError("objective must be finite");
    }
  }
  for (size_t i = 0; i < problem.constraints.size(); ++i) {
    const LpConstraint& row = problem.constraints[i];
    if (row.coefficients.size() != n) {
      return absl::InvalidArgumentError(
          absl::StrFormat("constraint %d has %d coefficients, expected %d", i,
                          row.coefficients.size(), n));
    }
    if (!std::isfinite(row.bound)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("constraint %d has a non-finite bound", i));
    }
  }

  // Normalize to b >= 0. A >= row with b == 0 becomes a <= row after
  // negation so it can start with its slack basic.
  struct Row {
    std::vector<double> a;
    double b;
    bool needs_artificial;
  };
  std::vector<Row> rows;
  rows.reserve(problem.constraints.size());
  for (const LpConstraint& c : problem.constraints) {
    Row row{c.coefficients, c.bound, false};
    bool greater = c.relation == Relation::kGreaterEqual;
    if (row.b < 0.0 || (greater && row.b == 0.0)) {
      for (double& v : row.a) v = -v;
      row.b = -row.b;
      greater = !greater;
    }
    row.needs_artificial = greater;
    rows.push_back(std::move(row));
  }

  const size_t m = rows.size();
  size_t num_artificial = 0;
  for (const Row& r : rows) num_artificial += r.needs_artificial ? 1 : 0;
  const size_t cols = n + m + num_artificial;

  Tableau t(m, cols);
  std::vector<ColumnKind> kind(cols, ColumnKind::kStructural);
  size_t next_artificial = n + m;
  for (size_t r = 0; r < m; ++r) {
    for (size_t j = 0; j < n; ++j) t.at(r, j) = rows[r].a[j];
    t.rhs(r) = rows[r].b;
    const size_t slack = n + r;
    kind[slack] = ColumnKind::kSlack;
    if (rows[r].needs_artificial) {
      t.at(r, slack) = -1.0;
      t.at(r, next_artificial) = 1.0;
      kind[next_artificial] = ColumnKind::kArtificial;
      t.basic(r) = next_artificial++;
    } else {
      t.at(r, slack) = 1.0;
      t.basic(r) = slack;
    }
  }

  std::vector<bool> allowed(cols, true);
  if (num_artificial > 0) {
    std::vector<double> phase1_cost(cols, 0.0);
    for (size_t c = 0; c < cols; ++c) {
      if (kind[c] == ColumnKind::kArtificial) phase1_cost[c] = -1.0;
    }
    if (RunPhase(t, phase1_cost, allowed) == PhaseResult::kIterationLimit) {
      return absl::InternalError("simplex phase 1 hit the pivot limit");
    }
    double infeasibility = 0.0;
    for (size_t r = 0; r < m; ++r) {
      if (kind[t.basic(r)] == ColumnKind::kArtificial) {
        infeasibility += t.rhs(r);
      }
    }
    if (infeasibility > kFeasibilityTolerance) {
      return LpSolution{LpStatus::kInfeasible, {}, 0.0};
    }
    // Pivot remaining zero-valued artificials out where possible. A row
    // with no usable column is redundant; its artificial stays basic at 0.
    for (size_t r = 0; r < m; ++r) {
      if (kind[t.basic(r)] != ColumnKind::kArtificial) continue;
      for (size_t c = 0; c < cols; ++c) {
        if (kind[c] != ColumnKind::kArtificial &&
            std::fabs(t.at(r, c)) > kPivotTolerance) {
          t.Pivot(r, c);
          break;
        }
      }
    }
    for (size_t c = 0; c < cols; ++c) {
      if (kind[c] == ColumnKind::kArtificial) allowed[c] = false;
    }
  }

  std::vector<double> cost(cols, 0.0);
  for (size_t j = 0; j < n; ++j) cost[j] = problem.objective[j];
  switch (RunPhase(t, cost, allowed)) {
    case PhaseResult::kUnbounded:
      return LpSolution{LpStatus::kUnbounded, {}, 0.0};
    case PhaseResult::kIterationLimit:
      return absl::InternalError("simplex phase 2 hit the pivot limit");
    case PhaseResult::kOptimal:
      break;
  }

  LpSolution solution;
  solution.status = LpStatus::kOptimal;
  solution.x.assign(n, 0.0);
  for (size_t r = 0; r < m; ++r) {
    if (t.basic(r) < n) solution.x[t.basic(r)] = t.rhs(r);
  }
  for (size_t j = 0; j < n; ++j) {
    solution.objective_value += problem.objective[j] * solution.x[j];
  }
  return solution;
}

}  // namespace elastic_serving
