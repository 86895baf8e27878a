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

#include <random>

#include "gtest/gtest.h"
#include "test_oracles.h"

namespace elastic_serving {
namespace {

LpConstraint Row(std::vector<double> a, Relation rel, double b) {
  return LpConstraint{std::move(a), rel, b};
}

// maximize (0.90 n1 + 0.85 n2 + 0.74 n3 + 0.70 n4) / 4
// s.t. sum n <= 4, 6 n1 + 4 n2 + 2 n3 + n4 <= 8, n >= 0.
LpProblem FourModelRelaxation() {
  LpProblem lp;
  lp.num_vars = 4;
  lp.objective = {0.90 / 4, 0.85 / 4, 0.74 / 4, 0.70 / 4};
  lp.constraints.push_back(Row({1, 1, 1, 1}, Relation::kLessEqual, 4));
  lp.constraints.push_back(Row({6, 4, 2, 1}, Relation::kLessEqual, 8));
  return lp;
}

TEST(SolveLpTest, OneVariable) {
  LpProblem lp{1, {1.0}, {Row({1.0}, Relation::kLessEqual, 3.0)}};
  auto sol = SolveLp(lp);
  ASSERT_TRUE(sol.ok());
  ASSERT_EQ(sol->status, LpStatus::kOptimal);
  EXPECT_NEAR(sol->x[0], 3.0, 1e-12);
  EXPECT_NEAR(sol->objective_value, 3.0, 1e-12);
}

TEST(SolveLpTest, Infeasible) {
  LpProblem lp{1, {1.0}, {Row({1.0}, Relation::kLessEqual, -1.0)}};
  auto sol = SolveLp(lp);
  ASSERT_TRUE(sol.ok());
  EXPECT_EQ(sol->status, LpStatus::kInfeasible);

  LpProblem conflicting{2, {1.0, 1.0},
                        {Row({1, 1}, Relation::kLessEqual, 2),
                         Row({1, 0}, Relation::kGreaterEqual, 3)}};
  EXPECT_EQ(SolveLp(conflicting)->status, LpStatus::kInfeasible);
}

TEST(SolveLpTest, Unbounded) {
  LpProblem lp{2, {1.0, 0.0}, {Row({0, 1}, Relation::kLessEqual, 1)}};
  EXPECT_EQ(SolveLp(lp)->status, LpStatus::kUnbounded);
}

TEST(SolveLpTest, DimensionMismatch) {
  LpProblem bad_objective{2, {1.0}, {}};
  EXPECT_FALSE(SolveLp(bad_objective).ok());
  LpProblem bad_row{2, {1.0, 1.0}, {Row({1.0}, Relation::kLessEqual, 1)}};
  EXPECT_FALSE(SolveLp(bad_row).ok());
}

TEST(SolveLpTest, FourModelRelaxationBoundsIntegerOptimum) {
  const LpProblem lp = FourModelRelaxation();
  auto sol = SolveLp(lp);
  ASSERT_TRUE(sol.ok());
  ASSERT_EQ(sol->status, LpStatus::kOptimal);
  const auto oracle = testing::VertexEnumerationLp(lp);
  ASSERT_TRUE(oracle.has_value());
  EXPECT_NEAR(sol->objective_value, *oracle, 1e-9);
  // Vertex n2 = 4/3, n4 = 8/3 gives exactly 0.75.
  EXPECT_NEAR(sol->objective_value, 0.75, 1e-9);
  EXPECT_GE(sol->objective_value, 0.7475 - 1e-9);
}

TEST(SolveLpTest, GreaterEqualRowsNeedPhaseOne) {
  // maximize x + y s.t. x + y <= 4, x >= 1, y >= 2.5.
  LpProblem lp{2, {1.0, 1.0},
               {Row({1, 1}, Relation::kLessEqual, 4),
                Row({1, 0}, Relation::kGreaterEqual, 1),
                Row({0, 1}, Relation::kGreaterEqual, 2.5)}};
  auto sol = SolveLp(lp);
  ASSERT_EQ(sol->status, LpStatus::kOptimal);
  EXPECT_NEAR(sol->objective_value, 4.0, 1e-9);
  EXPECT_GE(sol->x[0], 1.0 - 1e-9);
  EXPECT_GE(sol->x[1], 2.5 - 1e-9);
}

TEST(SolveLpTest, DegenerateAndRedundantRows) {
  LpProblem lp{2, {1.0, 2.0},
               {Row({1, 1}, Relation::kLessEqual, 2),
                Row({1, 1}, Relation::kLessEqual, 2),
                Row({2, 2}, Relation::kGreaterEqual, 4),
                Row({1, 0}, Relation::kGreaterEqual, 0)}};
  auto sol = SolveLp(lp);
  ASSERT_EQ(sol->status, LpStatus::kOptimal);
  EXPECT_NEAR(sol->objective_value, 4.0, 1e-9);
}

// Random bounded LPs: agreement with vertex enumeration, feasibility of the
// returned point, weak duality against integer points, determinism.
TEST(SolveLpTest, MatchesVertexEnumerationOnRandomProblems) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> coef(0.0, 5.0);
  std::uniform_int_distribution<int> n_dist(1, 4);
  std::uniform_int_distribution<int> extra_dist(0, 3);
  for (int trial = 0; trial < 400; ++trial) {
    const int n = n_dist(rng);
    LpProblem lp;
    lp.num_vars = n;
    for (int j = 0; j < n; ++j) lp.objective.push_back(coef(rng));
    // Bounding row keeps the polytope compact.
    lp.constraints.push_back(
        Row(std::vector<double>(n, 1.0), Relation::kLessEqual, 1 + coef(rng)));
    const int extra = extra_dist(rng);
    for (int r = 0; r < extra; ++r) {
      std::vector<double> a(n);
      for (double& v : a) v = coef(rng);
      const bool ge = rng() % 3 == 0;
      lp.constraints.push_back(Row(
          a, ge ? Relation::kGreaterEqual : Relation::kLessEqual,
          ge ? coef(rng) / 2 : coef(rng) * 2));
    }
    auto sol = SolveLp(lp);
    ASSERT_TRUE(sol.ok());
    const auto oracle = testing::VertexEnumerationLp(lp);
    if (!oracle) {
      EXPECT_EQ(sol->status, LpStatus::kInfeasible) << "trial " << trial;
      continue;
    }
    ASSERT_EQ(sol->status, LpStatus::kOptimal) << "trial " << trial;
    EXPECT_NEAR(sol->objective_value, *oracle, 1e-7) << "trial " << trial;

    for (double v : sol->x) EXPECT_GE(v, -kFeasibilityTolerance);
    for (const LpConstraint& c : lp.constraints) {
      double lhs = 0.0;
      for (int j = 0; j < n; ++j) lhs += c.coefficients[j] * sol->x[j];
      if (c.relation == Relation::kLessEqual) {
        EXPECT_LE(lhs, c.bound + 1e-7);
      } else {
        EXPECT_GE(lhs, c.bound - 1e-7);
      }
    }

    // Integer points on a small grid never beat the relaxation.
    std::vector<int> z(n, 0);
    std::function<void(int)> grid = [&](int j) {
      if (j == n) {
        bool feasible = true;
        for (const LpConstraint& c : lp.constraints) {
          double lhs = 0.0;
          for (int i = 0; i < n; ++i) lhs += c.coefficients[i] * z[i];
          feasible &= c.relation == Relation::kLessEqual ? lhs <= c.bound
                                                         : lhs >= c.bound;
        }
        if (!feasible) return;
        double value = 0.0;
        for (int i = 0; i < n; ++i) value += lp.objective[i] * z[i];
        EXPECT_LE(value, sol->objective_value + kObjectiveTolerance);
        return;
      }
      for (z[j] = 0; z[j] <= 6; ++z[j]) grid(j + 1);
    };
    grid(0);

    auto again = SolveLp(lp);
    EXPECT_EQ(again->x, sol->x);
    EXPECT_EQ(again->objective_value, sol->objective_value);
  }
}

}  // namespace
}  // namespace elastic_serving
