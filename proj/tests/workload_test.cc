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

#include <chrono>
#include <vector>

#include "gtest/gtest.h"

namespace elastic_serving {
namespace {

using std::chrono::seconds;

TEST(WorkloadTest, SingleTaskArrivesAtZero) {
  auto tasks = GenerateTasks(SingleTaskWorkload{128, seconds(8)});
  ASSERT_TRUE(tasks.ok());
  ASSERT_EQ(tasks->size(), 1u);
  EXPECT_EQ((*tasks)[0],
            (PredictionTask{1, 128, seconds(8), Timestamp(0)}));
}

TEST(WorkloadTest, RateSweepCoversThirtyTwoToThirtyThousand) {
  RateSweepWorkload sweep;
  for (int r = 4; r <= 3748; r += 4) sweep.rates.push_back(r);
  sweep.rates.push_back(3750);
  sweep.deadline = seconds(8);
  sweep.spacing = seconds(10);
  auto tasks = GenerateTasks(sweep);
  ASSERT_TRUE(tasks.ok());
  ASSERT_EQ(tasks->size(), sweep.rates.size());
  EXPECT_EQ(tasks->front().num_instances, 32);
  EXPECT_EQ(tasks->back().num_instances, 30000);
  for (size_t i = 0; i < tasks->size(); ++i) {
    EXPECT_EQ((*tasks)[i].task_id, static_cast<int64_t>(i) + 1);
    EXPECT_EQ((*tasks)[i].num_instances,
              static_cast<int64_t>(sweep.rates[i]) * 8);
    EXPECT_EQ((*tasks)[i].arrival, seconds(10) * static_cast<int64_t>(i));
  }
}

TEST(WorkloadTest, InstancesForRateRounds) {
  EXPECT_EQ(InstancesForRate(709.22, seconds(8)), 5674);
  EXPECT_EQ(InstancesForRate(0.1, seconds(8)), 1);
  EXPECT_EQ(InstancesForRate(2040.8, seconds(8)), 16326);
}

PoissonWorkload SamplePoisson(uint64_t seed) {
  PoissonWorkload w;
  w.tasks_per_second = 3.0;
  w.task_size = UniformTaskSize{1, 500};
  w.deadline = seconds(2);
  w.horizon = seconds(60);
  w.seed = seed;
  return w;
}

TEST(WorkloadTest, PoissonIsDeterministicPerSeed) {
  auto a = GenerateTasks(SamplePoisson(42));
  auto b = GenerateTasks(SamplePoisson(42));
  auto c = GenerateTasks(SamplePoisson(43));
  ASSERT_TRUE(a.ok());
  ASSERT_TRUE(b.ok());
  ASSERT_TRUE(c.ok());
  EXPECT_EQ(*a, *b);
  EXPECT_NE(*a, *c);
}

TEST(WorkloadTest, PoissonArrivalsAreOrderedAndBounded) {
  auto tasks = GenerateTasks(SamplePoisson(7));
  ASSERT_TRUE(tasks.ok());
  // 180 expected arrivals; a loose band keeps this robust.
  EXPECT_GT(tasks->size(), 120u);
  EXPECT_LT(tasks->size(), 240u);
  Timestamp prev{0};
  for (const PredictionTask& t : *tasks) {
    EXPECT_GE(t.arrival, prev);
    EXPECT_LT(t.arrival, seconds(60));
    EXPECT_GE(t.num_instances, 1);
    EXPECT_LE(t.num_instances, 500);
    EXPECT_EQ(t.deadline, seconds(2));
    prev = t.arrival;
  }
}

TEST(WorkloadTest, PoissonMayProduceNoTasks) {
  PoissonWorkload w = SamplePoisson(1);
  w.tasks_per_second = 1e-6;
  w.horizon = Duration(1);
  auto tasks = GenerateTasks(w);
  ASSERT_TRUE(tasks.ok());
  EXPECT_TRUE(tasks->empty());
}

TEST(WorkloadTest, RejectsInvalidSpecs) {
  EXPECT_FALSE(ValidateWorkload(SingleTaskWorkload{0, seconds(8)}).ok());
  EXPECT_FALSE(ValidateWorkload(SingleTaskWorkload{1, seconds(0)}).ok());
  EXPECT_FALSE(ValidateWorkload(RateSweepWorkload{{}, seconds(8), {}}).ok());
  EXPECT_FALSE(
      ValidateWorkload(RateSweepWorkload{{10, -1}, seconds(8), {}}).ok());
  EXPECT_FALSE(
      ValidateWorkload(RateSweepWorkload{{0.01}, seconds(8), {}}).ok());
  PoissonWorkload p = SamplePoisson(1);
  p.task_size = UniformTaskSize{5, 4};
  EXPECT_FALSE(ValidateWorkload(p).ok());
  p = SamplePoisson(1);
  p.horizon = Duration(0);
  EXPECT_FALSE(ValidateWorkload(p).ok());
  EXPECT_FALSE(GenerateTasks(SingleTaskWorkload{0, seconds(1)}).ok());
}

}  // namespace
}  // namespace elastic_serving
