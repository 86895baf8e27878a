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

#ifndef ELASTIC_SERVING_SERVING_SIM_H_
#define ELASTIC_SERVING_SERVING_SIM_H_

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "elastic_serving/duration.h"
#include "elastic_serving/profiles.h"
#include "elastic_serving/schedule_cache.h"
#include "elastic_serving/scheduler.h"
#include "elastic_serving/workload.h"

namespace elastic_serving {

// Wire form of one instance: <Instance, D, TaskID>.
struct QueueMessage {
  int64_t instance_ref = 0;
  Duration deadline{0};
  int64_t task_id = 0;
};

// Task metadata published ahead of a task's messages; it carries how many
// messages the consumer should collect and when the task arrived.
struct TaskHeader {
  int64_t task_id = 0;
  int64_t num_messages = 0;
  Timestamp arrival{0};
  Duration deadline{0};
};

struct RetrievedTask {
  TaskHeader header;
  std::vector<QueueMessage> messages;
  bool complete() const {
    return static_cast<int64_t>(messages.size()) == header.num_messages;
  }
};

// FIFO queue between the predictor and one inference worker.
class MessageQueue {
 public:
  void Publish(const TaskHeader& header) { headers_.push_back(header); }
  void Push(const QueueMessage& message) { messages_.push_back(message); }

  bool empty() const { return headers_.empty(); }
  size_t pending_tasks() const { return headers_.size(); }
  size_t pending_messages() const { return messages_.size(); }
  const TaskHeader& front() const { return headers_.front(); }

  // Pops the oldest header and up to header.num_messages messages carrying
  // its task id from the head of the message stream.
  std::optional<RetrievedTask> RetrieveNextTask();

 private:
  std::deque<TaskHeader> headers_;
  std::deque<QueueMessage> messages_;
};

// Splits `task` into messages. With one queue all messages go to it in
// order. With several, instances are cut into chunks of `mini_batch_size`
// (the last chunk takes the remainder) dealt round-robin, so each worker
// receives whole mini-batches.
absl::Status PredictorEnqueue(const PredictionTask& task,
                              int64_t mini_batch_size,
                              std::span<MessageQueue> queues);

struct ExpectedCorrectness {};
struct SampledCorrectness {
  uint64_t seed = 0;
};
using CorrectnessMode = std::variant<ExpectedCorrectness, SampledCorrectness>;

struct SchedulerConfig {
  ScheduleMethod method = ScheduleMethod::kAuto;
  SchedulerOptions options;
  size_t cache_capacity = 1024;
  Duration scheduling_overhead{0};
  // Static baseline: every task uses only this sub-model (1-based), running
  // as many mini-batches as fit before the deadline.
  std::optional<int> fixed_submodel;
  // By default each task is scheduled against its full deadline D, even if
  // it waited in the queue. When set, the scheduler instead sees the time
  // left until arrival + D at the moment the worker starts the task.
  bool use_remaining_deadline = false;
};

struct SimConfig {
  ProfileSet profiles;
  int num_workers = 1;
  CorrectnessMode correctness = ExpectedCorrectness{};
  SchedulerConfig scheduler;
  WorkloadSpec workload;
  // Run workers on separate threads. Results are bit-identical to the
  // single-threaded event order.
  bool parallel = false;
};

absl::Status ValidateSimConfig(const SimConfig& config);

struct ExecutedMiniBatch {
  int submodel = 0;  // 1-based
  int64_t instances = 0;
  Timestamp completion{0};
  bool on_time = false;
};

// Counts correct on-time instances: expected value, or Bernoulli draws from
// a per-worker seeded stream.
class CorrectnessModel {
 public:
  CorrectnessModel(const CorrectnessMode& mode, int worker_id);
  double CountCorrect(std::span<const ExecutedMiniBatch> batches,
                      const ProfileSet& profiles);

 private:
  bool sampled_;
  std::mt19937_64 rng_;
};

// Fraction of `total_instances` answered correctly before the deadline.
double MeasureEffectiveAccuracy(std::span<const ExecutedMiniBatch> batches,
                                int64_t total_instances,
                                const ProfileSet& profiles,
                                CorrectnessModel& correctness);

struct TaskResult {
  int64_t task_id = 0;
  int worker_id = 0;
  int64_t num_instances = 0;
  int64_t num_minibatches = 0;
  Timestamp arrival{0};
  Timestamp start{0};
  Timestamp finish{0};
  std::vector<int64_t> counts;  // scheduled mini-batches per sub-model
  SolverKind solver_used = SolverKind::kShortcut;
  double theoretical_p_eff = 0.0;
  int64_t on_time_instances = 0;
  double correct = 0.0;
};

struct LatencyBucket {
  int64_t latency_us = 0;
  int64_t instances = 0;
};

struct SimMetrics {
  int worker_id = -1;  // -1 for the global aggregate
  double theoretical_p_eff = 0.0;
  double measured_p_eff = 0.0;
  double on_time_fraction = 0.0;
  double drop_rate = 0.0;
  double throughput = 0.0;  // on-time instances per second of makespan
  double latency_p50_ms = 0.0;
  double latency_p95_ms = 0.0;
  double latency_p99_ms = 0.0;
  std::vector<int64_t> minibatches_per_submodel;
  int64_t total_instances = 0;
  int64_t on_time_instances = 0;
  int64_t skipped_tasks = 0;
  Timestamp first_arrival{0};
  Timestamp last_completion{0};
  std::vector<TaskResult> tasks;
  // Per-instance latency histogram of on-time instances, sorted.
  std::vector<LatencyBucket> latencies;
  std::vector<SimMetrics> per_worker;  // filled on the global aggregate
};

// One inference worker with its own virtual clock.
class InferenceWorker {
 public:
  InferenceWorker(int worker_id, const SimConfig& config, ScheduleCache& cache);

  Timestamp clock() const { return clock_; }

  // Schedules and executes one task no earlier than `now` and the task's
  // arrival. Incomplete tasks are skipped.
  absl::Status Process(const RetrievedTask& task, Timestamp now);

  SimMetrics Finish() const;

 private:
  int worker_id_;
  const SimConfig& config_;
  ScheduleCache& cache_;
  CorrectnessModel correctness_;
  std::vector<int> execution_order_;  // 0-based, descending accuracy
  Timestamp clock_{0};
  SimMetrics metrics_;
  double correct_ = 0.0;
  double theoretical_weighted_ = 0.0;
  bool saw_task_ = false;
};

// Drains `queue` in FIFO order on one worker.
absl::StatusOr<SimMetrics> WorkerProcess(int worker_id, MessageQueue& queue,
                                         const SimConfig& config,
                                         ScheduleCache& cache);

// Unweighted mean of the per-worker measured effective accuracy.
absl::StatusOr<double> GlobalEffectiveAccuracy(
    std::span<const SimMetrics> per_worker);

absl::StatusOr<SimMetrics> RunSimulation(const SimConfig& config);

}  // namespace elastic_serving

#endif  // ELASTIC_SERVING_SERVING_SIM_H_
