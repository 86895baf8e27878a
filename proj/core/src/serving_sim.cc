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

#include "elastic_serving/serving_sim.h"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <queue>
#include <thread>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace elastic_serving {
namespace {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double UnitUniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int64_t CeilDiv(int64_t a, int64_t b) { return (a + b - 1) / b; }

// Nearest-rank percentile over an instance-weighted histogram.
double PercentileMs(const std::vector<LatencyBucket>& sorted, double q) {
  const int64_t total = std::accumulate(
      sorted.begin(), sorted.end(), int64_t{0},
      [](int64_t acc, const LatencyBucket& b) { return acc + b.instances; });
  if (total == 0) return 0.0;
  const auto rank = static_cast<int64_t>(
      std::max(1.0, std::ceil(q * static_cast<double>(total))));
  int64_t seen = 0;
  for (const LatencyBucket& b : sorted) {
    seen += b.instances;
    if (seen >= rank) return static_cast<double>(b.latency_us) / 1e3;
  }
  return static_cast<double>(sorted.back().latency_us) / 1e3;
}

std::vector<LatencyBucket> Compact(std::vector<LatencyBucket> buckets) {
  std::sort(buckets.begin(), buckets.end(),
            [](const LatencyBucket& a, const LatencyBucket& b) {
              return a.latency_us < b.latency_us;
            });
  std::vector<LatencyBucket> out;
  for (const LatencyBucket& b : buckets) {
    if (!out.empty() && out.back().latency_us == b.latency_us) {
      out.back().instances += b.instances;
    } else {
      out.push_back(b);
    }
  }
  return out;
}

void FillDerived(SimMetrics& m) {
  m.on_time_fraction =
      m.total_instances > 0
          ? static_cast<double>(m.on_time_instances) /
                static_cast<double>(m.total_instances)
          : 0.0;
  m.drop_rate = m.total_instances > 0 ? 1.0 - m.on_time_fraction : 0.0;
  const double makespan_s = ToSeconds(m.last_completion - m.first_arrival);
  m.throughput = makespan_s > 0.0
                     ? static_cast<double>(m.on_time_instances) / makespan_s
                     : 0.0;
  m.latency_p50_ms = PercentileMs(m.latencies, 0.50);
  m.latency_p95_ms = PercentileMs(m.latencies, 0.95);
  m.latency_p99_ms = PercentileMs(m.latencies, 0.99);
}

}  // namespace

std::optional<RetrievedTask> MessageQueue::RetrieveNextTask() {
  if (headers_.empty()) return std::nullopt;
  RetrievedTask task;
  task.header = headers_.front();
  headers_.pop_front();
  while (!messages_.empty() &&
         messages_.front().task_id == task.header.task_id &&
         static_cast<int64_t>(task.messages.size()) <
             task.header.num_messages) {
    task.messages.push_back(messages_.front());
    messages_.pop_front();
  }
  return task;
}

absl::Status PredictorEnqueue(const PredictionTask& task,
                              int64_t mini_batch_size,
                              std::span<MessageQueue> queues) {
  if (queues.empty()) {
    return absl::InvalidArgumentError("predictor needs at least one queue");
  }
  if (mini_batch_size < 1) {
    return absl::InvalidArgumentError("mini-batch size must be >= 1");
  }
  const int64_t b = static_cast<int64_t>(queues.size());
  const int64_t chunks = CeilDiv(task.num_instances, mini_batch_size);
  std::vector<int64_t> per_queue(b, 0);
  for (int64_t c = 0; c < chunks; ++c) {
    const int64_t begin = c * mini_batch_size;
    per_queue[c % b] +=
        std::min(task.num_instances, begin + mini_batch_size) - begin;
  }
  for (int64_t q = 0; q < b; ++q) {
    if (per_queue[q] == 0) continue;
    queues[q].Publish(
        TaskHeader{task.task_id, per_queue[q], task.arrival, task.deadline});
  }
  for (int64_t c = 0; c < chunks; ++c) {
    const int64_t begin = c * mini_batch_size;
    const int64_t end = std::min(task.num_instances, begin + mini_batch_size);
    for (int64_t i = begin; i < end; ++i) {
      queues[c % b].Push(QueueMessage{i, task.deadline, task.task_id});
    }
  }
  return absl::OkStatus();
}

absl::Status ValidateSimConfig(const SimConfig& config) {
  if (config.num_workers < 1) {
    return absl::InvalidArgumentError("num_workers: must be >= 1");
  }
  if (const auto& fixed = config.scheduler.fixed_submodel;
      fixed && (*fixed < 1 || *fixed > config.profiles.size())) {
    return absl::InvalidArgumentError(
        absl::StrFormat("scheduler.fixed_submodel: must be in [1, %d]",
                        config.profiles.size()));
  }
  if (config.scheduler.options.node_budget < 0) {
    return absl::InvalidArgumentError("scheduler.node_budget: must be >= 0");
  }
  if (const auto& r = config.scheduler.options.dp_resolution;
      r && *r <= Duration::zero()) {
    return absl::InvalidArgumentError(
        "scheduler.dp_resolution: must be positive");
  }
  if (config.scheduler.scheduling_overhead < Duration::zero()) {
    return absl::InvalidArgumentError(
        "scheduler.scheduling_overhead: must be >= 0");
  }
  if (auto s = ValidateWorkload(config.workload); !s.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("workload.", s.message()));
  }
  return absl::OkStatus();
}

CorrectnessModel::CorrectnessModel(const CorrectnessMode& mode, int worker_id)
    : sampled_(std::holds_alternative<SampledCorrectness>(mode)) {
  if (sampled_) {
    const uint64_t seed = std::get<SampledCorrectness>(mode).seed;
    rng_.seed(SplitMix64(seed ^ SplitMix64(static_cast<uint64_t>(worker_id))));
  }
}

double CorrectnessModel::CountCorrect(
    std::span<const ExecutedMiniBatch> batches, const ProfileSet& profiles) {
  double correct = 0.0;
  for (const ExecutedMiniBatch& b : batches) {
    if (!b.on_time) continue;
    const double p = profiles.at(b.submodel).accuracy;
    if (!sampled_) {
      correct += p * static_cast<double>(b.instances);
      continue;
    }
    int64_t hits = 0;
    for (int64_t i = 0; i < b.instances; ++i) {
      if (UnitUniform(rng_) < p) ++hits;
    }
    correct += static_cast<double>(hits);
  }
  return correct;
}

double MeasureEffectiveAccuracy(std::span<const ExecutedMiniBatch> batches,
                                int64_t total_instances,
                                const ProfileSet& profiles,
                                CorrectnessModel& correctness) {
  if (total_instances <= 0) return 0.0;
  return correctness.CountCorrect(batches, profiles) /
         static_cast<double>(total_instances);
}

InferenceWorker::InferenceWorker(int worker_id, const SimConfig& config,
                                 ScheduleCache& cache)
    : worker_id_(worker_id),
      config_(config),
      cache_(cache),
      correctness_(config.correctness, worker_id) {
  const auto& models = config.profiles.sub_models();
  execution_order_.resize(models.size());
  std::iota(execution_order_.begin(), execution_order_.end(), 0);
  std::stable_sort(execution_order_.begin(), execution_order_.end(),
                   [&](int a, int b) {
                     if (models[a].accuracy != models[b].accuracy) {
                       return models[a].accuracy > models[b].accuracy;
                     }
                     return models[a].slice_rate > models[b].slice_rate;
                   });
  metrics_.worker_id = worker_id;
  metrics_.minibatches_per_submodel.assign(models.size(), 0);
}

absl::Status InferenceWorker::Process(const RetrievedTask& task,
                                      Timestamp now) {
  if (!task.complete()) {
    std::cerr << absl::StreamFormat(
        "worker %d: skipping task %d, got %d of %d messages\n", worker_id_,
        task.header.task_id, task.messages.size(), task.header.num_messages);
    ++metrics_.skipped_tasks;
    return absl::OkStatus();
  }
  const ProfileSet& profiles = config_.profiles;
  const auto& models = profiles.sub_models();
  const int64_t s_mb = profiles.mini_batch_size();
  const int64_t n = task.header.num_messages;
  const int64_t n_mb = CeilDiv(n, s_mb);
  const Timestamp due = task.header.arrival + task.header.deadline;

  TaskResult result;
  result.task_id = task.header.task_id;
  result.worker_id = worker_id_;
  result.num_instances = n;
  result.num_minibatches = n_mb;
  result.arrival = task.header.arrival;
  result.start = std::max({now, clock_, task.header.arrival});

  const Timestamp ready = result.start + config_.scheduler.scheduling_overhead;
  const Duration deadline = config_.scheduler.use_remaining_deadline
                                ? due - ready
                                : task.header.deadline;
  const SchedulingInstance instance{profiles, deadline, n_mb};

  if (deadline <= Duration::zero()) {
    result.counts.assign(models.size(), 0);
    result.solver_used = SolverKind::kShortcut;
  } else if (const auto& fixed = config_.scheduler.fixed_submodel) {
    result.counts.assign(models.size(), 0);
    result.counts[*fixed - 1] =
        std::min(n_mb, deadline / models[*fixed - 1].batch_latency);
    result.solver_used = SolverKind::kShortcut;
    auto value = EffectiveAccuracy(result.counts, instance);
    if (!value.ok()) return value.status();
    result.theoretical_p_eff = *value;
  } else {
    auto scheduled = CacheLookupOrSchedule(cache_, instance,
                                           config_.scheduler.options,
                                           config_.scheduler.method);
    if (!scheduled.ok()) return scheduled.status();
    result.counts = scheduled->policy.counts;
    result.solver_used = scheduled->policy.solver_used;
    result.theoretical_p_eff = scheduled->policy.theoretical_effective_accuracy;
  }

  // Mini-batches are taken in order, so a short final batch runs last.
  Timestamp clock = ready;
  std::vector<ExecutedMiniBatch> executed;
  int64_t next_batch = 0;
  for (int i : execution_order_) {
    for (int64_t j = 0; j < result.counts[i] && next_batch < n_mb; ++j) {
      const int64_t begin = next_batch * s_mb;
      const int64_t size = std::min(n, begin + s_mb) - begin;
      clock += models[i].batch_latency;
      executed.push_back({i + 1, size, clock, clock <= due});
      ++next_batch;
    }
    metrics_.minibatches_per_submodel[i] += result.counts[i];
  }
  result.finish = clock;

  for (const ExecutedMiniBatch& b : executed) {
    if (!b.on_time) continue;
    result.on_time_instances += b.instances;
    metrics_.latencies.push_back(
        {(b.completion - task.header.arrival).count(), b.instances});
  }
  result.correct = correctness_.CountCorrect(executed, profiles);

  if (!saw_task_) {
    metrics_.first_arrival = task.header.arrival;
    saw_task_ = true;
  }
  metrics_.first_arrival = std::min(metrics_.first_arrival, result.arrival);
  metrics_.last_completion = std::max(metrics_.last_completion, result.finish);
  metrics_.total_instances += n;
  metrics_.on_time_instances += result.on_time_instances;
  correct_ += result.correct;
  theoretical_weighted_ += result.theoretical_p_eff * static_cast<double>(n);
  clock_ = result.finish;
  metrics_.tasks.push_back(std::move(result));
  return absl::OkStatus();
}

SimMetrics InferenceWorker::Finish() const {
  SimMetrics m = metrics_;
  m.latencies = Compact(std::move(m.latencies));
  if (m.total_instances > 0) {
    const auto total = static_cast<double>(m.total_instances);
    m.measured_p_eff = correct_ / total;
    m.theoretical_p_eff = theoretical_weighted_ / total;
  }
  FillDerived(m);
  return m;
}

absl::StatusOr<SimMetrics> WorkerProcess(int worker_id, MessageQueue& queue,
                                         const SimConfig& config,
                                         ScheduleCache& cache) {
  InferenceWorker worker(worker_id, config, cache);
  while (auto task = queue.RetrieveNextTask()) {
    if (auto s = worker.Process(*task, worker.clock()); !s.ok()) return s;
  }
  return worker.Finish();
}

absl::StatusOr<double> GlobalEffectiveAccuracy(
    std::span<const SimMetrics> per_worker) {
  if (per_worker.empty()) {
    return absl::InvalidArgumentError("no worker results to average");
  }
  double sum = 0.0;
  for (const SimMetrics& m : per_worker) sum += m.measured_p_eff;
  return sum / static_cast<double>(per_worker.size());
}

namespace {

struct Event {
  Timestamp time;
  int actor;  // -1 is the predictor, otherwise a worker id
  int64_t sequence;
  size_t task_index;  // predictor events only
};

struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    if (a.actor != b.actor) return a.actor > b.actor;
    return a.sequence > b.sequence;
  }
};

// Single-threaded event loop over arrivals and worker wake-ups, ordered by
// (time, actor, sequence).
absl::Status RunEventLoop(const std::vector<PredictionTask>& tasks,
                          std::vector<MessageQueue>& queues,
                          std::vector<InferenceWorker>& workers,
                          int64_t mini_batch_size) {
  std::priority_queue<Event, std::vector<Event>, EventAfter> events;
  int64_t sequence = 0;
  for (size_t i = 0; i < tasks.size(); ++i) {
    events.push({tasks[i].arrival, -1, sequence++, i});
  }
  std::vector<bool> idle(workers.size(), true);
  while (!events.empty()) {
    const Event ev = events.top();
    events.pop();
    if (ev.actor < 0) {
      if (auto s = PredictorEnqueue(tasks[ev.task_index], mini_batch_size,
                                    queues);
          !s.ok()) {
        return s;
      }
      for (size_t w = 0; w < workers.size(); ++w) {
        if (idle[w] && !queues[w].empty()) {
          idle[w] = false;
          events.push({ev.time, static_cast<int>(w), sequence++, 0});
        }
      }
      continue;
    }
    const auto w = static_cast<size_t>(ev.actor);
    auto task = queues[w].RetrieveNextTask();
    if (!task) {
      idle[w] = true;
      continue;
    }
    if (auto s = workers[w].Process(*task, ev.time); !s.ok()) return s;
    events.push({std::max(workers[w].clock(), ev.time), ev.actor, sequence++,
                 0});
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<SimMetrics> RunSimulation(const SimConfig& config) {
  if (auto s = ValidateSimConfig(config); !s.ok()) return s;
  auto tasks = GenerateTasks(config.workload);
  if (!tasks.ok()) return tasks.status();

  const int b = config.num_workers;
  const int64_t s_mb = config.profiles.mini_batch_size();
  ScheduleCache cache(config.scheduler.cache_capacity);
  std::vector<MessageQueue> queues(b);
  std::vector<SimMetrics> per_worker(b);

  if (config.parallel) {
    // Workers never interact after partitioning, so each can drain its own
    // queue independently.
    for (const PredictionTask& task : *tasks) {
      if (auto s = PredictorEnqueue(task, s_mb, queues); !s.ok()) return s;
    }
    std::vector<absl::Status> statuses(b);
    std::vector<std::thread> threads;
    threads.reserve(b);
    for (int w = 0; w < b; ++w) {
      threads.emplace_back([&, w] {
        auto m = WorkerProcess(w, queues[w], config, cache);
        if (m.ok()) {
          per_worker[w] = *std::move(m);
        } else {
          statuses[w] = m.status();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (const auto& s : statuses) {
      if (!s.ok()) return s;
    }
  } else {
    std::vector<InferenceWorker> workers;
    workers.reserve(b);
    for (int w = 0; w < b; ++w) workers.emplace_back(w, config, cache);
    if (auto s = RunEventLoop(*tasks, queues, workers, s_mb); !s.ok()) {
      return s;
    }
    for (int w = 0; w < b; ++w) per_worker[w] = workers[w].Finish();
  }

  SimMetrics global;
  global.minibatches_per_submodel.assign(config.profiles.size(), 0);
  std::vector<SimMetrics> served;
  std::vector<LatencyBucket> latencies;
  bool any = false;
  for (const SimMetrics& m : per_worker) {
    global.total_instances += m.total_instances;
    global.on_time_instances += m.on_time_instances;
    global.skipped_tasks += m.skipped_tasks;
    for (size_t i = 0; i < m.minibatches_per_submodel.size(); ++i) {
      global.minibatches_per_submodel[i] += m.minibatches_per_submodel[i];
    }
    latencies.insert(latencies.end(), m.latencies.begin(), m.latencies.end());
    global.tasks.insert(global.tasks.end(), m.tasks.begin(), m.tasks.end());
    if (m.total_instances == 0) continue;
    served.push_back(m);
    global.first_arrival =
        any ? std::min(global.first_arrival, m.first_arrival) : m.first_arrival;
    global.last_completion = std::max(global.last_completion, m.last_completion);
    any = true;
  }
  std::stable_sort(global.tasks.begin(), global.tasks.end(),
                   [](const TaskResult& a, const TaskResult& b) {
                     if (a.task_id != b.task_id) return a.task_id < b.task_id;
                     return a.worker_id < b.worker_id;
                   });
  global.latencies = Compact(std::move(latencies));
  if (!served.empty()) {
    global.measured_p_eff = *GlobalEffectiveAccuracy(served);
    double theoretical = 0.0;
    for (const SimMetrics& m : served) theoretical += m.theoretical_p_eff;
    global.theoretical_p_eff =
        theoretical / static_cast<double>(served.size());
  }
  FillDerived(global);
  global.per_worker = std::move(per_worker);
  return global;
}

}  // namespace elastic_serving
