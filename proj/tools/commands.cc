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

#include "commands.h"

#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "elastic_serving/duration.h"
#include "elastic_serving/profiles.h"
#include "elastic_serving/scheduler.h"
#include "elastic_serving/sim_config.h"
#include "json.hpp"
#include "sweep.h"

#ifndef ELASTIC_SERVING_VERSION
#define ELASTIC_SERVING_VERSION "dev"
#endif

namespace elastic_serving {
namespace {

using nlohmann::json;

absl::StatusOr<SchedulerOptions> ToOptions(const SchedulerFlags& flags) {
  SchedulerOptions options;
  if (flags.node_budget < 0) {
    return absl::InvalidArgumentError("--node-budget must be >= 0");
  }
  options.node_budget = flags.node_budget;
  if (flags.dp_resolution) {
    auto r = ParseDuration(*flags.dp_resolution);
    if (!r.ok()) return r.status();
    if (*r <= Duration::zero()) {
      return absl::InvalidArgumentError("--dp-resolution must be positive");
    }
    options.dp_resolution = *r;
  }
  return options;
}

std::string FormatCounts(const std::vector<int64_t>& counts) {
  return absl::StrCat("[", absl::StrJoin(counts, ", "), "]");
}

json MetricsSummary(const SimMetrics& m) {
  return {{"theoretical_p_eff", m.theoretical_p_eff},
          {"measured_p_eff", m.measured_p_eff},
          {"on_time_fraction", m.on_time_fraction},
          {"drop_rate", m.drop_rate},
          {"throughput", m.throughput},
          {"p50_ms", m.latency_p50_ms},
          {"p95_ms", m.latency_p95_ms},
          {"p99_ms", m.latency_p99_ms},
          {"total_instances", m.total_instances},
          {"on_time_instances", m.on_time_instances},
          {"skipped_tasks", m.skipped_tasks},
          {"minibatches_per_submodel", m.minibatches_per_submodel}};
}

void PrintSummary(const SimMetrics& m, std::ostream& out) {
  out << absl::StrFormat(
      "instances %d, on time %d, drop rate %.4f\n"
      "p_eff theoretical %.6f, measured %.6f\n"
      "throughput %.2f inst/s, latency p50/p95/p99 %.2f/%.2f/%.2f ms\n"
      "mini-batches per sub-model %s\n",
      m.total_instances, m.on_time_instances, m.drop_rate, m.theoretical_p_eff,
      m.measured_p_eff, m.throughput, m.latency_p50_ms, m.latency_p95_ms,
      m.latency_p99_ms, FormatCounts(m.minibatches_per_submodel));
}

}  // namespace

std::string RunReportJson(const SimConfig& config, const SimMetrics& metrics) {
  json report;
  report["schema_version"] = kRunReportSchemaVersion;
  report["code_version"] = ELASTIC_SERVING_VERSION;
  report["config"] = json::parse(SimConfigToJson(config));
  report["summary"] = MetricsSummary(metrics);
  json workers = json::array();
  for (const SimMetrics& w : metrics.per_worker) {
    json entry = MetricsSummary(w);
    entry["worker_id"] = w.worker_id;
    workers.push_back(std::move(entry));
  }
  report["workers"] = std::move(workers);
  json rows = json::array();
  for (const TaskResult& t : metrics.tasks) {
    rows.push_back({{"task_id", t.task_id},
                    {"worker_id", t.worker_id},
                    {"num_instances", t.num_instances},
                    {"num_minibatches", t.num_minibatches},
                    {"arrival_us", t.arrival.count()},
                    {"start_us", t.start.count()},
                    {"finish_us", t.finish.count()},
                    {"counts", t.counts},
                    {"solver", std::string(SolverKindName(t.solver_used))},
                    {"theoretical_p_eff", t.theoretical_p_eff},
                    {"on_time_instances", t.on_time_instances},
                    {"correct", t.correct}});
  }
  report["rows"] = std::move(rows);
  return report.dump(2);
}

int RunScheduleCommand(const ScheduleArgs& args, std::ostream& out,
                       std::ostream& err) {
  auto profiles = LoadProfileSetFromFile(args.profile_path);
  if (!profiles.ok()) {
    err << "error: " << profiles.status().message() << "\n";
    return 1;
  }
  auto deadline = ParseDuration(args.deadline);
  if (!deadline.ok()) {
    err << "error: --deadline: " << deadline.status().message() << "\n";
    return 2;
  }
  auto method = ParseScheduleMethod(args.scheduler.method);
  if (!method.ok()) {
    err << "error: --method: " << method.status().message() << "\n";
    return 2;
  }
  auto options = ToOptions(args.scheduler);
  if (!options.ok()) {
    err << "error: " << options.status().message() << "\n";
    return 2;
  }
  const SchedulingInstance instance{*profiles, *deadline, args.num_minibatches};
  auto policy = SolveWith(*method, instance, *options);
  if (!policy.ok()) {
    err << "error: " << policy.status().message() << "\n";
    return 1;
  }
  out << absl::StrFormat("profile %s (K=%d, S_mb=%d)\n", profiles->name(),
                         profiles->size(), profiles->mini_batch_size());
  out << absl::StrFormat("deadline %s, mini-batches %d\n",
                         FormatDuration(*deadline), args.num_minibatches);
  out << "eta " << FormatCounts(policy->counts) << "\n";
  Duration used{0};
  for (const SubModelProfile& m : profiles->sub_models()) {
    const int64_t n = policy->counts[m.index - 1];
    used += m.batch_latency * n;
    out << absl::StrFormat("  r=%-5g p=%.4f t=%8.3fms n=%d\n", m.slice_rate,
                           m.accuracy, ToMillis(m.batch_latency), n);
  }
  out << absl::StrFormat("dropped %d, busy %.3fms of %.3fms\n",
                         args.num_minibatches - policy->total(), ToMillis(used),
                         ToMillis(*deadline));
  out << absl::StrFormat("p_eff %.6f\n", policy->theoretical_effective_accuracy);
  out << "solver " << SolverKindName(policy->solver_used) << "\n";
  return 0;
}

int RunSweepCommand(const SweepArgs& args, std::ostream& out,
                    std::ostream& err) {
  auto profiles = LoadProfileSetFromFile(args.profile_path);
  if (!profiles.ok()) {
    err << "error: " << profiles.status().message() << "\n";
    return 1;
  }
  auto deadline = ParseDuration(args.deadline);
  if (!deadline.ok()) {
    err << "error: --deadline: " << deadline.status().message() << "\n";
    return 2;
  }
  auto rates = ParseRates(args.rates);
  if (!rates.ok()) {
    err << "error: " << rates.status().message() << "\n";
    return 2;
  }
  auto method = ParseScheduleMethod(args.scheduler.method);
  if (!method.ok()) {
    err << "error: --method: " << method.status().message() << "\n";
    return 2;
  }
  auto options = ToOptions(args.scheduler);
  if (!options.ok()) {
    err << "error: " << options.status().message() << "\n";
    return 2;
  }
  SweepOptions sweep;
  sweep.deadline = *deadline;
  sweep.num_workers = args.workers;
  if (args.seed) sweep.correctness = SampledCorrectness{*args.seed};
  sweep.scheduler.method = *method;
  sweep.scheduler.options = *options;
  sweep.scheduler.fixed_submodel = args.fixed_submodel;
  sweep.parallel = args.parallel;

  auto rows = RunSweep(*profiles, *rates, sweep);
  if (!rows.ok()) {
    err << "error: " << rows.status().message() << "\n";
    return 1;
  }

  std::ostringstream csv;
  WriteSweepCsv(*profiles, *rows, csv);
  if (args.out_path.empty()) {
    out << csv.str();
    return 0;
  }
  std::ofstream file(args.out_path, std::ios::binary | std::ios::trunc);
  if (!file || !(file << csv.str()) || !file.flush()) {
    err << "error: cannot write '" << args.out_path << "'\n";
    return 1;
  }
  out << absl::StrFormat("wrote %d rows to %s\n", rows->size(), args.out_path);
  return 0;
}

int RunSimulateCommand(const SimulateArgs& args, std::ostream& out,
                       std::ostream& err) {
  auto config = LoadSimConfigFromFile(args.config_path);
  if (!config.ok()) {
    err << "error: " << args.config_path << ": " << config.status().message()
        << "\n";
    return 1;
  }
  auto metrics = RunSimulation(*config);
  if (!metrics.ok()) {
    err << "error: " << metrics.status().message() << "\n";
    return 1;
  }
  PrintSummary(*metrics, out);
  if (!args.out_path.empty()) {
    std::ofstream file(args.out_path, std::ios::binary | std::ios::trunc);
    if (!file || !(file << RunReportJson(*config, *metrics) << "\n") ||
        !file.flush()) {
      err << "error: cannot write '" << args.out_path << "'\n";
      return 1;
    }
  }
  if (!args.csv_path.empty()) {
    std::ofstream file(args.csv_path, std::ios::binary | std::ios::trunc);
    file << "task_id,worker_id,num_instances,num_minibatches,arrival_ms,"
            "finish_ms";
    for (const SubModelProfile& m : config->profiles.sub_models()) {
      file << absl::StrFormat(",n_r%g", m.slice_rate);
    }
    file << ",theoretical_p_eff,on_time_instances\n";
    for (const TaskResult& t : metrics->tasks) {
      file << absl::StrFormat("%d,%d,%d,%d,%.3f,%.3f", t.task_id, t.worker_id,
                              t.num_instances, t.num_minibatches,
                              ToMillis(t.arrival), ToMillis(t.finish));
      for (int64_t n : t.counts) file << "," << n;
      file << absl::StrFormat(",%.9f,%d\n", t.theoretical_p_eff,
                              t.on_time_instances);
    }
    if (!file.flush()) {
      err << "error: cannot write '" << args.csv_path << "'\n";
      return 1;
    }
  }
  return 0;
}

int RunValidateProfileCommand(const ValidateArgs& args, std::ostream& out,
                              std::ostream& err) {
  std::ifstream in(args.profile_path);
  if (!in) {
    err << "error: cannot open profile file '" << args.profile_path << "'\n";
    return 1;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  const ProfileDiagnostics diagnostics = ValidateProfileDocument(buffer.str());
  for (const std::string& w : diagnostics.warnings) {
    out << "warning: " << w << "\n";
  }
  if (!diagnostics.ok()) {
    for (const std::string& e : diagnostics.errors) {
      err << "error: " << e << "\n";
    }
    return 1;
  }
  auto profiles = LoadProfileSet(buffer.str());
  if (!profiles.ok()) {
    err << "error: " << profiles.status().message() << "\n";
    return 1;
  }
  std::vector<std::string> workloads;
  for (const SubModelProfile& m : profiles->sub_models()) {
    workloads.push_back(
        absl::StrFormat("%.2f", *MaxWorkload(*profiles, m.index)));
  }
  out << absl::StrFormat("OK %s: K=%d, S_mb=%d\n", profiles->name(),
                         profiles->size(), profiles->mini_batch_size());
  out << "max_workload_inst_per_s [" << absl::StrJoin(workloads, ", ") << "]\n";
  return 0;
}

}  // namespace elastic_serving
