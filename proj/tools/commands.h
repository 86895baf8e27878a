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

#ifndef ELASTIC_SERVING_TOOLS_COMMANDS_H_
#define ELASTIC_SERVING_TOOLS_COMMANDS_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "elastic_serving/serving_sim.h"

namespace elastic_serving {

inline constexpr int kRunReportSchemaVersion = 1;

// Flags shared by the scheduling-related subcommands. Durations keep their
// unit suffix until a command parses them.
struct SchedulerFlags {
  std::string method = "auto";
  std::optional<std::string> dp_resolution;
  int64_t node_budget = 100000;
};

struct ScheduleArgs {
  std::string profile_path;
  std::string deadline;
  int64_t num_minibatches = 0;
  SchedulerFlags scheduler;
};

struct SweepArgs {
  std::string profile_path;
  std::string deadline = "8s";
  std::string rates;
  int workers = 1;
  std::optional<uint64_t> seed;  // set: sampled correctness
  std::optional<int> fixed_submodel;
  bool parallel = false;
  std::string out_path;  // empty: stdout
  SchedulerFlags scheduler;
};

struct SimulateArgs {
  std::string config_path;
  std::string out_path;  // RunReport JSON; empty: skip
  std::string csv_path;  // per-task CSV; empty: skip
};

struct ValidateArgs {
  std::string profile_path;
};

// Each returns the process exit code. Human-readable output goes to `out`,
// problems to `err`.
int RunScheduleCommand(const ScheduleArgs& args, std::ostream& out,
                       std::ostream& err);
int RunSweepCommand(const SweepArgs& args, std::ostream& out,
                    std::ostream& err);
int RunSimulateCommand(const SimulateArgs& args, std::ostream& out,
                       std::ostream& err);
int RunValidateProfileCommand(const ValidateArgs& args, std::ostream& out,
                              std::ostream& err);

// Structured results document for one simulation run.
std::string RunReportJson(const SimConfig& config, const SimMetrics& metrics);

}  // namespace elastic_serving

#endif  // ELASTIC_SERVING_TOOLS_COMMANDS_H_
