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

// elastic-serve: deadline-aware sub-model scheduling and serving simulation.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "commands.h"

int main(int argc, char** argv) {
  using namespace elastic_serving;

  CLI::App app{"Deadline-aware elastic model serving scheduler and simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string profile;
  std::string deadline = "8s";
  int64_t minibatches = 0;
  int workers = 1;
  std::optional<uint64_t> seed;
  std::string out_path;
  SchedulerFlags scheduler;
  std::optional<std::string> dp_resolution;

  app.add_option("--profile", profile, "Profile document (JSON)");
  app.add_option("--deadline", deadline, "Deadline with unit, e.g. 8s or 250ms")
      ->capture_default_str();
  app.add_option("--minibatches", minibatches, "Number of mini-batches N_mb");
  app.add_option("--workers", workers, "Inference workers b")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", seed,
                 "Sample per-instance correctness with this seed");
  app.add_option("--out", out_path, "Output path");
  app.add_option("--method", scheduler.method, "auto|bnb|dp|brute")
      ->capture_default_str();
  app.add_option("--dp-resolution", dp_resolution,
                 "Knapsack time resolution, e.g. 1ms");
  app.add_option("--node-budget", scheduler.node_budget,
                 "Branch-and-bound node limit before the DP fallback")
      ->capture_default_str();

  auto* schedule = app.add_subcommand("schedule", "Solve one scheduling instance");

  auto* sweep = app.add_subcommand("sweep", "Ingest-rate sweep to CSV");
  std::string rates;
  std::optional<int> fixed_submodel;
  bool parallel = false;
  sweep->add_option("--rates", rates, "a,b,c or start:stop:step (inst/s)")
      ->required();
  sweep->add_option("--fixed-submodel", fixed_submodel,
                    "Static baseline: serve with this sub-model only (1-based)");
  sweep->add_flag("--parallel", parallel, "One thread per worker");

  auto* simulate = app.add_subcommand("simulate", "Run a simulation config");
  std::string config_path;
  std::string csv_path;
  simulate->add_option("--config", config_path, "Simulation config (JSON)")
      ->required();
  simulate->add_option("--csv", csv_path, "Per-task CSV output");

  auto* validate =
      app.add_subcommand("validate-profile", "Check a profile document");

  CLI11_PARSE(app, argc, argv);
  scheduler.dp_resolution = dp_resolution;

  auto need_profile = [&]() {
    if (profile.empty()) {
      std::cerr << "error: --profile is required\n";
      return false;
    }
    return true;
  };

  if (schedule->parsed()) {
    if (!need_profile()) return 2;
    if (minibatches < 1) {
      std::cerr << "error: --minibatches must be >= 1\n";
      return 2;
    }
    return RunScheduleCommand(
        ScheduleArgs{profile, deadline, minibatches, scheduler}, std::cout,
        std::cerr);
  }
  if (sweep->parsed()) {
    if (!need_profile()) return 2;
    SweepArgs args;
    args.profile_path = profile;
    args.deadline = deadline;
    args.rates = rates;
    args.workers = workers;
    args.seed = seed;
    args.fixed_submodel = fixed_submodel;
    args.parallel = parallel;
    args.out_path = out_path;
    args.scheduler = scheduler;
    return RunSweepCommand(args, std::cout, std::cerr);
  }
  if (simulate->parsed()) {
    return RunSimulateCommand(SimulateArgs{config_path, out_path, csv_path},
                              std::cout, std::cerr);
  }
  if (validate->parsed()) {
    if (!need_profile()) return 2;
    return RunValidateProfileCommand(ValidateArgs{profile}, std::cout,
                                     std::cerr);
  }
  return 2;
}
