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

#include "elastic_serving/sim_config.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "json.hpp"

namespace elastic_serving {
namespace {

using nlohmann::json;

absl::Status FieldError(absl::string_view path, absl::string_view what) {
  return absl::InvalidArgumentError(absl::StrCat(path, ": ", what));
}

absl::StatusOr<Duration> ReadDuration(const json& obj, const char* key,
                                      const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) return FieldError(path, "missing");
  if (!it->is_string()) {
    return FieldError(path, "must be a string with a unit, e.g. \"8s\"");
  }
  auto d = ParseDuration(it->get<std::string>());
  if (!d.ok()) return FieldError(path, d.status().message());
  return *d;
}

absl::StatusOr<int64_t> ReadInt(const json& obj, const char* key,
                                const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) return FieldError(path, "missing");
  if (!it->is_number_integer()) return FieldError(path, "must be an integer");
  return it->get<int64_t>();
}

absl::StatusOr<WorkloadSpec> ParseWorkload(const json& w) {
  if (!w.is_object()) return FieldError("workload", "must be an object");
  auto kind_it = w.find("kind");
  if (kind_it == w.end() || !kind_it->is_string()) {
    return FieldError("workload.kind", "missing or not a string");
  }
  const std::string kind = kind_it->get<std::string>();
  auto deadline = ReadDuration(w, "deadline", "workload.deadline");
  if (!deadline.ok()) return deadline.status();

  if (kind == "single_task") {
    auto n = ReadInt(w, "num_instances", "workload.num_instances");
    if (!n.ok()) return n.status();
    return SingleTaskWorkload{*n, *deadline};
  }
  if (kind == "rate_sweep") {
    RateSweepWorkload sweep;
    sweep.deadline = *deadline;
    auto rates = w.find("rates");
    if (rates == w.end() || !rates->is_array()) {
      return FieldError("workload.rates", "missing or not an array");
    }
    for (size_t i = 0; i < rates->size(); ++i) {
      if (!(*rates)[i].is_number()) {
        return FieldError(absl::StrCat("workload.rates[", i, "]"),
                          "must be a number");
      }
      sweep.rates.push_back((*rates)[i].get<double>());
    }
    if (w.contains("spacing")) {
      auto spacing = ReadDuration(w, "spacing", "workload.spacing");
      if (!spacing.ok()) return spacing.status();
      sweep.spacing = *spacing;
    } else {
      sweep.spacing = *deadline;
    }
    return sweep;
  }
  if (kind == "poisson") {
    PoissonWorkload p;
    p.deadline = *deadline;
    auto rate = w.find("tasks_per_second");
    if (rate == w.end() || !rate->is_number()) {
      return FieldError("workload.tasks_per_second", "missing or not a number");
    }
    p.tasks_per_second = rate->get<double>();
    auto horizon = ReadDuration(w, "horizon", "workload.horizon");
    if (!horizon.ok()) return horizon.status();
    p.horizon = *horizon;
    if (w.contains("seed")) {
      auto seed = ReadInt(w, "seed", "workload.seed");
      if (!seed.ok()) return seed.status();
      p.seed = static_cast<uint64_t>(*seed);
    }
    auto size = w.find("task_size");
    if (size == w.end() || !size->is_object()) {
      return FieldError("workload.task_size", "missing or not an object");
    }
    if (size->contains("fixed")) {
      auto n = ReadInt(*size, "fixed", "workload.task_size.fixed");
      if (!n.ok()) return n.status();
      p.task_size = FixedTaskSize{*n};
    } else {
      auto lo = ReadInt(*size, "min", "workload.task_size.min");
      if (!lo.ok()) return lo.status();
      auto hi = ReadInt(*size, "max", "workload.task_size.max");
      if (!hi.ok()) return hi.status();
      p.task_size = UniformTaskSize{*lo, *hi};
    }
    return p;
  }
  return FieldError("workload.kind",
                    "must be single_task, rate_sweep or poisson");
}

absl::Status ParseScheduler(const json& s, SchedulerConfig& out) {
  if (!s.is_object()) return FieldError("scheduler", "must be an object");
  if (auto it = s.find("method"); it != s.end()) {
    if (!it->is_string()) return FieldError("scheduler.method", "not a string");
    auto method = ParseScheduleMethod(it->get<std::string>());
    if (!method.ok()) return FieldError("scheduler.method", method.status().message());
    out.method = *method;
  }
  if (s.contains("node_budget")) {
    auto v = ReadInt(s, "node_budget", "scheduler.node_budget");
    if (!v.ok()) return v.status();
    out.options.node_budget = *v;
  }
  if (s.contains("dp_resolution")) {
    auto v = ReadDuration(s, "dp_resolution", "scheduler.dp_resolution");
    if (!v.ok()) return v.status();
    out.options.dp_resolution = *v;
  }
  if (s.contains("cache_capacity")) {
    auto v = ReadInt(s, "cache_capacity", "scheduler.cache_capacity");
    if (!v.ok()) return v.status();
    if (*v < 0) return FieldError("scheduler.cache_capacity", "must be >= 0");
    out.cache_capacity = static_cast<size_t>(*v);
  }
  if (s.contains("scheduling_overhead")) {
    auto v = ReadDuration(s, "scheduling_overhead",
                          "scheduler.scheduling_overhead");
    if (!v.ok()) return v.status();
    out.scheduling_overhead = *v;
  }
  if (auto it = s.find("deadline_basis"); it != s.end()) {
    const std::string basis = it->is_string() ? it->get<std::string>() : "";
    if (basis != "task" && basis != "remaining") {
      return FieldError("scheduler.deadline_basis",
                        "must be \"task\" or \"remaining\"");
    }
    out.use_remaining_deadline = basis == "remaining";
  }
  if (auto it = s.find("fixed_submodel"); it != s.end() && !it->is_null()) {
    auto v = ReadInt(s, "fixed_submodel", "scheduler.fixed_submodel");
    if (!v.ok()) return v.status();
    out.fixed_submodel = static_cast<int>(*v);
  }
  return absl::OkStatus();
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open '", path, "'"));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

absl::StatusOr<SimConfig> ParseSimConfig(absl::string_view document,
                                         const std::string& base_dir) {
  json doc = json::parse(document.begin(), document.end(), nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return FieldError("config", "not a JSON object");
  }

  auto profile_it = doc.find("profile");
  if (profile_it == doc.end()) return FieldError("profile", "missing");
  absl::StatusOr<ProfileSet> profiles = absl::UnknownError("unset");
  if (profile_it->is_string()) {
    std::filesystem::path path(profile_it->get<std::string>());
    if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
    profiles = LoadProfileSetFromFile(path.string());
  } else if (profile_it->is_object()) {
    profiles = LoadProfileSet(profile_it->dump());
  } else {
    return FieldError("profile", "must be a path or an inline object");
  }
  if (!profiles.ok()) return FieldError("profile", profiles.status().message());

  auto workload_it = doc.find("workload");
  if (workload_it == doc.end()) return FieldError("workload", "missing");
  auto workload = ParseWorkload(*workload_it);
  if (!workload.ok()) return workload.status();

  SimConfig config{.profiles = *std::move(profiles),
                   .num_workers = 1,
                   .correctness = ExpectedCorrectness{},
                   .scheduler = SchedulerConfig{},
                   .workload = *std::move(workload),
                   .parallel = false};

  if (doc.contains("num_workers")) {
    auto b = ReadInt(doc, "num_workers", "num_workers");
    if (!b.ok()) return b.status();
    config.num_workers = static_cast<int>(*b);
  }
  if (auto it = doc.find("parallel"); it != doc.end()) {
    if (!it->is_boolean()) return FieldError("parallel", "must be a boolean");
    config.parallel = it->get<bool>();
  }
  if (auto it = doc.find("correctness"); it != doc.end()) {
    if (!it->is_object()) return FieldError("correctness", "must be an object");
    const std::string mode = it->value("mode", "expected");
    if (mode == "sampled") {
      auto seed = ReadInt(*it, "seed", "correctness.seed");
      if (!seed.ok()) return seed.status();
      config.correctness = SampledCorrectness{static_cast<uint64_t>(*seed)};
    } else if (mode == "expected") {
      if (it->contains("seed")) {
        return FieldError("correctness.seed", "only valid in sampled mode");
      }
    } else {
      return FieldError("correctness.mode", "must be expected or sampled");
    }
  }
  if (auto it = doc.find("scheduler"); it != doc.end()) {
    if (auto s = ParseScheduler(*it, config.scheduler); !s.ok()) return s;
  }
  if (auto s = ValidateSimConfig(config); !s.ok()) return s;
  return config;
}

absl::StatusOr<SimConfig> LoadSimConfigFromFile(const std::string& path) {
  auto text = ReadFile(path);
  if (!text.ok()) return text.status();
  const auto parent = std::filesystem::path(path).parent_path();
  return ParseSimConfig(*text, parent.empty() ? "." : parent.string());
}

std::string SimConfigToJson(const SimConfig& config) {
  json doc;
  doc["profile"] = json::parse(ProfileSetToJson(config.profiles));
  doc["num_workers"] = config.num_workers;
  doc["parallel"] = config.parallel;
  if (const auto* sampled = std::get_if<SampledCorrectness>(&config.correctness)) {
    doc["correctness"] = {{"mode", "sampled"}, {"seed", sampled->seed}};
  } else {
    doc["correctness"] = {{"mode", "expected"}};
  }
  const SchedulerConfig& s = config.scheduler;
  json sched;
  switch (s.method) {
    case ScheduleMethod::kAuto: sched["method"] = "auto"; break;
    case ScheduleMethod::kBranchAndBound: sched["method"] = "bnb"; break;
    case ScheduleMethod::kKnapsackDp: sched["method"] = "dp"; break;
    case ScheduleMethod::kBruteForce: sched["method"] = "brute"; break;
  }
  sched["node_budget"] = s.options.node_budget;
  if (s.options.dp_resolution) {
    sched["dp_resolution"] = FormatDuration(*s.options.dp_resolution);
  }
  sched["cache_capacity"] = s.cache_capacity;
  sched["scheduling_overhead"] = FormatDuration(s.scheduling_overhead);
  sched["deadline_basis"] = s.use_remaining_deadline ? "remaining" : "task";
  sched["fixed_submodel"] =
      s.fixed_submodel ? json(*s.fixed_submodel) : json(nullptr);
  doc["scheduler"] = std::move(sched);

  json w;
  if (const auto* single = std::get_if<SingleTaskWorkload>(&config.workload)) {
    w = {{"kind", "single_task"},
         {"num_instances", single->num_instances},
         {"deadline", FormatDuration(single->deadline)}};
  } else if (const auto* sweep =
                 std::get_if<RateSweepWorkload>(&config.workload)) {
    w = {{"kind", "rate_sweep"},
         {"rates", sweep->rates},
         {"deadline", FormatDuration(sweep->deadline)},
         {"spacing", FormatDuration(sweep->spacing)}};
  } else {
    const auto& p = std::get<PoissonWorkload>(config.workload);
    w = {{"kind", "poisson"},
         {"tasks_per_second", p.tasks_per_second},
         {"deadline", FormatDuration(p.deadline)},
         {"horizon", FormatDuration(p.horizon)},
         {"seed", p.seed}};
    if (const auto* fixed = std::get_if<FixedTaskSize>(&p.task_size)) {
      w["task_size"] = {{"fixed", fixed->num_instances}};
    } else {
      const auto& u = std::get<UniformTaskSize>(p.task_size);
      w["task_size"] = {{"min", u.min_instances}, {"max", u.max_instances}};
    }
  }
  doc["workload"] = std::move(w);
  return doc.dump(2);
}

}  // namespace elastic_serving
