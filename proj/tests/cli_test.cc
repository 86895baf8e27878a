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

#include <fstream>
#include <sstream>
#include <string>

#include "commands.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "sweep.h"
#include "absl/strings/str_format.h"
#include "test_oracles.h"

namespace elastic_serving {
namespace {

using ::testing::HasSubstr;
using ::testing::StartsWith;
using testing::SourcePath;

const std::string kXray = SourcePath("profiles/resnet50_xray.json");

struct Output {
  int code;
  std::string out;
  std::string err;
};

template <typename Args, typename Fn>
Output Invoke(Fn fn, const Args& args) {
  std::ostringstream out, err;
  const int code = fn(args, out, err);
  return {code, out.str(), err.str()};
}

std::string ReadAll(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string WriteTemp(const std::string& name, const std::string& content) {
  const std::string path = ::testing::TempDir() + name;
  std::ofstream(path, std::ios::binary) << content;
  return path;
}

std::string LineStartingWith(const std::string& text,
                             const std::string& prefix) {
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind(prefix, 0) == 0) return line;
  }
  return "";
}

TEST(ScheduleCommandTest, LightXrayTaskUsesFullModel) {
  ScheduleArgs args{kXray, "8000ms", 25, {}};
  const Output r = Invoke(RunScheduleCommand, args);
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_THAT(r.out, HasSubstr("eta [25, 0, 0, 0]\n"));
  EXPECT_THAT(r.out, HasSubstr("p_eff 0.793700\n"));
  EXPECT_THAT(r.out, HasSubstr("solver shortcut\n"));
}

TEST(ScheduleCommandTest, BruteForceAgreesWithAuto) {
  for (int64_t n_mb : {10, 40, 60}) {
    ScheduleArgs args{kXray, "1s", n_mb, {}};
    const Output automatic = Invoke(RunScheduleCommand, args);
    args.scheduler.method = "brute";
    const Output brute = Invoke(RunScheduleCommand, args);
    ASSERT_EQ(automatic.code, 0);
    ASSERT_EQ(brute.code, 0) << brute.err;
    EXPECT_EQ(LineStartingWith(automatic.out, "p_eff"),
              LineStartingWith(brute.out, "p_eff"));
    EXPECT_THAT(brute.out, HasSubstr("solver brute_force"));
  }
}

TEST(ScheduleCommandTest, MissingProfileNamesPath) {
  ScheduleArgs args{"/no/such/profile.json", "8s", 4, {}};
  const Output r = Invoke(RunScheduleCommand, args);
  EXPECT_NE(r.code, 0);
  EXPECT_THAT(r.err, HasSubstr("/no/such/profile.json"));
}

TEST(ScheduleCommandTest, RejectsBadFlags) {
  EXPECT_NE(Invoke(RunScheduleCommand, ScheduleArgs{kXray, "8", 4, {}}).code, 0);
  EXPECT_NE(Invoke(RunScheduleCommand, ScheduleArgs{kXray, "8s", 0, {}}).code,
            0);
  ScheduleArgs args{kXray, "8s", 4, {}};
  args.scheduler.method = "simplex";
  EXPECT_NE(Invoke(RunScheduleCommand, args).code, 0);
  args.scheduler.method = "dp";
  args.scheduler.dp_resolution = "0ms";
  EXPECT_NE(Invoke(RunScheduleCommand, args).code, 0);
}

TEST(SweepCommandTest, CsvHeaderAndRows) {
  SweepArgs args;
  args.profile_path = kXray;
  args.rates = "100,2000,3000";
  const Output r = Invoke(RunSweepCommand, args);
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string schema, header, row;
  std::getline(lines, schema);
  std::getline(lines, header);
  EXPECT_EQ(schema, "# schema: elastic-serve/sweep/v1");
  EXPECT_EQ(header,
            "rate_instances_per_s,n_r1,n_r0.75,n_r0.5,n_r0.25,"
            "theoretical_p_eff,measured_p_eff,throughput,p50_ms,p95_ms,"
            "p99_ms,drop_rate");
  std::getline(lines, row);
  EXPECT_THAT(row, StartsWith("100,25,0,0,0,0.793700000,0.793700000,"));
  int rows = 1;
  while (std::getline(lines, row)) ++rows;
  EXPECT_EQ(rows, 3);
}

TEST(SweepCommandTest, IdenticalRunsAreByteIdentical) {
  SweepArgs args;
  args.profile_path = kXray;
  args.rates = "50:3000:350";
  args.workers = 2;
  args.seed = 99;
  args.out_path = ::testing::TempDir() + "sweep_a.csv";
  ASSERT_EQ(Invoke(RunSweepCommand, args).code, 0);
  args.out_path = ::testing::TempDir() + "sweep_b.csv";
  args.parallel = true;
  ASSERT_EQ(Invoke(RunSweepCommand, args).code, 0);
  const std::string a = ReadAll(::testing::TempDir() + "sweep_a.csv");
  const std::string b = ReadAll(::testing::TempDir() + "sweep_b.csv");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, b);
}

TEST(SweepCommandTest, EmptyRateListIsAnError) {
  SweepArgs args;
  args.profile_path = kXray;
  args.rates = "";
  const Output r = Invoke(RunSweepCommand, args);
  EXPECT_NE(r.code, 0);
  EXPECT_THAT(r.err, HasSubstr("rate"));
}

TEST(SweepCommandTest, UnwritableOutputIsAnError) {
  SweepArgs args;
  args.profile_path = kXray;
  args.rates = "100";
  args.out_path = "/no/such/dir/out.csv";
  const Output r = Invoke(RunSweepCommand, args);
  EXPECT_NE(r.code, 0);
  EXPECT_THAT(r.err, HasSubstr("/no/such/dir/out.csv"));
}

TEST(SweepCommandTest, SingleRateMatchesSimulate) {
  const std::string config = WriteTemp("single_2500.json", R"({
    "profile": ")" + kXray + R"(",
    "workload": {"kind": "single_task", "num_instances": 20000, "deadline": "8s"}
  })");
  SimulateArgs sim{config, ::testing::TempDir() + "single_2500_report.json", ""};
  const Output simulated = Invoke(RunSimulateCommand, sim);
  ASSERT_EQ(simulated.code, 0) << simulated.err;
  const auto report = nlohmann::json::parse(ReadAll(sim.out_path));
  const auto& summary = report["summary"];

  SweepArgs args;
  args.profile_path = kXray;
  args.rates = "2500";
  const Output swept = Invoke(RunSweepCommand, args);
  ASSERT_EQ(swept.code, 0);
  const std::string row = LineStartingWith(swept.out, "2500,");
  EXPECT_THAT(row, HasSubstr(absl::StrFormat(
                       ",%.9f,%.9f,%.4f,",
                       summary["theoretical_p_eff"].get<double>(),
                       summary["measured_p_eff"].get<double>(),
                       summary["throughput"].get<double>())));
}

TEST(SimulateCommandTest, WritesReportAndTaskCsv) {
  SimulateArgs args{SourcePath("configs/xray_overload.json"),
                    ::testing::TempDir() + "overload.json",
                    ::testing::TempDir() + "overload.csv"};
  const Output r = Invoke(RunSimulateCommand, args);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_THAT(r.out, HasSubstr("mini-batches per sub-model [0, 0, 0, 510]"));
  const auto report = nlohmann::json::parse(ReadAll(args.out_path));
  EXPECT_EQ(report["schema_version"], 1);
  EXPECT_EQ(report["summary"]["on_time_instances"], 16320);
  EXPECT_EQ(report["rows"].size(), 1u);
  EXPECT_EQ(report["config"]["workload"]["num_instances"], 24000);
  EXPECT_THAT(ReadAll(args.csv_path),
              StartsWith("task_id,worker_id,num_instances,num_minibatches,"
                         "arrival_ms,finish_ms,n_r1,n_r0.75,n_r0.5,n_r0.25,"
                         "theoretical_p_eff,on_time_instances\n1,0,24000,750,"));
}

TEST(SimulateCommandTest, ConfigErrorsNameTheField) {
  const std::string config = WriteTemp("bad_config.json", R"({
    "profile": ")" + kXray + R"(",
    "workload": {"kind": "single_task", "num_instances": 10, "deadline": 8}
  })");
  const Output r = Invoke(RunSimulateCommand, SimulateArgs{config, "", ""});
  EXPECT_NE(r.code, 0);
  EXPECT_THAT(r.err, HasSubstr("workload.deadline"));
}

TEST(ValidateProfileCommandTest, XrayMaxWorkloads) {
  const Output r = Invoke(RunValidateProfileCommand, ValidateArgs{kXray});
  EXPECT_EQ(r.code, 0);
  EXPECT_THAT(r.out, HasSubstr("OK resnet50-xray: K=4, S_mb=32\n"));
  EXPECT_THAT(r.out, HasSubstr("max_workload_inst_per_s "
                               "[709.22, 925.93, 1408.45, 2040.82]\n"));
  EXPECT_THAT(r.out, ::testing::Not(HasSubstr("warning")));
}

TEST(ValidateProfileCommandTest, PercentValuesWarn) {
  const std::string path = WriteTemp("percent.json", R"({
    "name": "p", "mini_batch_size": 32,
    "sub_models": [{"slice_rate": 1.0, "accuracy": 79.37,
                    "batch_latency_ms": 45.12}]})");
  const Output r = Invoke(RunValidateProfileCommand, ValidateArgs{path});
  EXPECT_THAT(r.out, HasSubstr("warning:"));
  EXPECT_THAT(r.out, HasSubstr("percent"));
}

TEST(ValidateProfileCommandTest, DuplicateSliceRatesFail) {
  const std::string path = WriteTemp("dup.json", R"({
    "name": "d", "mini_batch_size": 32,
    "sub_models": [
      {"slice_rate": 0.5, "accuracy": 0.7, "batch_latency_ms": 2},
      {"slice_rate": 0.5, "accuracy": 0.6, "batch_latency_ms": 1}]})");
  const Output r = Invoke(RunValidateProfileCommand, ValidateArgs{path});
  EXPECT_NE(r.code, 0);
  EXPECT_THAT(r.err, HasSubstr("duplicate slice rate"));
}

TEST(ValidateProfileCommandTest, NonMonotoneWarns) {
  const std::string path = WriteTemp("nonmono.json", R"({
    "name": "n", "mini_batch_size": 32,
    "sub_models": [
      {"slice_rate": 1.0, "accuracy": 0.70, "batch_latency_ms": 4},
      {"slice_rate": 0.5, "accuracy": 0.75, "batch_latency_ms": 2}]})");
  const Output r = Invoke(RunValidateProfileCommand, ValidateArgs{path});
  EXPECT_EQ(r.code, 0);
  EXPECT_THAT(r.out, HasSubstr("not monotone"));
}

TEST(ParseRatesTest, ListsAndRanges) {
  EXPECT_EQ(*ParseRates("4,8,12.5"), (std::vector<double>{4, 8, 12.5}));
  EXPECT_EQ(*ParseRates("4:16:4"), (std::vector<double>{4, 8, 12, 16}));
  EXPECT_EQ(ParseRates("4:3750:4")->size(), 937u);
  EXPECT_FALSE(ParseRates("").ok());
  EXPECT_FALSE(ParseRates("4:1:1").ok());
  EXPECT_FALSE(ParseRates("a,b").ok());
  EXPECT_FALSE(ParseRates("1:5:0").ok());
}

}  // namespace
}  // namespace elastic_serving
