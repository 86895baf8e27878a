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

#include "sweep.h"

#include <cmath>
#include <string>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace elastic_serving {

absl::StatusOr<std::vector<SweepRow>> RunSweep(const ProfileSet& profiles,
                                               const std::vector<double>& rates,
                                               const SweepOptions& options) {
  if (rates.empty()) {
    return absl::InvalidArgumentError("rates: the rate list is empty");
  }
  std::vector<SweepRow> rows;
  rows.reserve(rates.size());
  for (double rate : rates) {
    SimConfig config{.profiles = profiles,
                     .num_workers = options.num_workers,
                     .correctness = options.correctness,
                     .scheduler = options.scheduler,
                     .workload = SingleTaskWorkload{
                         InstancesForRate(rate, options.deadline),
                         options.deadline},
                     .parallel = options.parallel};
    if (!(rate > 0.0) || InstancesForRate(rate, options.deadline) < 1) {
      return absl::InvalidArgumentError(absl::StrCat(
          "rates: ", rate, " inst/s gives no instances within the deadline"));
    }
    auto metrics = RunSimulation(config);
    if (!metrics.ok()) return metrics.status();
    rows.push_back(SweepRow{rate, InstancesForRate(rate, options.deadline),
                            *std::move(metrics)});
  }
  return rows;
}

absl::StatusOr<std::vector<double>> ParseRates(absl::string_view text) {
  std::vector<double> rates;
  const std::string trimmed(absl::StripAsciiWhitespace(text));
  if (trimmed.empty()) {
    return absl::InvalidArgumentError("rates: the rate list is empty");
  }
  if (trimmed.find(':') != std::string::npos) {
    std::vector<std::string> parts = absl::StrSplit(trimmed, ':');
    double start = 0, stop = 0, step = 0;
    if (parts.size() != 3 || !absl::SimpleAtod(parts[0], &start) ||
        !absl::SimpleAtod(parts[1], &stop) ||
        !absl::SimpleAtod(parts[2], &step) || !(step > 0.0) ||
        stop < start) {
      return absl::InvalidArgumentError(absl::StrCat(
          "rates: '", text, "' is not start:stop:step with step > 0"));
    }
    const auto count =
        static_cast<int64_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (int64_t i = 0; i < count; ++i) rates.push_back(start + step * i);
    return rates;
  }
  for (absl::string_view piece : absl::StrSplit(trimmed, ',')) {
    double rate = 0.0;
    if (!absl::SimpleAtod(piece, &rate) || !(rate > 0.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("rates: '", piece, "' is not a positive number"));
    }
    rates.push_back(rate);
  }
  return rates;
}

void WriteSweepCsv(const ProfileSet& profiles,
                   const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "# schema: " << kSweepCsvSchema << "\n";
  out << "rate_instances_per_s";
  for (const SubModelProfile& m : profiles.sub_models()) {
    out << absl::StrFormat(",n_r%g", m.slice_rate);
  }
  out << ",theoretical_p_eff,measured_p_eff,throughput,p50_ms,p95_ms,p99_ms,"
         "drop_rate\n";
  for (const SweepRow& row : rows) {
    const SimMetrics& m = row.metrics;
    out << absl::StrFormat("%g", row.rate);
    for (int64_t n : m.minibatches_per_submodel) out << "," << n;
    out << absl::StrFormat(",%.9f,%.9f,%.4f,%.3f,%.3f,%.3f,%.9f\n",
                           m.theoretical_p_eff, m.measured_p_eff, m.throughput,
                           m.latency_p50_ms, m.latency_p95_ms,
                           m.latency_p99_ms, m.drop_rate);
  }
}

}  // namespace elastic_serving
