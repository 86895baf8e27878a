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

#include "elastic_serving/profiles.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "json.hpp"

namespace elastic_serving {
namespace {

using nlohmann::json;

constexpr uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr uint64_t kFnvPrime = 0x100000001b3ULL;

void HashBytes(uint64_t& h, uint64_t value) {
  for (int i = 0; i < 8; ++i) {
    h ^= (value >> (8 * i)) & 0xff;
    h *= kFnvPrime;
  }
}

uint64_t Fingerprint(int64_t mini_batch_size,
                     const std::vector<SubModelProfile>& models) {
  uint64_t h = kFnvOffset;
  HashBytes(h, static_cast<uint64_t>(mini_batch_size));
  HashBytes(h, models.size());
  for (const SubModelProfile& m : models) {
    HashBytes(h, std::bit_cast<uint64_t>(m.slice_rate));
    HashBytes(h, std::bit_cast<uint64_t>(m.accuracy));
    HashBytes(h, static_cast<uint64_t>(m.batch_latency.count()));
  }
  return h;
}

std::string ModelPath(size_t i, absl::string_view field) {
  return absl::StrCat("sub_models[", i, "].", field);
}

// Invariants shared by the document loader and ProfileSet::Create.
std::vector<std::string> CheckInvariants(
    int64_t mini_batch_size, const std::vector<SubModelProfile>& models) {
  std::vector<std::string> errors;
  if (mini_batch_size <= 0) {
    errors.push_back("mini_batch_size: must be a positive integer");
  }
  if (models.empty()) {
    errors.push_back("sub_models: at least one sub-model is required");
  }
  std::set<double> seen_rates;
  for (size_t i = 0; i < models.size(); ++i) {
    const SubModelProfile& m = models[i];
    if (!(m.slice_rate > 0.0 && m.slice_rate <= 1.0)) {
      errors.push_back(absl::StrCat(ModelPath(i, "slice_rate"),
                                    ": must be in (0, 1], got ", m.slice_rate));
    } else if (!seen_rates.insert(m.slice_rate).second) {
      errors.push_back(absl::StrCat(ModelPath(i, "slice_rate"),
                                    ": duplicate slice rate ", m.slice_rate));
    }
    if (!(m.accuracy >= 0.0 && m.accuracy <= 1.0)) {
      errors.push_back(absl::StrCat(ModelPath(i, "accuracy"),
                                    ": must be in [0, 1], got ", m.accuracy));
    }
    if (m.batch_latency <= Duration::zero()) {
      errors.push_back(absl::StrCat(ModelPath(i, "batch_latency_ms"),
                                    ": must be > 0 at microsecond resolution"));
    }
  }
  return errors;
}

std::optional<double> ReadNumber(const json& obj, const char* key,
                                 const std::string& path,
                                 std::vector<std::string>& errors) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    errors.push_back(absl::StrCat(path, ": missing"));
    return std::nullopt;
  }
  if (!it->is_number()) {
    errors.push_back(absl::StrCat(path, ": must be a number"));
    return std::nullopt;
  }
  return it->get<double>();
}

struct ParsedDocument {
  std::string name;
  int64_t mini_batch_size = 0;
  std::vector<SubModelProfile> models;
  ProfileDiagnostics diagnostics;
};

ParsedDocument ParseDocument(absl::string_view document) {
  ParsedDocument out;
  auto& errors = out.diagnostics.errors;
  json doc = json::parse(document.begin(), document.end(), nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    errors.push_back("document: not valid JSON");
    return out;
  }
  if (!doc.is_object()) {
    errors.push_back("document: top level must be an object");
    return out;
  }

  if (auto it = doc.find("name"); it != doc.end()) {
    if (it->is_string()) {
      out.name = it->get<std::string>();
    } else {
      errors.push_back("name: must be a string");
    }
  }

  if (auto it = doc.find("mini_batch_size"); it == doc.end()) {
    errors.push_back("mini_batch_size: missing");
  } else if (!it->is_number_integer()) {
    errors.push_back("mini_batch_size: must be a positive integer");
  } else {
    out.mini_batch_size = it->get<int64_t>();
  }

  bool percent = false;
  if (auto it = doc.find("accuracy_unit"); it != doc.end()) {
    if (*it == "percent") {
      percent = true;
    } else if (*it != "fraction") {
      errors.push_back(R"(accuracy_unit: must be "fraction" or "percent")");
    }
  }

  auto models_it = doc.find("sub_models");
  if (models_it == doc.end() || !models_it->is_array()) {
    errors.push_back("sub_models: missing or not an array");
    return out;
  }
  bool looks_like_percent = false;
  bool structural_ok = true;
  for (size_t i = 0; i < models_it->size(); ++i) {
    const json& entry = (*models_it)[i];
    if (!entry.is_object()) {
      errors.push_back(absl::StrCat("sub_models[", i, "]: must be an object"));
      structural_ok = false;
      continue;
    }
    auto rate = ReadNumber(entry, "slice_rate", ModelPath(i, "slice_rate"),
                           errors);
    auto acc = ReadNumber(entry, "accuracy", ModelPath(i, "accuracy"), errors);
    auto ms = ReadNumber(entry, "batch_latency_ms",
                         ModelPath(i, "batch_latency_ms"), errors);
    if (!rate || !acc || !ms) {
      structural_ok = false;
      continue;
    }
    if (!percent && *acc > 1.0 && *acc <= 100.0) looks_like_percent = true;
    SubModelProfile m;
    m.index = static_cast<int>(i) + 1;
    m.slice_rate = *rate;
    m.accuracy = percent ? *acc / 100.0 : *acc;
    m.batch_latency = std::isfinite(*ms) ? FromMillis(*ms) : Duration(0);
    out.models.push_back(m);
  }
  if (looks_like_percent) {
    out.diagnostics.warnings.push_back(
        "accuracy values above 1 look like percentages; set "
        R"("accuracy_unit": "percent")");
  }
  if (structural_ok) {
    auto invariant_errors = CheckInvariants(out.mini_batch_size, out.models);
    errors.insert(errors.end(), invariant_errors.begin(),
                  invariant_errors.end());
  }
  return out;
}

}  // namespace

absl::StatusOr<ProfileSet> ProfileSet::Create(
    std::string name, int64_t mini_batch_size,
    std::vector<SubModelProfile> models) {
  for (size_t i = 0; i < models.size(); ++i) {
    models[i].index = static_cast<int>(i) + 1;
  }
  auto errors = CheckInvariants(mini_batch_size, models);
  if (!errors.empty()) {
    return absl::InvalidArgumentError(absl::StrJoin(errors, "; "));
  }
  ProfileSet set;
  set.name_ = std::move(name);
  set.mini_batch_size_ = mini_batch_size;
  set.fingerprint_ = Fingerprint(mini_batch_size, models);
  set.models_ = std::move(models);
  return set;
}

Duration ProfileSet::min_latency() const {
  return std::min_element(models_.begin(), models_.end(),
                          [](const auto& a, const auto& b) {
                            return a.batch_latency < b.batch_latency;
                          })
      ->batch_latency;
}

Duration ProfileSet::max_latency() const {
  return std::max_element(models_.begin(), models_.end(),
                          [](const auto& a, const auto& b) {
                            return a.batch_latency < b.batch_latency;
                          })
      ->batch_latency;
}

ProfileDiagnostics ValidateProfileDocument(absl::string_view document) {
  ParsedDocument parsed = ParseDocument(document);
  if (parsed.diagnostics.ok()) {
    auto set = ProfileSet::Create(parsed.name, parsed.mini_batch_size,
                                  parsed.models);
    if (set.ok()) {
      for (auto& w : MonotonicityWarnings(*set)) {
        parsed.diagnostics.warnings.push_back(std::move(w));
      }
    }
  }
  return std::move(parsed.diagnostics);
}

absl::StatusOr<ProfileSet> LoadProfileSet(absl::string_view document) {
  ParsedDocument parsed = ParseDocument(document);
  if (!parsed.diagnostics.ok()) {
    return absl::InvalidArgumentError(
        absl::StrJoin(parsed.diagnostics.errors, "; "));
  }
  return ProfileSet::Create(std::move(parsed.name), parsed.mini_batch_size,
                            std::move(parsed.models));
}

absl::StatusOr<ProfileSet> LoadProfileSetFromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(
        absl::StrCat("cannot open profile file '", path, "'"));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto set = LoadProfileSet(buffer.str());
  if (!set.ok()) {
    return absl::Status(set.status().code(),
                        absl::StrCat(path, ": ", set.status().message()));
  }
  return set;
}

std::string ProfileSetToJson(const ProfileSet& profiles) {
  json doc;
  doc["name"] = profiles.name();
  doc["mini_batch_size"] = profiles.mini_batch_size();
  doc["accuracy_unit"] = "fraction";
  json models = json::array();
  for (const SubModelProfile& m : profiles.sub_models()) {
    models.push_back({{"slice_rate", m.slice_rate},
                      {"accuracy", m.accuracy},
                      {"batch_latency_ms", ToMillis(m.batch_latency)}});
  }
  doc["sub_models"] = std::move(models);
  return doc.dump(2);
}

absl::StatusOr<double> MaxWorkload(const ProfileSet& profiles, int index) {
  if (index < 1 || index > profiles.size()) {
    return absl::OutOfRangeError(absl::StrFormat(
        "sub-model index %d outside [1, %d]", index, profiles.size()));
  }
  return static_cast<double>(profiles.mini_batch_size()) /
         ToSeconds(profiles.at(index).batch_latency);
}

absl::StatusOr<double> SingleModelEffectiveAccuracy(const ProfileSet& profiles,
                                                    int index,
                                                    double expected_workload) {
  auto max_workload = MaxWorkload(profiles, index);
  if (!max_workload.ok()) return max_workload.status();
  if (!(expected_workload > 0.0)) {
    return absl::InvalidArgumentError("expected workload must be positive");
  }
  const double p = profiles.at(index).accuracy;
  if (expected_workload <= *max_workload) return p;
  return (*max_workload / expected_workload) * p;
}

std::vector<std::string> MonotonicityWarnings(const ProfileSet& profiles) {
  std::vector<SubModelProfile> by_rate = profiles.sub_models();
  std::sort(by_rate.begin(), by_rate.end(), [](const auto& a, const auto& b) {
    return a.slice_rate < b.slice_rate;
  });
  std::vector<std::string> warnings;
  for (size_t i = 1; i < by_rate.size(); ++i) {
    if (by_rate[i - 1].accuracy > by_rate[i].accuracy) {
      warnings.push_back(absl::StrFormat(
          "accuracy is not monotone in slice rate: r=%g has %.4f > r=%g "
          "with %.4f",
          by_rate[i - 1].slice_rate, by_rate[i - 1].accuracy,
          by_rate[i].slice_rate, by_rate[i].accuracy));
    }
  }
  return warnings;
}

}  // namespace elastic_serving
