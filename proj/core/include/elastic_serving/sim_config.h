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

#ifndef ELASTIC_SERVING_SIM_CONFIG_H_
#define ELASTIC_SERVING_SIM_CONFIG_H_

#include <string>
#include "absl/strings/string_view.h"

#include "absl/status/statusor.h"
#include "elastic_serving/serving_sim.h"

namespace elastic_serving {

// Parses a simulation config document. A string-valued "profile" is a
// path resolved against `base_dir`; an object is an inline profile
// document. Errors name the offending field path, e.g.
// "workload.deadline: ...".
absl::StatusOr<SimConfig> ParseSimConfig(absl::string_view document,
                                         const std::string& base_dir = ".");
absl::StatusOr<SimConfig> LoadSimConfigFromFile(const std::string& path);

// Canonical JSON echo of a config, with the profile inlined.
std::string SimConfigToJson(const SimConfig& config);

}  // namespace elastic_serving

#endif  // ELASTIC_SERVING_SIM_CONFIG_H_
