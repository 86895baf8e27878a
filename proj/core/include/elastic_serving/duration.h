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

#ifndef ELASTIC_SERVING_DURATION_H_
#define ELASTIC_SERVING_DURATION_H_

#include <chrono>
#include <cstdint>
#include <string>
#include "absl/strings/string_view.h"

#include "absl/status/statusor.h"

namespace elastic_serving {

// All simulated and profiled time uses one integral microsecond
// representation. Profiles are given in fractional milliseconds and
// deadlines in seconds; both are converted once, at the boundary.
using Duration = std::chrono::microseconds;
using Timestamp = std::chrono::microseconds;  // offset from simulation start

inline constexpr Duration kTimeEpsilon = Duration(1);

inline double ToSeconds(Duration d) {
  return std::chrono::duration<double>(d).count();
}
inline double ToMillis(Duration d) {
  return std::chrono::duration<double, std::milli>(d).count();
}

// Rounds to the nearest microsecond.
Duration FromMillis(double ms);
Duration FromSeconds(double s);

// Parses "8s", "8000ms", "250us", "1.5s". A unit suffix is required.
absl::StatusOr<Duration> ParseDuration(absl::string_view text);

// Shortest of "Ns", "Nms", "Nus" that represents `d` exactly.
std::string FormatDuration(Duration d);

}  // namespace elastic_serving

#endif  // ELASTIC_SERVING_DURATION_H_
