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

#include "elastic_serving/duration.h"

#include <cmath>
#include <cstdlib>
#include <string>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"

namespace elastic_serving {

Duration FromMillis(double ms) { return Duration(std::llround(ms * 1e3)); }

Duration FromSeconds(double s) { return Duration(std::llround(s * 1e6)); }

absl::StatusOr<Duration> ParseDuration(absl::string_view text) {
  absl::string_view s = absl::StripAsciiWhitespace(text);
  double scale = 0.0;
  absl::string_view number;
  if (s.size() > 2 && s.substr(s.size() - 2) == "ms") {
    scale = 1e3;
    number = s.substr(0, s.size() - 2);
  } else if (s.size() > 2 && s.substr(s.size() - 2) == "us") {
    scale = 1.0;
    number = s.substr(0, s.size() - 2);
  } else if (s.size() > 1 && s.back() == 's') {
    scale = 1e6;
    number = s.substr(0, s.size() - 1);
  } else {
    return absl::InvalidArgumentError(absl::StrCat(
        "duration '", text, "' needs a unit suffix (s, ms or us)"));
  }
  double value = 0.0;
  if (!absl::SimpleAtod(number, &value) || !std::isfinite(value)) {
    return absl::InvalidArgumentError(
        absl::StrCat("cannot parse duration '", text, "'"));
  }
  return Duration(std::llround(value * scale));
}

std::string FormatDuration(Duration d) {
  const int64_t us = d.count();
  if (us % 1000000 == 0) return absl::StrCat(us / 1000000, "s");
  if (us % 1000 == 0) return absl::StrCat(us / 1000, "ms");
  return absl::StrCat(us, "us");
}

}  // namespace elastic_serving
