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

#ifndef ELASTIC_SERVING_PROFILES_H_
#define ELASTIC_SERVING_PROFILES_H_

#include <cstdint>
#include <string>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/statusor.h"
#include "elastic_serving/duration.h"

namespace elastic_serving {

// One width-sliced variant of a trained model.
struct SubModelProfile {
  int index = 0;              // 1-based position in the owning ProfileSet
  double slice_rate = 1.0;    // fraction of each layer's groups kept, (0, 1]
  double accuracy = 0.0;      // fraction in [0, 1]
  Duration batch_latency{0};  // time to run one mini-batch of S_mb instances
};

// Immutable after construction; every public factory validates.
class ProfileSet {
 public:
  // Validates and builds. Indices are reassigned 1..K from vector order.
  static absl::StatusOr<ProfileSet> Create(std::string name,
                                           int64_t mini_batch_size,
                                           std::vector<SubModelProfile> models);

  const std::string& name() const { return name_; }
  int64_t mini_batch_size() const { return mini_batch_size_; }
  int size() const { return static_cast<int>(models_.size()); }
  const std::vector<SubModelProfile>& sub_models() const { return models_; }

  // 1-based, as everywhere in the public API.
  const SubModelProfile& at(int index) const { return models_[index - 1]; }

  Duration min_latency() const;
  Duration max_latency() const;

  // N_mb * min t and N_mb * max t.
  Duration fast_time(int64_t num_minibatches) const {
    return min_latency() * num_minibatches;
  }
  Duration slow_time(int64_t num_minibatches) const {
    return max_latency() * num_minibatches;
  }

  // Stable 64-bit digest of everything that influences scheduling.
  uint64_t fingerprint() const { return fingerprint_; }

 private:
  ProfileSet() = default;

  std::string name_;
  int64_t mini_batch_size_ = 0;
  std::vector<SubModelProfile> models_;
  uint64_t fingerprint_ = 0;
};

// Findings from checking a profile document. Errors make the document
// unusable; warnings do not.
struct ProfileDiagnostics {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

// Parses the JSON profile document and reports every problem found rather
// than stopping at the first one.
ProfileDiagnostics ValidateProfileDocument(absl::string_view document);

absl::StatusOr<ProfileSet> LoadProfileSet(absl::string_view document);
absl::StatusOr<ProfileSet> LoadProfileSetFromFile(const std::string& path);

// Serializes back to the profile document schema (accuracy as fractions).
std::string ProfileSetToJson(const ProfileSet& profiles);

// S_mb / t_i in instances per second.
absl::StatusOr<double> MaxWorkload(const ProfileSet& profiles, int index);

// Effective accuracy of serving every instance with sub-model `index` when
// the expected workload is `expected_workload` instances per second:
// p_i below the sub-model's maximum workload, scaled down linearly above it.
absl::StatusOr<double> SingleModelEffectiveAccuracy(const ProfileSet& profiles,
                                                    int index,
                                                    double expected_workload);

// Warns when a smaller slice rate has strictly higher accuracy.
std::vector<std::string> MonotonicityWarnings(const ProfileSet& profiles);

}  // namespace elastic_serving

#endif  // ELASTIC_SERVING_PROFILES_H_
