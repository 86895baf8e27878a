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

#ifndef ELASTIC_SERVING_SCHEDULE_CACHE_H_
#define ELASTIC_SERVING_SCHEDULE_CACHE_H_

#include <cstddef>
#include <cstdint>
#include <list>
#include <optional>
#include <utility>

#include "absl/base/thread_annotations.h"
#include "absl/container/flat_hash_map.h"
#include "absl/status/statusor.h"
#include "absl/synchronization/mutex.h"
#include "elastic_serving/duration.h"
#include "elastic_serving/scheduler.h"

namespace elastic_serving {

struct ScheduleCacheKey {
  int64_t deadline_bucket = 0;
  int64_t num_minibatches = 0;
  uint64_t profile_fingerprint = 0;

  friend bool operator==(const ScheduleCacheKey&,
                         const ScheduleCacheKey&) = default;
  template <typename H>
  friend H AbslHashValue(H h, const ScheduleCacheKey& key) {
    return H::combine(std::move(h), key.deadline_bucket, key.num_minibatches,
                      key.profile_fingerprint);
  }
};

// Thread-safe LRU map from (deadline bucket, N_mb, profile fingerprint) to
// a computed policy. Policies are copied in and out under the lock.
class ScheduleCache {
 public:
  static constexpr Duration kDefaultBucket = Duration(10'000);  // 10 ms

  explicit ScheduleCache(size_t capacity, Duration bucket = kDefaultBucket);

  ScheduleCache(const ScheduleCache&) = delete;
  ScheduleCache& operator=(const ScheduleCache&) = delete;

  // Deadlines are floored to a bucket boundary. The policy for a key is
  // computed at that boundary, so it is feasible for every deadline that
  // maps to the bucket.
  ScheduleCacheKey KeyFor(const SchedulingInstance& instance) const;
  Duration QuantizedDeadline(Duration deadline) const;
  Duration bucket() const { return bucket_; }

  std::optional<SchedulingPolicy> Lookup(const ScheduleCacheKey& key);
  void Insert(const ScheduleCacheKey& key, const SchedulingPolicy& policy);

  size_t size() const;
  size_t capacity() const { return capacity_; }
  int64_t hits() const;
  int64_t misses() const;

 private:
  using Entry = std::pair<ScheduleCacheKey, SchedulingPolicy>;

  const size_t capacity_;
  const Duration bucket_;
  mutable absl::Mutex mu_;
  std::list<Entry> order_ ABSL_GUARDED_BY(mu_);  // front is most recent
  absl::flat_hash_map<ScheduleCacheKey, std::list<Entry>::iterator> index_
      ABSL_GUARDED_BY(mu_);
  int64_t hits_ ABSL_GUARDED_BY(mu_) = 0;
  int64_t misses_ ABSL_GUARDED_BY(mu_) = 0;
};

struct CachedSchedule {
  SchedulingPolicy policy;
  bool cache_hit = false;
};

// Returns the cached policy for the instance's key, or solves the instance
// at the quantized deadline and caches the result. Deadlines shorter than
// one bucket bypass the cache and are solved as given.
absl::StatusOr<CachedSchedule> CacheLookupOrSchedule(
    ScheduleCache& cache, const SchedulingInstance& instance,
    const SchedulerOptions& options = {},
    ScheduleMethod method = ScheduleMethod::kAuto);

}  // namespace elastic_serving

#endif  // ELASTIC_SERVING_SCHEDULE_CACHE_H_
