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

#include "elastic_serving/schedule_cache.h"

#include <algorithm>

namespace elastic_serving {

ScheduleCache::ScheduleCache(size_t capacity, Duration bucket)
    : capacity_(capacity), bucket_(std::max(bucket, Duration(1))) {}

Duration ScheduleCache::QuantizedDeadline(Duration deadline) const {
  return (deadline / bucket_) * bucket_;
}

ScheduleCacheKey ScheduleCache::KeyFor(
    const SchedulingInstance& instance) const {
  return ScheduleCacheKey{instance.deadline / bucket_,
                          instance.num_minibatches,
                          instance.profiles.fingerprint()};
}

std::optional<SchedulingPolicy> ScheduleCache::Lookup(
    const ScheduleCacheKey& key) {
  absl::MutexLock lock(&mu_);
  auto it = index_.find(key);
  if (it == index_.end()) {
    ++misses_;
    return std::nullopt;
  }
  ++hits_;
  order_.splice(order_.begin(), order_, it->second);
  return it->second->second;
}

void ScheduleCache::Insert(const ScheduleCacheKey& key,
                           const SchedulingPolicy& policy) {
  if (capacity_ == 0) return;
  absl::MutexLock lock(&mu_);
  if (auto it = index_.find(key); it != index_.end()) {
    it->second->second = policy;
    order_.splice(order_.begin(), order_, it->second);
    return;
  }
  order_.emplace_front(key, policy);
  index_[key] = order_.begin();
  if (order_.size() > capacity_) {
    index_.erase(order_.back().first);
    order_.pop_back();
  }
}

size_t ScheduleCache::size() const {
  absl::MutexLock lock(&mu_);
  return order_.size();
}

int64_t ScheduleCache::hits() const {
  absl::MutexLock lock(&mu_);
  return hits_;
}

int64_t ScheduleCache::misses() const {
  absl::MutexLock lock(&mu_);
  return misses_;
}

absl::StatusOr<CachedSchedule> CacheLookupOrSchedule(
    ScheduleCache& cache, const SchedulingInstance& instance,
    const SchedulerOptions& options, ScheduleMethod method) {
  const Duration quantized = cache.QuantizedDeadline(instance.deadline);
  if (quantized <= Duration::zero()) {
    auto policy = SolveWith(method, instance, options);
    if (!policy.ok()) return policy.status();
    return CachedSchedule{*std::move(policy), false};
  }
  const ScheduleCacheKey key = cache.KeyFor(instance);
  if (auto hit = cache.Lookup(key)) return CachedSchedule{*std::move(hit), true};

  // Two workers may race here and both solve; they insert identical
  // policies.
  SchedulingInstance at_bucket{instance.profiles, quantized,
                               instance.num_minibatches};
  auto policy = SolveWith(method, at_bucket, options);
  if (!policy.ok()) return policy.status();
  cache.Insert(key, *policy);
  return CachedSchedule{*std::move(policy), false};
}

}  // namespace elastic_serving
