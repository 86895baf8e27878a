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

// Test-only oracles. They share no code with the library solvers.

#ifndef ELASTIC_SERVING_TESTS_TEST_ORACLES_H_
#define ELASTIC_SERVING_TESTS_TEST_ORACLES_H_

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "elastic_serving/lp_solver.h"
#include "elastic_serving/profiles.h"

namespace elastic_serving::testing {

#ifndef ELASTIC_SERVING_SOURCE_DIR
#define ELASTIC_SERVING_SOURCE_DIR "."
#endif

inline std::string SourcePath(const std::string& relative) {
  return std::string(ELASTIC_SERVING_SOURCE_DIR) + "/" + relative;
}

// Plain sub-model description with latencies in whole microseconds.
struct OracleModel {
  double accuracy;
  int64_t latency_us;
};

struct OracleOptimum {
  double value = 0.0;
  std::vector<std::vector<int64_t>> argmax;  // every optimal count vector
};

// Walks every count vector with sum <= n_mb, keeps the feasible ones and
// returns the best objective sum(n_i p_i) / n_mb plus all its maximizers.
inline OracleOptimum EnumerateOptimum(const std::vector<OracleModel>& models,
                                      int64_t n_mb, int64_t deadline_us) {
  OracleOptimum best;
  best.value = -1.0;
  std::vector<int64_t> counts(models.size(), 0);
  std::function<void(size_t, int64_t)> visit = [&](size_t i, int64_t left) {
    if (i == models.size()) {
      int64_t time = 0;
      double value = 0.0;
      for (size_t j = 0; j < models.size(); ++j) {
        time += counts[j] * models[j].latency_us;
        value += static_cast<double>(counts[j]) * models[j].accuracy;
      }
      if (time > deadline_us) return;
      value /= static_cast<double>(n_mb);
      if (value > best.value + 1e-12) {
        best.value = value;
        best.argmax = {counts};
      } else if (std::fabs(value - best.value) <= 1e-12) {
        best.argmax.push_back(counts);
      }
      return;
    }
    for (int64_t n = 0; n <= left; ++n) {
      counts[i] = n;
      visit(i + 1, left - n);
    }
    counts[i] = 0;
  };
  visit(0, n_mb);
  return best;
}

inline std::vector<OracleModel> OracleModelsOf(const ProfileSet& profiles) {
  std::vector<OracleModel> out;
  for (const SubModelProfile& m : profiles.sub_models()) {
    out.push_back({m.accuracy, m.batch_latency.count()});
  }
  return out;
}

// Solves a small bounded LP by visiting every vertex: each choice of n
// tight constraints (rows or x_j = 0) is solved by Gaussian elimination and
// kept if feasible. Returns nullopt when no vertex is feasible.
inline std::optional<double> VertexEnumerationLp(const LpProblem& lp) {
  const int n = lp.num_vars;
  struct Plane {
    std::vector<double> a;
    double b;
  };
  std::vector<Plane> planes;
  for (const LpConstraint& c : lp.constraints) {
    planes.push_back({c.coefficients, c.bound});
  }
  for (int j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    planes.push_back({e, 0.0});
  }
  auto feasible = [&](const std::vector<double>& x) {
    for (double v : x) {
      if (v < -1e-7) return false;
    }
    for (const LpConstraint& c : lp.constraints) {
      double lhs = 0.0;
      for (int j = 0; j < n; ++j) lhs += c.coefficients[j] * x[j];
      if (c.relation == Relation::kLessEqual && lhs > c.bound + 1e-7) {
        return false;
      }
      if (c.relation == Relation::kGreaterEqual && lhs < c.bound - 1e-7) {
        return false;
      }
    }
    return true;
  };

  std::optional<double> best;
  std::vector<int> pick(n);
  std::function<void(int, int)> choose = [&](int start, int depth) {
    if (depth == n) {
      std::vector<std::vector<double>> m(n, std::vector<double>(n + 1));
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) m[r][c] = planes[pick[r]].a[c];
        m[r][n] = planes[pick[r]].b;
      }
      for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r) {
          if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
        }
        if (std::fabs(m[piv][col]) < 1e-12) return;  // singular
        std::swap(m[piv], m[col]);
        for (int r = 0; r < n; ++r) {
          if (r == col) continue;
          const double f = m[r][col] / m[col][col];
          for (int c = col; c <= n; ++c) m[r][c] -= f * m[col][c];
        }
      }
      std::vector<double> x(n);
      for (int r = 0; r < n; ++r) x[r] = m[r][n] / m[r][r];
      if (!feasible(x)) return;
      double value = 0.0;
      for (int j = 0; j < n; ++j) value += lp.objective[j] * x[j];
      if (!best || value > *best) best = value;
      return;
    }
    for (int i = start; i < static_cast<int>(planes.size()); ++i) {
      pick[depth] = i;
      choose(i + 1, depth + 1);
    }
  };
  choose(0, 0);
  return best;
}

// Profile set with integer-second latencies, slice rates 1, (K-1)/K, ...
inline ProfileSet MakeProfiles(const std::vector<double>& accuracies,
                               const std::vector<int64_t>& latency_seconds,
                               int64_t mini_batch_size = 1) {
  std::vector<SubModelProfile> models;
  const int k = static_cast<int>(accuracies.size());
  for (int i = 0; i < k; ++i) {
    SubModelProfile m;
    m.slice_rate = static_cast<double>(k - i) / k;
    m.accuracy = accuracies[i];
    m.batch_latency = std::chrono::seconds(latency_seconds[i]);
    models.push_back(m);
  }
  return *ProfileSet::Create("test", mini_batch_size, std::move(models));
}

// Latencies t = [6, 4, 2, 1] s with accuracies [0.90, 0.85, 0.74, 0.70]:
// a four-sub-model, four-mini-batch example (T_fast = 4 s,
// T_slow = 24 s).
inline ProfileSet FourModelProfiles() {
  return MakeProfiles({0.90, 0.85, 0.74, 0.70}, {6, 4, 2, 1});
}

// The bundled chest X-ray profile (S_mb = 32).
inline ProfileSet XrayProfiles() {
  return *LoadProfileSetFromFile(SourcePath("profiles/resnet50_xray.json"));
}

struct RandomInstance {
  std::vector<double> accuracies;
  std::vector<int64_t> latency_seconds;
  int64_t num_minibatches;
  Duration deadline;
};

// K in [1, 4], N_mb in [1, 12], t_i in {1..10} s, p_i in (0, 1],
// D in [1 s, N_mb * max t]. Half of the deadlines are whole seconds.
inline RandomInstance DrawInstance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> k_dist(1, 4);
  std::uniform_int_distribution<int64_t> n_dist(1, 12);
  std::uniform_int_distribution<int64_t> t_dist(1, 10);
  std::uniform_real_distribution<double> p_dist(0.0, 1.0);
  RandomInstance inst;
  const int k = k_dist(rng);
  int64_t max_t = 0;
  for (int i = 0; i < k; ++i) {
    double p = 1.0 - p_dist(rng);  // (0, 1]
    inst.accuracies.push_back(p);
    inst.latency_seconds.push_back(t_dist(rng));
    max_t = std::max(max_t, inst.latency_seconds.back());
  }
  inst.num_minibatches = n_dist(rng);
  const int64_t hi_s = inst.num_minibatches * max_t;
  if (rng() % 2 == 0) {
    inst.deadline =
        std::chrono::seconds(std::uniform_int_distribution<int64_t>(1, hi_s)(rng));
  } else {
    inst.deadline = Duration(std::uniform_int_distribution<int64_t>(
        1'000'000, hi_s * 1'000'000)(rng));
  }
  return inst;
}

}  // namespace elastic_serving::testing

#endif  // ELASTIC_SERVING_TESTS_TEST_ORACLES_H_
