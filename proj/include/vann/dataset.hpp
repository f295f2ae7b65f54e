// Copyright 2026 The vann Authors
//
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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "vann/error.hpp"
#include "vann/kernels.hpp"

namespace vann {

using VectorId = std::uint32_t;

/// Dense row-major matrix of finite 32-bit floats.
class Dataset {
 public:
  Dataset() = default;

  Dataset(std::vector<float> values, std::size_t dim) : values_(std::move(values)), dim_(dim) {
    if (dim_ == 0) throw InputError("Dataset: dim must be positive");
    if (values_.empty() || values_.size() % dim_ != 0) {
      throw InputError("Dataset: value count " + std::to_string(values_.size()) +
                       " is not a positive multiple of dim " + std::to_string(dim_));
    }
    for (float v : values_) {
      if (!std::isfinite(v)) throw InputError("Dataset: non-finite entry");
    }
  }

  std::size_t size() const noexcept { return dim_ == 0 ? 0 : values_.size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return values_.empty(); }

  FloatSpan row(std::size_t i) const noexcept {
    return FloatSpan(values_.data() + i * dim_, dim_);
  }

  const std::vector<float>& values() const noexcept { return values_; }

  /// First `count` rows.
  Dataset prefix(std::size_t count) const {
    if (count == 0 || count > size()) {
      throw InputError("Dataset::prefix: count " + std::to_string(count) +
                       " outside [1, " + std::to_string(size()) + "]");
    }
    return Dataset(std::vector<float>(values_.begin(), values_.begin() + count * dim_), dim_);
  }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<float> values_;
  std::size_t dim_ = 0;
};

/// k nearest ids in non-decreasing distance order.
struct SearchResult {
  std::vector<VectorId> ids;
  std::vector<float> distances;

  std::size_t size() const noexcept { return ids.size(); }
  friend bool operator==(const SearchResult&, const SearchResult&) = default;
};

/// Search-time knobs shared by every index; each index reads the ones it
/// understands.
struct SearchParams {
  std::size_t nprobe = 8;
  std::size_t ef_search = 128;
  std::size_t search_budget = 0;  // 0: index default
};

/// Per-query instrumentation. `chunk_calls` counts sub-vector distance
/// evaluations (IVFPQ distance tables); the others count full-vector calls.
struct DistanceCallCounter {
  std::uint64_t l2_calls = 0;
  std::uint64_t dot_calls = 0;
  std::uint64_t chunk_calls = 0;

  std::uint64_t full_calls() const noexcept { return l2_calls + dot_calls; }
};

namespace detail {

inline float counted_l2(FloatSpan a, FloatSpan b, DistanceCallCounter* counter) {
  if (counter != nullptr) ++counter->l2_calls;
  return l2_squared(a, b);
}

inline float counted_dot(FloatSpan a, FloatSpan b, DistanceCallCounter* counter) {
  if (counter != nullptr) ++counter->dot_calls;
  return dot(a, b);
}

}  // namespace detail

/// Candidate ordered by (distance, id); the id breaks ties.
struct Neighbor {
  float distance;
  VectorId id;

  friend bool operator<(const Neighbor& a, const Neighbor& b) noexcept {
    return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
  }
  friend bool operator>(const Neighbor& a, const Neighbor& b) noexcept { return b < a; }
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Sort candidates and keep the best k.
inline SearchResult top_k(std::vector<Neighbor> candidates, std::size_t k) {
  const std::size_t keep = std::min(k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                    candidates.end());
  SearchResult r;
  r.ids.reserve(keep);
  r.distances.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    r.ids.push_back(candidates[i].id);
    r.distances.push_back(candidates[i].distance);
  }
  return r;
}

inline void check_query(const Dataset& data, FloatSpan q, std::size_t k, const char* who) {
  if (q.size() != data.dim()) {
    throw InputError(std::string(who) + ": query dim " + std::to_string(q.size()) +
                     " != dataset dim " + std::to_string(data.dim()));
  }
  if (k == 0 || k > data.size()) {
    throw InputError(std::string(who) + ": k=" + std::to_string(k) + " outside [1, " +
                     std::to_string(data.size()) + "]");
  }
}

/// |result ∩ truth| / |truth| over the first k truth ids.
inline double recall_at_k(std::span<const VectorId> result, std::span<const VectorId> truth) {
  if (truth.empty()) return 1.0;
  std::unordered_set<VectorId> want(truth.begin(), truth.end());
  std::size_t hit = 0;
  for (VectorId id : result) hit += want.erase(id);
  return static_cast<double>(hit) / static_cast<double>(truth.size());
}

/// Mean recall over a query batch.
inline double mean_recall(const std::vector<SearchResult>& results,
                          const std::vector<SearchResult>& truth) {
  if (results.size() != truth.size()) throw InputError("mean_recall: batch size mismatch");
  if (results.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < results.size(); ++i) sum += recall_at_k(results[i].ids, truth[i].ids);
  return sum / static_cast<double>(results.size());
}

}  // namespace vann
