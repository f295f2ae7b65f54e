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
#include <string>
#include <string_view>
#include <vector>

#include "vann/dataset.hpp"
#include "vann/graph.hpp"
#include "vann/rng.hpp"

namespace vann {

class IndexSerializer;

enum class LevelMode : std::uint8_t {
  geometric,  // P(level >= l) = M^-l
  equal,      // uniform over ceil(log_M n) levels
  flat,       // every vertex on layer 0 only
};

inline LevelMode parse_level_mode(std::string_view s) {
  if (s == "geometric") return LevelMode::geometric;
  if (s == "equal") return LevelMode::equal;
  if (s == "flat") return LevelMode::flat;
  throw InputError("unknown HNSW level mode '" + std::string(s) + "'");
}

inline constexpr std::string_view level_mode_name(LevelMode m) noexcept {
  switch (m) {
    case LevelMode::geometric: return "geometric";
    case LevelMode::equal: return "equal";
    case LevelMode::flat: return "flat";
  }
  return "?";
}

/// Draws the top layer of each inserted vertex.
class LevelSampler {
 public:
  LevelSampler(LevelMode mode, std::size_t M, std::size_t n, std::uint64_t seed)
      : mode_(mode), rng_(seed) {
    if (M < 2) throw InputError("LevelSampler: M must be >= 2");
    mult_ = 1.0 / std::log(static_cast<double>(M));
    const double levels = std::ceil(std::log(static_cast<double>(std::max<std::size_t>(n, 1))) * mult_);
    num_levels_ = std::max<std::size_t>(1, static_cast<std::size_t>(levels));
  }

  std::size_t next() {
    switch (mode_) {
      case LevelMode::geometric: {
        double u = rng_.uniform();
        while (u <= 0.0) u = rng_.uniform();
        return static_cast<std::size_t>(-std::log(u) * mult_);
      }
      case LevelMode::equal:
        return rng_.index(num_levels_);
      case LevelMode::flat:
        return 0;
    }
    return 0;
  }

 private:
  LevelMode mode_;
  Rng rng_;
  double mult_ = 0.0;
  std::size_t num_levels_ = 1;
};

struct HnswParams {
  std::size_t M = 16;  // max edges per vertex on upper layers; layer 0 allows 2M
  std::size_t ef_construction = 256;
  LevelMode levels = LevelMode::geometric;
  std::uint64_t seed = 0;
};

/// Hierarchy of nested proximity graphs; layer 0 holds every vertex.
class HnswIndex {
 public:
  HnswIndex() = default;

  static HnswIndex build(Dataset data, HnswParams params) {
    if (params.M < 2) throw InputError("hnsw_build: M must be >= 2");
    if (params.ef_construction == 0) throw InputError("hnsw_build: ef_construction must be >= 1");
    const std::size_t n = data.size();
    HnswIndex idx;
    idx.params_ = params;
    idx.links_.resize(n);
    idx.level_of_.resize(n);

    LevelSampler sampler(params.levels, params.M, n, params.seed);
    for (std::size_t v = 0; v < n; ++v) idx.level_of_[v] = sampler.next();
    idx.data_ = std::move(data);
    for (std::size_t v = 0; v < n; ++v) idx.insert(static_cast<VectorId>(v));
    return idx;
  }

  /// Greedy descent through upper layers, then a beam of
  /// max(ef_search, k) on layer 0.
  SearchResult search(FloatSpan q, std::size_t k, std::size_t ef_search,
                      DistanceCallCounter* counter = nullptr) const {
    check_query(data_, q, k, "hnsw_search");
    std::vector<VectorId> ep{entry_point_};
    for (std::size_t l = max_level_; l > 0; --l) {
      ep = {search_layer(q, ep, 1, l, counter).front().id};
    }
    return to_result(search_layer(q, ep, std::max(ef_search, k), 0, counter), k);
  }

  SearchResult search(FloatSpan q, std::size_t k, const SearchParams& p,
                      DistanceCallCounter* counter = nullptr) const {
    return search(q, k, p.ef_search, counter);
  }

  std::size_t max_level() const noexcept { return max_level_; }
  VectorId entry_point() const noexcept { return entry_point_; }
  std::size_t level_of(VectorId v) const noexcept { return level_of_[v]; }
  const std::vector<VectorId>& neighbors(VectorId v, std::size_t layer) const {
    return links_[v][layer];
  }
  const Dataset& data() const noexcept { return data_; }
  const HnswParams& params() const noexcept { return params_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t dim() const noexcept { return data_.dim(); }

  /// Vertices present on `layer`.
  std::vector<VectorId> layer_vertices(std::size_t layer) const {
    std::vector<VectorId> out;
    for (std::size_t v = 0; v < level_of_.size(); ++v) {
      if (level_of_[v] >= layer) out.push_back(static_cast<VectorId>(v));
    }
    return out;
  }

 private:
  friend class IndexSerializer;

  std::size_t max_degree(std::size_t layer) const noexcept {
    return layer == 0 ? 2 * params_.M : params_.M;
  }

  std::vector<Neighbor> search_layer(FloatSpan q, const std::vector<VectorId>& entries,
                                     std::size_t ef, std::size_t layer,
                                     DistanceCallCounter* counter) const {
    auto edges = [this, layer](VectorId v) -> const std::vector<VectorId>& {
      return links_[v][layer];
    };
    return beam_search(data_, q, entries, ef, edges, counter);
  }

  // Keep a candidate only if it is closer to the base than to every
  // neighbor kept so far. `sorted` is ascending by distance to the base.
  std::vector<VectorId> select_neighbors(const std::vector<Neighbor>& sorted,
                                         std::size_t limit) const {
    std::vector<VectorId> kept;
    for (const Neighbor& c : sorted) {
      if (kept.size() >= limit) break;
      bool good = true;
      for (VectorId r : kept) {
        if (l2_squared(data_.row(c.id), data_.row(r)) < c.distance) {
          good = false;
          break;
        }
      }
      if (good) kept.push_back(c.id);
    }
    return kept;
  }

  void insert(VectorId v) {
    const std::size_t level = level_of_[v];
    links_[v].assign(level + 1, {});
    if (v == 0) {
      entry_point_ = v;
      max_level_ = level;
      return;
    }
    const FloatSpan x = data_.row(v);
    std::vector<VectorId> ep{entry_point_};
    for (std::size_t l = max_level_; l > level; --l) {
      ep = {search_layer(x, ep, 1, l, nullptr).front().id};
    }
    for (std::size_t l = std::min(level, max_level_) + 1; l-- > 0;) {
      const std::vector<Neighbor> found = search_layer(x, ep, params_.ef_construction, l, nullptr);
      links_[v][l] = select_neighbors(found, params_.M);
      for (VectorId u : links_[v][l]) {
        std::vector<VectorId>& back = links_[u][l];
        back.push_back(v);
        if (back.size() > max_degree(l)) {
          std::vector<Neighbor> cand;
          cand.reserve(back.size());
          for (VectorId w : back) cand.push_back({l2_squared(data_.row(u), data_.row(w)), w});
          std::sort(cand.begin(), cand.end());
          back = select_neighbors(cand, max_degree(l));
        }
      }
      ep.clear();
      for (const Neighbor& f : found) ep.push_back(f.id);
    }
    if (level > max_level_) {
      max_level_ = level;
      entry_point_ = v;
    }
  }

  HnswParams params_;
  Dataset data_;
  std::vector<std::vector<std::vector<VectorId>>> links_;  // [vertex][layer]
  std::vector<std::size_t> level_of_;
  VectorId entry_point_ = 0;
  std::size_t max_level_ = 0;
};

}  // namespace vann
