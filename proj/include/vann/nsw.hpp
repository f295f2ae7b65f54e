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
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

#include "vann/dataset.hpp"
#include "vann/graph.hpp"
#include "vann/rng.hpp"

namespace vann {

class IndexSerializer;

struct NswParams {
  std::size_t nn = 16;
  std::size_t ef_construction = 256;
  std::uint64_t seed = 0;
};

/// Navigable small world graph built by incremental insertion: each new
/// vertex is linked both ways to its `nn` nearest already-inserted vertices
/// found by a beam search of width ef_construction.
class NswIndex {
 public:
  NswIndex() = default;

  static NswIndex build(Dataset data, NswParams params) {
    if (params.nn == 0) throw InputError("nsw_build: nn must be >= 1");
    if (params.ef_construction == 0) throw InputError("nsw_build: ef_construction must be >= 1");
    const std::size_t n = data.size();
    NswIndex idx;
    idx.params_ = params;
    idx.adjacency_.assign(n, {});

    Rng rng(params.seed);
    std::vector<VectorId> order(n);
    std::iota(order.begin(), order.end(), VectorId{0});
    rng.shuffle(order);

    const auto& adj = idx.adjacency_;
    auto edges = [&adj](VectorId v) -> const std::vector<VectorId>& { return adj[v]; };
    for (std::size_t i = 1; i < n; ++i) {
      const VectorId p = order[i];
      const VectorId entry = order[rng.index(i)];
      const std::size_t ef = std::max(params.ef_construction, params.nn);
      const std::vector<Neighbor> found =
          beam_search(data, data.row(p), std::span(&entry, 1), ef, edges, nullptr);
      for (std::size_t j = 0; j < found.size() && j < params.nn; ++j) {
        idx.adjacency_[p].push_back(found[j].id);
        idx.adjacency_[found[j].id].push_back(p);
      }
    }
    idx.entry_point_ = n > 0 ? order[rng.index(n)] : 0;
    idx.data_ = std::move(data);
    return idx;
  }

  /// Beam of width max(ef_search, k) from the entry vertex.
  SearchResult search(FloatSpan q, std::size_t k, std::size_t ef_search,
                      DistanceCallCounter* counter = nullptr) const {
    check_query(data_, q, k, "nsw_search");
    const auto& adj = adjacency_;
    auto edges = [&adj](VectorId v) -> const std::vector<VectorId>& { return adj[v]; };
    const VectorId entry = entry_point_;
    return to_result(beam_search(data_, q, std::span(&entry, 1), std::max(ef_search, k), edges,
                                 counter),
                     k);
  }

  SearchResult search(FloatSpan q, std::size_t k, const SearchParams& p,
                      DistanceCallCounter* counter = nullptr) const {
    return search(q, k, p.ef_search, counter);
  }

  const AdjacencyList& adjacency() const noexcept { return adjacency_; }
  VectorId entry_point() const noexcept { return entry_point_; }
  const Dataset& data() const noexcept { return data_; }
  const NswParams& params() const noexcept { return params_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t dim() const noexcept { return data_.dim(); }

 private:
  friend class IndexSerializer;

  NswParams params_;
  Dataset data_;
  AdjacencyList adjacency_;
  VectorId entry_point_ = 0;
};

}  // namespace vann
