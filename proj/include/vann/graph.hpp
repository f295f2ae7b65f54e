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

#include <cstddef>
#include <functional>
#include <queue>
#include <span>
#include <vector>

#include "vann/dataset.hpp"

namespace vann {

using AdjacencyList = std::vector<std::vector<VectorId>>;

/// Best-first beam search over a proximity graph.
///
/// `neighbors(v)` returns the out-edges of v. The beam holds at most `ef`
/// results and the search stops once the closest unexpanded candidate is
/// farther than the worst result of a full beam. Returns the beam sorted
/// best first.
template <typename NeighborFn>
std::vector<Neighbor> beam_search(const Dataset& data, FloatSpan q, std::span<const VectorId> entries,
                                  std::size_t ef, NeighborFn&& neighbors,
                                  DistanceCallCounter* counter) {
  std::vector<char> visited(data.size(), 0);
  std::priority_queue<Neighbor, std::vector<Neighbor>, std::greater<>> frontier;
  std::priority_queue<Neighbor> beam;  // worst on top

  for (VectorId e : entries) {
    if (visited[e]) continue;
    visited[e] = 1;
    const Neighbor nb{detail::counted_l2(q, data.row(e), counter), e};
    frontier.push(nb);
    beam.push(nb);
    if (beam.size() > ef) beam.pop();
  }

  while (!frontier.empty()) {
    const Neighbor cur = frontier.top();
    if (beam.size() >= ef && beam.top() < cur) break;
    frontier.pop();
    for (VectorId v : neighbors(cur.id)) {
      if (visited[v]) continue;
      visited[v] = 1;
      const Neighbor nb{detail::counted_l2(q, data.row(v), counter), v};
      if (beam.size() < ef || nb < beam.top()) {
        frontier.push(nb);
        beam.push(nb);
        if (beam.size() > ef) beam.pop();
      }
    }
  }

  std::vector<Neighbor> out(beam.size());
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = beam.top();
    beam.pop();
  }
  return out;
}

inline SearchResult to_result(const std::vector<Neighbor>& sorted, std::size_t k) {
  SearchResult r;
  for (std::size_t i = 0; i < sorted.size() && i < k; ++i) {
    r.ids.push_back(sorted[i].id);
    r.distances.push_back(sorted[i].distance);
  }
  return r;
}

}  // namespace vann
