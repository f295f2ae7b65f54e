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
#include <string>
#include <type_traits>
#include <variant>

#include "vann/index.hpp"

namespace vann {

/// Mean kernel work per query for one algorithm, the simulator's input.
struct WorkloadProfile {
  std::string algorithm;
  std::size_t dim = 0;
  double calls_per_query = 0.0;
  KernelKind kernel = KernelKind::l2;

  friend bool operator==(const WorkloadProfile&, const WorkloadProfile&) = default;
};

/// Run every query with a fresh counter and average the kernel calls.
///
/// Full-vector calls are profiled at the index dimension, with the kernel
/// that dominates the count. IVFPQ is profiled at the chunk length: each
/// distance-table entry is one chunk call and each coarse-quantizer call
/// counts as M chunk calls.
template <typename Index>
WorkloadProfile profile_query(const Index& index, const Dataset& queries, std::size_t k,
                              const SearchParams& params, std::string algorithm) {
  if (queries.size() == 0) throw InputError("profile_query: empty query set");
  DistanceCallCounter total;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    DistanceCallCounter c;
    index.search(queries.row(i), k, params, &c);
    total.l2_calls += c.l2_calls;
    total.dot_calls += c.dot_calls;
    total.chunk_calls += c.chunk_calls;
  }
  const auto nq = static_cast<double>(queries.size());
  WorkloadProfile p;
  p.algorithm = std::move(algorithm);
  if constexpr (std::is_same_v<Index, IvfPqIndex>) {
    const PqCodebook& cb = index.codebook();
    p.dim = cb.dsub;
    p.kernel = KernelKind::l2;
    p.calls_per_query =
        static_cast<double>(total.chunk_calls + total.full_calls() * cb.M) / nq;
  } else {
    p.dim = index.dim();
    p.kernel = total.dot_calls > total.l2_calls ? KernelKind::dot : KernelKind::l2;
    p.calls_per_query = static_cast<double>(total.full_calls()) / nq;
  }
  return p;
}

inline WorkloadProfile profile_query(const AnyIndex& index, const Dataset& queries, std::size_t k,
                                     const SearchParams& params) {
  return std::visit(
      [&](const auto& idx) {
        return profile_query(idx, queries, k, params, std::string(algorithm_name(algorithm_of(index))));
      },
      index);
}

}  // namespace vann
