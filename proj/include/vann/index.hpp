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

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vann/annoy.hpp"
#include "vann/exact.hpp"
#include "vann/hnsw.hpp"
#include "vann/ivf_flat.hpp"
#include "vann/ivf_pq.hpp"
#include "vann/nsw.hpp"

namespace vann {

enum class Algorithm : std::uint8_t { flat = 0, ivfflat = 1, ivfpq = 2, nsw = 3, hnsw = 4, annoy = 5 };

inline constexpr std::string_view algorithm_name(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::flat: return "flat";
    case Algorithm::ivfflat: return "ivfflat";
    case Algorithm::ivfpq: return "ivfpq";
    case Algorithm::nsw: return "nsw";
    case Algorithm::hnsw: return "hnsw";
    case Algorithm::annoy: return "annoy";
  }
  return "?";
}

inline Algorithm parse_algorithm(std::string_view s) {
  for (auto a : {Algorithm::flat, Algorithm::ivfflat, Algorithm::ivfpq, Algorithm::nsw,
                 Algorithm::hnsw, Algorithm::annoy}) {
    if (algorithm_name(a) == s) return a;
  }
  throw InputError("unknown algorithm '" + std::string(s) + "'");
}

/// Any built index; alternative order matches Algorithm.
using AnyIndex = std::variant<FlatIndex, IvfFlatIndex, IvfPqIndex, NswIndex, HnswIndex, AnnoyIndex>;

inline Algorithm algorithm_of(const AnyIndex& index) noexcept {
  return static_cast<Algorithm>(index.index());
}

inline SearchResult search(const AnyIndex& index, FloatSpan q, std::size_t k,
                           const SearchParams& params, DistanceCallCounter* counter = nullptr) {
  return std::visit([&](const auto& idx) { return idx.search(q, k, params, counter); }, index);
}

inline std::vector<SearchResult> search_batch(const AnyIndex& index, const Dataset& queries,
                                              std::size_t k, const SearchParams& params) {
  std::vector<SearchResult> out;
  out.reserve(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    out.push_back(search(index, queries.row(i), k, params));
  }
  return out;
}

inline std::size_t index_dim(const AnyIndex& index) noexcept {
  return std::visit([](const auto& idx) { return idx.dim(); }, index);
}

inline std::size_t index_size(const AnyIndex& index) noexcept {
  return std::visit([](const auto& idx) { return idx.size(); }, index);
}

}  // namespace vann
