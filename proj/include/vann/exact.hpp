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
#include <vector>

#include "vann/dataset.hpp"

namespace vann {

/// Linear scan; the ground truth every index is measured against.
inline SearchResult exact_knn(const Dataset& data, FloatSpan q, std::size_t k,
                              DistanceCallCounter* counter = nullptr) {
  check_query(data, q, k, "exact_knn");
  std::vector<Neighbor> all;
  all.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    all.push_back({detail::counted_l2(q, data.row(i), counter), static_cast<VectorId>(i)});
  }
  return top_k(std::move(all), k);
}

inline std::vector<SearchResult> exact_knn_batch(const Dataset& data, const Dataset& queries,
                                                 std::size_t k) {
  std::vector<SearchResult> out;
  out.reserve(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) out.push_back(exact_knn(data, queries.row(i), k));
  return out;
}

/// Brute-force index: stores the vectors, answers with exact_knn.
class FlatIndex {
 public:
  FlatIndex() = default;
  explicit FlatIndex(Dataset data) : data_(std::move(data)) {}

  SearchResult search(FloatSpan q, std::size_t k, const SearchParams& = {},
                      DistanceCallCounter* counter = nullptr) const {
    return exact_knn(data_, q, k, counter);
  }

  const Dataset& data() const noexcept { return data_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t dim() const noexcept { return data_.dim(); }

  friend bool operator==(const FlatIndex&, const FlatIndex&) = default;

 private:
  Dataset data_;
};

}  // namespace vann
