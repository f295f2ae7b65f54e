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
#include <vector>

#include "vann/dataset.hpp"
#include "vann/kmeans.hpp"

namespace vann {

class IndexSerializer;

/// floor(4 * sqrt(n)), clamped to [1, n].
inline std::size_t default_nlist(std::size_t n) {
  if (n == 0) throw InputError("default_nlist: n must be positive");
  const auto v = static_cast<std::size_t>(std::floor(4.0 * std::sqrt(static_cast<double>(n))));
  return std::clamp<std::size_t>(v, 1, n);
}

namespace detail {

/// The `nprobe` centroids closest to q, best first.
inline std::vector<VectorId> probe_cells(const Dataset& centroids, FloatSpan q, std::size_t nprobe,
                                         DistanceCallCounter* counter) {
  std::vector<Neighbor> cells;
  cells.reserve(centroids.size());
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    cells.push_back({counted_l2(q, centroids.row(c), counter), static_cast<VectorId>(c)});
  }
  return top_k(std::move(cells), nprobe).ids;
}

inline void check_nprobe(std::size_t nprobe, std::size_t nlist, const char* who) {
  if (nprobe == 0 || nprobe > nlist) {
    throw InputError(std::string(who) + ": nprobe=" + std::to_string(nprobe) + " outside [1, " +
                     std::to_string(nlist) + "]");
  }
}

}  // namespace detail

struct IvfFlatParams {
  std::size_t nlist = 0;  // 0: default_nlist(n)
  std::size_t kmeans_iters = kDefaultKMeansIters;
  std::uint64_t seed = 0;
};

/// Inverted file over k-means cells; each list stores full vectors.
class IvfFlatIndex {
 public:
  struct InvertedList {
    std::vector<VectorId> ids;
    std::vector<float> vectors;  // ids.size() x dim, row-major

    friend bool operator==(const InvertedList&, const InvertedList&) = default;
  };

  IvfFlatIndex() = default;

  static IvfFlatIndex build(const Dataset& data, IvfFlatParams params) {
    if (params.nlist == 0) params.nlist = default_nlist(data.size());
    if (params.nlist > data.size()) {
      throw InputError("ivfflat_build: nlist=" + std::to_string(params.nlist) + " exceeds n=" +
                       std::to_string(data.size()));
    }
    KMeansModel km = kmeans_fit(data, params.nlist, params.kmeans_iters, params.seed);
    IvfFlatIndex idx;
    idx.params_ = params;
    idx.dim_ = data.dim();
    idx.n_ = data.size();
    idx.lists_.resize(params.nlist);
    for (std::size_t i = 0; i < data.size(); ++i) {
      InvertedList& l = idx.lists_[km.assignment[i]];
      l.ids.push_back(static_cast<VectorId>(i));
      const FloatSpan x = data.row(i);
      l.vectors.insert(l.vectors.end(), x.begin(), x.end());
    }
    idx.centroids_ = std::move(km.centroids);
    return idx;
  }

  /// Exact k-NN restricted to the `nprobe` cells nearest to q.
  SearchResult search(FloatSpan q, std::size_t k, std::size_t nprobe,
                      DistanceCallCounter* counter = nullptr) const {
    if (q.size() != dim_) throw InputError("ivfflat_search: query dimension mismatch");
    if (k == 0) throw InputError("ivfflat_search: k must be positive");
    detail::check_nprobe(nprobe, nlist(), "ivfflat_search");
    std::vector<Neighbor> cand;
    for (VectorId c : detail::probe_cells(centroids_, q, nprobe, counter)) {
      const InvertedList& l = lists_[c];
      for (std::size_t j = 0; j < l.ids.size(); ++j) {
        const FloatSpan x(l.vectors.data() + j * dim_, dim_);
        cand.push_back({detail::counted_l2(q, x, counter), l.ids[j]});
      }
    }
    return top_k(std::move(cand), k);
  }

  SearchResult search(FloatSpan q, std::size_t k, const SearchParams& p,
                      DistanceCallCounter* counter = nullptr) const {
    return search(q, k, std::min(p.nprobe, nlist()), counter);
  }

  std::size_t nlist() const noexcept { return lists_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return n_; }
  const Dataset& centroids() const noexcept { return centroids_; }
  const std::vector<InvertedList>& lists() const noexcept { return lists_; }
  const IvfFlatParams& params() const noexcept { return params_; }

  /// Rebuild the dataset from the stored lists.
  Dataset reconstruct() const {
    std::vector<float> v(n_ * dim_);
    for (const InvertedList& l : lists_) {
      for (std::size_t j = 0; j < l.ids.size(); ++j) {
        std::copy_n(l.vectors.begin() + static_cast<std::ptrdiff_t>(j * dim_), dim_,
                    v.begin() + static_cast<std::ptrdiff_t>(l.ids[j] * dim_));
      }
    }
    return Dataset(std::move(v), dim_);
  }

 private:
  friend class IndexSerializer;

  IvfFlatParams params_;
  std::size_t dim_ = 0;
  std::size_t n_ = 0;
  Dataset centroids_;
  std::vector<InvertedList> lists_;
};

}  // namespace vann
