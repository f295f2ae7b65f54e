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
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "vann/dataset.hpp"
#include "vann/ivf_flat.hpp"
#include "vann/kmeans.hpp"
#include "vann/rng.hpp"

namespace vann {

using PqCode = std::vector<std::uint16_t>;

/// M sub-quantizers of ksub centroids each, over chunks of dsub floats.
struct PqCodebook {
  std::size_t M = 0;
  std::size_t dsub = 0;
  std::size_t ksub = 0;
  std::vector<float> centroids;  // M x ksub x dsub

  std::size_t dim() const noexcept { return M * dsub; }

  FloatSpan centroid(std::size_t m, std::size_t c) const noexcept {
    return FloatSpan(centroids.data() + (m * ksub + c) * dsub, dsub);
  }

  friend bool operator==(const PqCodebook&, const PqCodebook&) = default;
};

/// Chunk-to-centroid squared distances for one query residual.
struct DistanceTable {
  std::size_t M = 0;
  std::size_t ksub = 0;
  std::vector<float> entries;  // M x ksub

  float at(std::size_t m, std::size_t c) const noexcept { return entries[m * ksub + c]; }
  float& at(std::size_t m, std::size_t c) noexcept { return entries[m * ksub + c]; }
};

/// x minus its coarse centroid.
inline std::vector<float> residual(FloatSpan x, FloatSpan centroid) {
  std::vector<float> r(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) r[j] = x[j] - centroid[j];
  return r;
}

/// Train one k-means codebook per chunk on coarse residuals.
inline PqCodebook pq_train(const Dataset& data, const KMeansModel& coarse, std::size_t M,
                           std::size_t ksub, std::size_t iters = kDefaultKMeansIters,
                           std::uint64_t seed = 0) {
  const std::size_t d = data.dim();
  if (M == 0 || d % M != 0) {
    throw InputError("pq_train: dim " + std::to_string(d) + " not divisible by M=" +
                     std::to_string(M));
  }
  if (ksub == 0 || ksub > data.size()) {
    throw InputError("pq_train: ksub=" + std::to_string(ksub) + " outside [1, " +
                     std::to_string(data.size()) + "]");
  }
  if (ksub > std::size_t{std::numeric_limits<std::uint16_t>::max()} + 1) {
    throw InputError("pq_train: ksub exceeds 16-bit codes");
  }
  if (coarse.assignment.size() != data.size() || coarse.dim() != d) {
    throw InputError("pq_train: coarse model does not match dataset");
  }
  PqCodebook cb{M, d / M, ksub, {}};
  cb.centroids.resize(M * ksub * cb.dsub);

  const std::size_t n = data.size();
  std::vector<float> sub(n * cb.dsub);
  for (std::size_t m = 0; m < M; ++m) {
    for (std::size_t i = 0; i < n; ++i) {
      const FloatSpan x = data.row(i);
      const FloatSpan c = coarse.centroids.row(coarse.assignment[i]);
      for (std::size_t j = 0; j < cb.dsub; ++j) {
        const std::size_t col = m * cb.dsub + j;
        sub[i * cb.dsub + j] = x[col] - c[col];
      }
    }
    const KMeansModel km = kmeans_fit(Dataset(sub, cb.dsub), ksub, iters, mix_seed(seed, m));
    std::copy(km.centroids.values().begin(), km.centroids.values().end(),
              cb.centroids.begin() + static_cast<std::ptrdiff_t>(m * ksub * cb.dsub));
  }
  return cb;
}

/// Nearest sub-centroid per chunk, ties to the smaller id.
inline PqCode pq_encode(const PqCodebook& cb, FloatSpan r) {
  if (r.size() != cb.dim()) throw InputError("pq_encode: dimension mismatch");
  PqCode code(cb.M);
  for (std::size_t m = 0; m < cb.M; ++m) {
    const FloatSpan chunk = r.subspan(m * cb.dsub, cb.dsub);
    std::size_t best = 0;
    float best_d = std::numeric_limits<float>::infinity();
    for (std::size_t c = 0; c < cb.ksub; ++c) {
      const float dist = l2_squared(chunk, cb.centroid(m, c));
      if (dist < best_d) {
        best_d = dist;
        best = c;
      }
    }
    code[m] = static_cast<std::uint16_t>(best);
  }
  return code;
}

inline DistanceTable pq_distance_table(const PqCodebook& cb, FloatSpan q_residual,
                                       DistanceCallCounter* counter = nullptr) {
  if (q_residual.size() != cb.dim()) throw InputError("pq_distance_table: dimension mismatch");
  DistanceTable t{cb.M, cb.ksub, std::vector<float>(cb.M * cb.ksub)};
  for (std::size_t m = 0; m < cb.M; ++m) {
    const FloatSpan chunk = q_residual.subspan(m * cb.dsub, cb.dsub);
    for (std::size_t c = 0; c < cb.ksub; ++c) t.at(m, c) = l2_squared(chunk, cb.centroid(m, c));
  }
  if (counter != nullptr) counter->chunk_calls += cb.M * cb.ksub;
  return t;
}

/// Asymmetric distance: sum over chunks of table[m][code[m]].
inline float pq_adc_distance(const DistanceTable& t, std::span<const std::uint16_t> code) {
  if (code.size() != t.M) throw InputError("pq_adc_distance: code length mismatch");
  float s = 0.0f;
  for (std::size_t m = 0; m < t.M; ++m) s += t.at(m, code[m]);
  return s;
}

struct IvfPqParams {
  std::size_t nlist = 0;  // 0: default_nlist(n)
  std::size_t M = 0;      // chunk count; dim must be divisible by it
  std::size_t ksub = 256;
  std::size_t kmeans_iters = kDefaultKMeansIters;
  std::uint64_t seed = 0;
};

/// Coarse inverted file whose lists hold PQ codes of residuals.
class IvfPqIndex {
 public:
  struct InvertedList {
    std::vector<VectorId> ids;
    std::vector<std::uint16_t> codes;  // ids.size() x M

    friend bool operator==(const InvertedList&, const InvertedList&) = default;
  };

  IvfPqIndex() = default;

  static IvfPqIndex build(const Dataset& data, IvfPqParams params) {
    if (params.nlist == 0) params.nlist = default_nlist(data.size());
    if (params.nlist > data.size()) throw InputError("ivfpq_build: nlist exceeds n");
    if (params.M == 0 || data.dim() % params.M != 0) {
      throw InputError("ivfpq_build: dim " + std::to_string(data.dim()) +
                       " not divisible by M=" + std::to_string(params.M));
    }
    KMeansModel km = kmeans_fit(data, params.nlist, params.kmeans_iters, params.seed);
    IvfPqIndex idx;
    idx.params_ = params;
    idx.dim_ = data.dim();
    idx.n_ = data.size();
    idx.codebook_ = pq_train(data, km, params.M, params.ksub, params.kmeans_iters,
                             mix_seed(params.seed, 0x70));
    idx.lists_.resize(params.nlist);
    for (std::size_t i = 0; i < data.size(); ++i) {
      const VectorId c = km.assignment[i];
      const PqCode code = pq_encode(idx.codebook_, residual(data.row(i), km.centroids.row(c)));
      InvertedList& l = idx.lists_[c];
      l.ids.push_back(static_cast<VectorId>(i));
      l.codes.insert(l.codes.end(), code.begin(), code.end());
    }
    idx.centroids_ = std::move(km.centroids);
    return idx;
  }

  /// ADC scan of the `nprobe` nearest cells, one distance table per cell.
  SearchResult search(FloatSpan q, std::size_t k, std::size_t nprobe,
                      DistanceCallCounter* counter = nullptr) const {
    if (q.size() != dim_) throw InputError("ivfpq_search: query dimension mismatch");
    if (k == 0) throw InputError("ivfpq_search: k must be positive");
    detail::check_nprobe(nprobe, nlist(), "ivfpq_search");
    const std::size_t M = codebook_.M;
    std::vector<Neighbor> cand;
    for (VectorId c : detail::probe_cells(centroids_, q, nprobe, counter)) {
      const InvertedList& l = lists_[c];
      if (l.ids.empty()) continue;
      const DistanceTable t =
          pq_distance_table(codebook_, residual(q, centroids_.row(c)), counter);
      for (std::size_t j = 0; j < l.ids.size(); ++j) {
        const std::span<const std::uint16_t> code(l.codes.data() + j * M, M);
        cand.push_back({pq_adc_distance(t, code), l.ids[j]});
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
  const PqCodebook& codebook() const noexcept { return codebook_; }
  const std::vector<InvertedList>& lists() const noexcept { return lists_; }
  const IvfPqParams& params() const noexcept { return params_; }

 private:
  friend class IndexSerializer;

  IvfPqParams params_;
  std::size_t dim_ = 0;
  std::size_t n_ = 0;
  Dataset centroids_;
  PqCodebook codebook_;
  std::vector<InvertedList> lists_;
};

}  // namespace vann
