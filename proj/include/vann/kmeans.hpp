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
#include "vann/rng.hpp"

namespace vann {

inline constexpr std::size_t kDefaultKMeansIters = 25;

struct KMeansModel {
  Dataset centroids;
  std::vector<VectorId> assignment;
  /// Within-cluster sum of squares after each assignment step.
  std::vector<double> distortion;

  std::size_t size() const noexcept { return centroids.size(); }
  std::size_t dim() const noexcept { return centroids.dim(); }
};

/// Index of the centroid nearest to `x`; ties go to the smaller index.
inline std::size_t nearest_centroid(const Dataset& centroids, FloatSpan x, float* dist = nullptr) {
  std::size_t best = 0;
  float best_d = std::numeric_limits<float>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const float d = l2_squared(x, centroids.row(c));
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (dist != nullptr) *dist = best_d;
  return best;
}

namespace detail {

inline std::vector<float> kmeanspp_seed(const Dataset& data, std::size_t ncent, Rng& rng) {
  const std::size_t n = data.size();
  const std::size_t d = data.dim();
  std::vector<float> centers;
  centers.reserve(ncent * d);
  std::vector<bool> chosen(n, false);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());

  auto take = [&](std::size_t i) {
    chosen[i] = true;
    const FloatSpan x = data.row(i);
    centers.insert(centers.end(), x.begin(), x.end());
    for (std::size_t j = 0; j < n; ++j) {
      const double dj = l2_squared(data.row(j), x);
      if (dj < d2[j]) d2[j] = dj;
    }
  };

  take(rng.index(n));
  while (centers.size() < ncent * d) {
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) total += chosen[j] ? 0.0 : d2[j];
    std::size_t pick = n;
    if (total > 0.0) {
      const double r = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (chosen[j]) continue;
        acc += d2[j];
        pick = j;
        if (acc > r) break;
      }
    } else {
      // Every remaining point duplicates a center: pick uniformly among them.
      std::vector<std::size_t> rest;
      for (std::size_t j = 0; j < n; ++j) {
        if (!chosen[j]) rest.push_back(j);
      }
      pick = rest[rng.index(rest.size())];
    }
    take(pick);
  }
  return centers;
}

}  // namespace detail

/// Lloyd's algorithm with k-means++ seeding. An empty cluster is re-seeded
/// at the member of the largest cluster farthest from that cluster's
/// centroid, which splits the largest cluster without raising distortion.
inline KMeansModel kmeans_fit(const Dataset& data, std::size_t ncent,
                              std::size_t iters = kDefaultKMeansIters, std::uint64_t seed = 0) {
  const std::size_t n = data.size();
  const std::size_t d = data.dim();
  if (ncent == 0 || ncent > n) {
    throw InputError("kmeans_fit: ncent=" + std::to_string(ncent) + " outside [1, " +
                     std::to_string(n) + "]");
  }
  if (iters == 0) throw InputError("kmeans_fit: iters must be positive");

  Rng rng(seed);
  std::vector<float> centers = detail::kmeanspp_seed(data, ncent, rng);
  std::vector<VectorId> assign(n, 0);
  std::vector<float> dist(n, 0.0f);
  std::vector<double> history;

  auto assign_all = [&](const Dataset& cents) {
    bool changed = false;
    double wcss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<VectorId>(nearest_centroid(cents, data.row(i), &dist[i]));
      changed |= (c != assign[i]);
      assign[i] = c;
      wcss += dist[i];
    }
    history.push_back(wcss);
    return changed;
  };

  for (std::size_t it = 0; it < iters; ++it) {
    const Dataset cents(centers, d);
    const bool changed = assign_all(cents);
    if (it > 0 && !changed) break;

    std::vector<double> sums(ncent * d, 0.0);
    std::vector<std::size_t> count(ncent, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const FloatSpan x = data.row(i);
      double* s = sums.data() + assign[i] * d;
      for (std::size_t j = 0; j < d; ++j) s[j] += x[j];
      ++count[assign[i]];
    }
    for (std::size_t c = 0; c < ncent; ++c) {
      if (count[c] == 0) continue;
      for (std::size_t j = 0; j < d; ++j) {
        centers[c * d + j] = static_cast<float>(sums[c * d + j] / static_cast<double>(count[c]));
      }
    }
    for (std::size_t e = 0; e < ncent; ++e) {
      if (count[e] != 0) continue;
      std::size_t largest = 0;
      for (std::size_t c = 1; c < ncent; ++c) {
        if (count[c] > count[largest]) largest = c;
      }
      if (count[largest] < 2) continue;
      const FloatSpan lc(centers.data() + largest * d, d);
      std::size_t far = n;
      float far_d = -1.0f;
      for (std::size_t i = 0; i < n; ++i) {
        if (assign[i] != largest) continue;
        const float di = l2_squared(data.row(i), lc);
        if (di > far_d) {
          far_d = di;
          far = i;
        }
      }
      const FloatSpan x = data.row(far);
      std::copy(x.begin(), x.end(), centers.begin() + static_cast<std::ptrdiff_t>(e * d));
      assign[far] = static_cast<VectorId>(e);
      --count[largest];
      count[e] = 1;
    }
  }

  KMeansModel model{Dataset(std::move(centers), d), {}, {}};
  assign_all(model.centroids);
  model.assignment = std::move(assign);
  model.distortion = std::move(history);
  return model;
}

}  // namespace vann
