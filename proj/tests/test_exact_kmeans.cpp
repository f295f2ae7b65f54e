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

#include <gtest/gtest.h>

#include <vector>

#include "oracles.hpp"
#include "vann/exact.hpp"
#include "vann/io.hpp"
#include "vann/ivf_flat.hpp"
#include "vann/kmeans.hpp"

namespace vann {
namespace {

TEST(ExactKnn, ForcedGeometry) {
  const Dataset d({0, 0, 1, 0, 5, 5}, 2);
  const std::vector<float> q{0.1f, 0.0f};
  const SearchResult r = exact_knn(d, q, 2);
  EXPECT_EQ(r.ids, (std::vector<VectorId>{0, 1}));
  EXPECT_LE(r.distances[0], r.distances[1]);
}

TEST(ExactKnn, AllPointsSortedWhenKIsN) {
  const Dataset d = oracle::random_dataset(4, 50, 3);
  const std::vector<float> q{0.2f, -0.1f, 0.3f};
  const SearchResult r = exact_knn(d, q, d.size());
  ASSERT_EQ(r.size(), d.size());
  EXPECT_TRUE(std::is_sorted(r.distances.begin(), r.distances.end()));
  std::vector<VectorId> ids = r.ids;
  std::sort(ids.begin(), ids.end());
  for (std::size_t i = 0; i < ids.size(); ++i) EXPECT_EQ(ids[i], i);
}

TEST(ExactKnn, TiesGoToSmallerId) {
  const Dataset d({1, 0, -1, 0, 0, 1, 0, -1}, 2);
  const std::vector<float> q{0, 0};
  EXPECT_EQ(exact_knn(d, q, 4).ids, (std::vector<VectorId>{0, 1, 2, 3}));
}

TEST(ExactKnn, MatchesQuadraticOracle) {
  const Dataset d = oracle::random_dataset(12, 1000, 16);
  const Dataset qs = oracle::random_dataset(13, 50, 16);
  for (std::size_t i = 0; i < qs.size(); ++i) {
    EXPECT_EQ(exact_knn(d, qs.row(i), 10).ids, oracle::knn_ids(d, qs.row(i), 10)) << "query " << i;
  }
}

TEST(ExactKnn, RejectsBadArguments) {
  const Dataset d({0, 0, 1, 1}, 2);
  const std::vector<float> q3{0, 0, 0};
  const std::vector<float> q2{0, 0};
  EXPECT_THROW(exact_knn(d, q3, 1), InputError);
  EXPECT_THROW(exact_knn(d, q2, 0), InputError);
  EXPECT_THROW(exact_knn(d, q2, 3), InputError);
}

TEST(ExactKnn, CountsOneCallPerPoint) {
  const Dataset d = oracle::random_dataset(1, 321, 8);
  DistanceCallCounter c;
  exact_knn(d, d.row(0), 5, &c);
  EXPECT_EQ(c.l2_calls, 321u);
}

TEST(Recall, Definition) {
  const std::vector<VectorId> truth{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(recall_at_k(std::vector<VectorId>{4, 3, 2, 1}, truth), 1.0);
  EXPECT_DOUBLE_EQ(recall_at_k(std::vector<VectorId>{5, 6, 7, 8}, truth), 0.0);
  EXPECT_DOUBLE_EQ(recall_at_k(std::vector<VectorId>{1, 9, 3, 8}, truth), 0.5);
}

TEST(Dataset, RejectsBadShapes) {
  EXPECT_THROW(Dataset({1, 2, 3}, 2), InputError);
  EXPECT_THROW(Dataset({}, 2), InputError);
  EXPECT_THROW(Dataset({1, 2}, 0), InputError);
  EXPECT_THROW(Dataset({1, std::numeric_limits<float>::infinity()}, 2), InputError);
  EXPECT_THROW(Dataset({1, 2}, 2).prefix(2), InputError);
}

TEST(DefaultNlist, FourRootN) {
  EXPECT_EQ(default_nlist(32000), 715u);
  EXPECT_EQ(default_nlist(320000), 2262u);
  EXPECT_EQ(default_nlist(1), 1u);
  EXPECT_EQ(default_nlist(4), 4u);    // floor(8) clamped to n
  EXPECT_EQ(default_nlist(100), 40u);
}

TEST(KMeans, TwoSeparatedPairs) {
  const Dataset d({0, 0, 0, 2, 10, 10, 10, 12}, 2);
  const KMeansModel m = kmeans_fit(d, 2, 25, 3);
  std::vector<std::vector<float>> cents{{m.centroids.row(0).begin(), m.centroids.row(0).end()},
                                        {m.centroids.row(1).begin(), m.centroids.row(1).end()}};
  std::sort(cents.begin(), cents.end());
  EXPECT_EQ(cents[0], (std::vector<float>{0, 1}));
  EXPECT_EQ(cents[1], (std::vector<float>{10, 11}));
  EXPECT_EQ(m.assignment[0], m.assignment[1]);
  EXPECT_EQ(m.assignment[2], m.assignment[3]);
  EXPECT_NE(m.assignment[0], m.assignment[2]);
}

TEST(KMeans, OneCentroidPerPoint) {
  const Dataset d = oracle::random_dataset(21, 30, 4);
  const KMeansModel m = kmeans_fit(d, d.size(), 10, 1);
  EXPECT_DOUBLE_EQ(oracle::distortion(d, m), 0.0);
  std::vector<VectorId> a = m.assignment;
  std::sort(a.begin(), a.end());
  EXPECT_EQ(std::unique(a.begin(), a.end()), a.end());
}

TEST(KMeans, NearRestartOracleOnGaussians) {
  const SyntheticDataset s = synthetic_gaussian(1000, 8, 4, 99);
  const KMeansModel m = kmeans_fit(s.data, 4, 25, 5);
  const double ours = oracle::distortion(s.data, m);
  const double best = oracle::best_distortion(s.data, 4, 10, 25, 17);
  EXPECT_LE(ours, best * 1.05) << "ours=" << ours << " oracle=" << best;
}

TEST(KMeans, DeterministicAndMonotone) {
  const Dataset d = oracle::random_dataset(8, 800, 6);
  const KMeansModel a = kmeans_fit(d, 20, 25, 42);
  const KMeansModel b = kmeans_fit(d, 20, 25, 42);
  EXPECT_EQ(a.centroids, b.centroids);
  EXPECT_EQ(a.assignment, b.assignment);
  for (std::size_t i = 1; i < a.distortion.size(); ++i) {
    EXPECT_LE(a.distortion[i], a.distortion[i - 1] * (1 + 1e-6)) << "iteration " << i;
  }
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(a.assignment[i], nearest_centroid(a.centroids, d.row(i)));
  }
}

TEST(KMeans, DuplicatePointsRepairEmptyClusters) {
  std::vector<float> v;
  for (int i = 0; i < 40; ++i) v.insert(v.end(), {1.0f, 1.0f});
  v.insert(v.end(), {5.0f, 5.0f, 6.0f, 6.0f});
  const Dataset d(std::move(v), 2);
  const KMeansModel m = kmeans_fit(d, 3, 25, 0);
  for (VectorId a : m.assignment) EXPECT_LT(a, 3u);
  EXPECT_DOUBLE_EQ(oracle::distortion(d, m), 0.0);
}

TEST(KMeans, RejectsTooManyCentroids) {
  const Dataset d({0, 1, 2}, 1);
  EXPECT_THROW(kmeans_fit(d, 4, 10, 0), InputError);
  EXPECT_THROW(kmeans_fit(d, 0, 10, 0), InputError);
}

}  // namespace
}  // namespace vann
