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

#include <algorithm>
#include <queue>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "vann/exact.hpp"
#include "vann/hnsw.hpp"
#include "vann/io.hpp"
#include "vann/nsw.hpp"

namespace vann {
namespace {

template <typename NeighborFn>
std::size_t reachable(std::size_t n, VectorId from, NeighborFn&& edges) {
  std::vector<char> seen(n, 0);
  std::queue<VectorId> q;
  q.push(from);
  seen[from] = 1;
  std::size_t count = 1;
  while (!q.empty()) {
    const VectorId v = q.front();
    q.pop();
    for (VectorId u : edges(v)) {
      if (!seen[u]) {
        seen[u] = 1;
        ++count;
        q.push(u);
      }
    }
  }
  return count;
}

double batch_recall(const auto& index, const Dataset& qs, const std::vector<SearchResult>& truth,
                    std::size_t ef) {
  std::vector<SearchResult> got;
  for (std::size_t i = 0; i < qs.size(); ++i) got.push_back(index.search(qs.row(i), 10, ef));
  return mean_recall(got, truth);
}

class Graph10k : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const SyntheticDataset s = synthetic_gaussian(10000, 16, 16, 21);
    data_ = new Dataset(s.data);
    queries_ = new Dataset(synthetic_gaussian(200, 16, 16, 21, 1).data);
    truth_ = new std::vector<SearchResult>(exact_knn_batch(*data_, *queries_, 10));
    nsw_ = new NswIndex(NswIndex::build(*data_, {16, 256, 4}));
    hnsw_ = new HnswIndex(HnswIndex::build(*data_, {16, 256, LevelMode::geometric, 4}));
  }
  static void TearDownTestSuite() {
    delete hnsw_;
    delete nsw_;
    delete truth_;
    delete queries_;
    delete data_;
  }
  static Dataset* data_;
  static Dataset* queries_;
  static std::vector<SearchResult>* truth_;
  static NswIndex* nsw_;
  static HnswIndex* hnsw_;
};

Dataset* Graph10k::data_ = nullptr;
Dataset* Graph10k::queries_ = nullptr;
std::vector<SearchResult>* Graph10k::truth_ = nullptr;
NswIndex* Graph10k::nsw_ = nullptr;
HnswIndex* Graph10k::hnsw_ = nullptr;

TEST_F(Graph10k, NswRecallGrowsWithEf) {
  const double r8 = batch_recall(*nsw_, *queries_, *truth_, 8);
  const double r128 = batch_recall(*nsw_, *queries_, *truth_, 128);
  EXPECT_GE(r128, r8);
  RecordProperty("nsw_recall_ef8", std::to_string(r8));
  RecordProperty("nsw_recall_ef128", std::to_string(r128));
}

TEST_F(Graph10k, NswGraphIsUndirectedAndSimple) {
  const AdjacencyList& adj = nsw_->adjacency();
  for (std::size_t v = 0; v < adj.size(); ++v) {
    std::set<VectorId> s(adj[v].begin(), adj[v].end());
    EXPECT_EQ(s.size(), adj[v].size()) << "duplicate edge at " << v;
    EXPECT_EQ(s.count(static_cast<VectorId>(v)), 0u);
    for (VectorId u : adj[v]) {
      EXPECT_NE(std::find(adj[u].begin(), adj[u].end(), v), adj[u].end());
    }
  }
}

TEST_F(Graph10k, HnswLayersNest) {
  for (std::size_t l = 1; l <= hnsw_->max_level(); ++l) {
    const auto upper = hnsw_->layer_vertices(l);
    const auto lower = hnsw_->layer_vertices(l - 1);
    EXPECT_TRUE(std::includes(lower.begin(), lower.end(), upper.begin(), upper.end()));
    for (VectorId v : upper)
      for (VectorId u : hnsw_->neighbors(v, l)) EXPECT_GE(hnsw_->level_of(u), l);
  }
  EXPECT_EQ(hnsw_->layer_vertices(0).size(), data_->size());
  EXPECT_EQ(hnsw_->level_of(hnsw_->entry_point()), hnsw_->max_level());
  EXPECT_GT(hnsw_->max_level(), 0u);
}

TEST_F(Graph10k, HnswRecallAtLeastNswMinusMargin) {
  const double h = batch_recall(*hnsw_, *queries_, *truth_, 128);
  const double n = batch_recall(*nsw_, *queries_, *truth_, 128);
  EXPECT_GE(h, n - 0.05) << "hnsw=" << h << " nsw=" << n;
  RecordProperty("hnsw_recall_ef128", std::to_string(h));
}

TEST_F(Graph10k, HnswSelfQuery) {
  for (std::size_t i = 0; i < data_->size(); i += 499) {
    const SearchResult r = hnsw_->search(data_->row(i), 10, 64);
    EXPECT_EQ(r.ids[0], i);
    EXPECT_EQ(r.distances[0], 0.0f);
  }
}

TEST_F(Graph10k, BuildsAreDeterministic) {
  const Dataset small = data_->prefix(1500);
  const NswIndex a = NswIndex::build(small, {8, 64, 11});
  const NswIndex b = NswIndex::build(small, {8, 64, 11});
  EXPECT_EQ(a.adjacency(), b.adjacency());
  const HnswIndex h1 = HnswIndex::build(small, {8, 64, LevelMode::geometric, 11});
  const HnswIndex h2 = HnswIndex::build(small, {8, 64, LevelMode::geometric, 11});
  for (std::size_t i = 0; i < queries_->size(); i += 10) {
    EXPECT_EQ(h1.search(queries_->row(i), 10, 32), h2.search(queries_->row(i), 10, 32));
  }
}

TEST(Nsw, TwoPoints) {
  const Dataset d({0, 0, 1, 1}, 2);
  const NswIndex idx = NswIndex::build(d, {16, 256, 0});
  EXPECT_EQ(idx.adjacency()[0], (std::vector<VectorId>{1}));
  EXPECT_EQ(idx.adjacency()[1], (std::vector<VectorId>{0}));
  const SearchResult r = idx.search(std::vector<float>{5, 5}, 2, 1);
  EXPECT_EQ(r.ids, (std::vector<VectorId>{1, 0}));
}

TEST(Nsw, ExhaustiveBeamEqualsExact) {
  const Dataset d = oracle::random_dataset(31, 600, 8);
  const NswIndex idx = NswIndex::build(d, {6, 32, 2});
  const auto& adj = idx.adjacency();
  ASSERT_EQ(reachable(d.size(), 0, [&](VectorId v) { return adj[v]; }), d.size());
  const Dataset qs = oracle::random_dataset(32, 30, 8);
  for (std::size_t i = 0; i < qs.size(); ++i) {
    EXPECT_EQ(idx.search(qs.row(i), 10, d.size()), exact_knn(d, qs.row(i), 10));
  }
}

TEST(Nsw, RejectsZeroNeighbors) {
  EXPECT_THROW(NswIndex::build(Dataset({0, 1}, 1), {0, 10, 0}), InputError);
}

TEST(HnswLevels, GeometricFrequency) {
  LevelSampler s(LevelMode::geometric, 16, 100000, 123);
  std::vector<std::size_t> hist(16, 0);
  for (int i = 0; i < 100000; ++i) ++hist[std::min<std::size_t>(s.next(), 15)];
  const double p1 = 1.0 - hist[0] / 100000.0;
  EXPECT_NEAR(p1, 1.0 / 16.0, 0.004);  // ~5 sigma
  EXPECT_EQ(std::max_element(hist.begin(), hist.end()) - hist.begin(), 0);
}

TEST(HnswLevels, SeededSequenceRepeats) {
  LevelSampler a(LevelMode::geometric, 8, 1000, 5);
  LevelSampler b(LevelMode::geometric, 8, 1000, 5);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(HnswLevels, EqualModeIsUniformOverLevels) {
  // ceil(log_4 4096) = 6 levels.
  LevelSampler s(LevelMode::equal, 4, 4096, 9);
  std::vector<int> hist(8, 0);
  for (int i = 0; i < 60000; ++i) ++hist[std::min<std::size_t>(s.next(), 7)];
  for (int l = 0; l < 6; ++l) EXPECT_NEAR(hist[l] / 60000.0, 1.0 / 6.0, 0.01);
  EXPECT_EQ(hist[6] + hist[7], 0);
}

TEST(Hnsw, EqualModeKeepsNesting) {
  const Dataset d = oracle::random_dataset(70, 800, 8);
  const HnswIndex idx = HnswIndex::build(d, {4, 32, LevelMode::equal, 1});
  EXPECT_GT(idx.max_level(), 1u);
  for (std::size_t l = 1; l <= idx.max_level(); ++l) {
    const auto upper = idx.layer_vertices(l);
    const auto lower = idx.layer_vertices(l - 1);
    EXPECT_TRUE(std::includes(lower.begin(), lower.end(), upper.begin(), upper.end()));
  }
  EXPECT_EQ(idx.search(d.row(17), 1, 32).ids[0], 17u);
}

TEST(Hnsw, FlatLevelsActAsSingleLayerGraph) {
  const Dataset d = oracle::random_dataset(71, 700, 8);
  const HnswIndex idx = HnswIndex::build(d, {8, 64, LevelMode::flat, 3});
  EXPECT_EQ(idx.max_level(), 0u);
  ASSERT_EQ(reachable(d.size(), idx.entry_point(), [&](VectorId v) { return idx.neighbors(v, 0); }),
            d.size());
  const Dataset qs = oracle::random_dataset(72, 20, 8);
  for (std::size_t i = 0; i < qs.size(); ++i) {
    EXPECT_EQ(idx.search(qs.row(i), 10, d.size()), exact_knn(d, qs.row(i), 10));
  }
}

TEST(Hnsw, RejectsBadM) {
  EXPECT_THROW(HnswIndex::build(Dataset({0, 1}, 1), {0, 10, LevelMode::geometric, 0}), InputError);
  EXPECT_THROW(HnswIndex::build(Dataset({0, 1}, 1), {1, 10, LevelMode::geometric, 0}), InputError);
  EXPECT_EQ(parse_level_mode("equal"), LevelMode::equal);
  EXPECT_THROW(parse_level_mode("log"), InputError);
}

}  // namespace
}  // namespace vann
