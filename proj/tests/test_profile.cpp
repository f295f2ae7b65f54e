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

#include "oracles.hpp"
#include "vann/bench.hpp"
#include "vann/index.hpp"
#include "vann/io.hpp"
#include "vann/profile.hpp"

namespace vann {
namespace {

TEST(Profile, FlatCallsEqualDatasetSize) {
  const Dataset d = oracle::random_dataset(1, 700, 9);
  const Dataset qs = oracle::random_dataset(2, 13, 9);
  const WorkloadProfile p = profile_query(FlatIndex(d), qs, 10, SearchParams{}, "flat");
  EXPECT_EQ(p.dim, 9u);
  EXPECT_EQ(p.calls_per_query, 700.0);
  EXPECT_EQ(p.kernel, KernelKind::l2);
  EXPECT_EQ(p.algorithm, "flat");
}

TEST(Profile, IvfFlatCountsCentroidsPlusScannedLists) {
  const Dataset d = synthetic_gaussian(4000, 8, 8, 3).data;
  const Dataset qs = synthetic_gaussian(40, 8, 8, 3, 1).data;
  const IvfFlatIndex idx = IvfFlatIndex::build(d, {64, 25, 1});
  SearchParams sp;
  sp.nprobe = 4;
  double expected = 0.0;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    expected += 64.0;
    auto cells = detail::probe_cells(idx.centroids(), qs.row(i), 4, nullptr);
    for (VectorId c : cells) expected += static_cast<double>(idx.lists()[c].ids.size());
  }
  expected /= static_cast<double>(qs.size());
  const WorkloadProfile p = profile_query(idx, qs, 10, sp, "ivfflat");
  EXPECT_DOUBLE_EQ(p.calls_per_query, expected);
  EXPECT_LT(p.calls_per_query, 4000.0);
}

TEST(Profile, IvfPqUsesChunkDimension) {
  const Dataset d = synthetic_gaussian(1200, 8, 4, 5).data;
  const Dataset qs = synthetic_gaussian(10, 8, 4, 5, 1).data;
  const IvfPqIndex idx = IvfPqIndex::build(d, {16, 4, 16, 10, 2});
  SearchParams sp;
  sp.nprobe = 3;
  const WorkloadProfile p = profile_query(idx, qs, 10, sp, "ivfpq");
  EXPECT_EQ(p.dim, 2u);
  // 16 coarse calls at M=4 chunks each plus one 4x16 table per probed cell.
  EXPECT_DOUBLE_EQ(p.calls_per_query, 16.0 * 4.0 + 3.0 * 4.0 * 16.0);
}

TEST(Profile, AnyIndexMatchesTypedProfile) {
  const Dataset d = oracle::random_dataset(4, 1000, 6);
  const Dataset qs = oracle::random_dataset(5, 20, 6);
  BuildParams bp;
  bp.seed = 9;
  for (Algorithm a : {Algorithm::flat, Algorithm::ivfflat, Algorithm::nsw, Algorithm::hnsw,
                      Algorithm::annoy}) {
    const AnyIndex idx = build_index(a, d, bp);
    const WorkloadProfile p1 = profile_query(idx, qs, 10, SearchParams{});
    const WorkloadProfile p2 = profile_query(idx, qs, 10, SearchParams{});
    EXPECT_EQ(p1, p2);
    EXPECT_EQ(p1.algorithm, algorithm_name(a));
    EXPECT_EQ(p1.dim, 6u);
    EXPECT_GT(p1.calls_per_query, 0.0);
  }
}

}  // namespace
}  // namespace vann
