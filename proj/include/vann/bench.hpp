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
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "vann/exact.hpp"
#include "vann/index.hpp"
#include "vann/report.hpp"

namespace vann {

/// Build-time parameters for every algorithm; each reads its own.
struct BuildParams {
  std::size_t nlist = 0;           // ivf*: 0 = default_nlist(n)
  std::size_t pq_chunk = 4;        // ivfpq: floats per chunk
  std::size_t pq_bits = 8;         // ivfpq: ksub = 2^bits
  std::size_t nn = 16;             // nsw
  std::size_t ef_construction = 256;  // nsw, hnsw
  std::size_t hnsw_M = 16;
  LevelMode hnsw_levels = LevelMode::geometric;
  std::size_t n_trees = 64;        // annoy
  std::size_t leaf_cap = 16;       // annoy
  std::size_t kmeans_iters = kDefaultKMeansIters;
  std::uint64_t seed = 0;
};

/// Reject parameter combinations before any work starts.
inline void validate_build(Algorithm algo, const BuildParams& p, std::size_t n, std::size_t dim) {
  auto fail = [](const std::string& msg) { throw InputError(msg); };
  if (p.kmeans_iters == 0) fail("kmeans iterations must be >= 1");
  switch (algo) {
    case Algorithm::flat: break;
    case Algorithm::ivfflat:
      if (p.nlist > n) fail("nlist=" + std::to_string(p.nlist) + " exceeds n=" + std::to_string(n));
      break;
    case Algorithm::ivfpq:
      if (p.nlist > n) fail("nlist=" + std::to_string(p.nlist) + " exceeds n=" + std::to_string(n));
      if (p.pq_chunk == 0 || dim % p.pq_chunk != 0) {
        fail("pq chunk " + std::to_string(p.pq_chunk) + " does not divide dim " + std::to_string(dim));
      }
      if (p.pq_bits == 0 || p.pq_bits > 16) fail("pq bits must be in [1, 16]");
      if ((std::size_t{1} << p.pq_bits) > n) fail("2^pq_bits exceeds n");
      break;
    case Algorithm::nsw:
      if (p.nn == 0) fail("nn must be >= 1");
      if (p.ef_construction == 0) fail("ef_construction must be >= 1");
      break;
    case Algorithm::hnsw:
      if (p.hnsw_M < 2) fail("HNSW M must be >= 2");
      if (p.ef_construction == 0) fail("ef_construction must be >= 1");
      break;
    case Algorithm::annoy:
      if (p.n_trees == 0) fail("n_trees must be >= 1");
      if (p.leaf_cap == 0) fail("leaf_cap must be >= 1");
      break;
  }
}

inline AnyIndex build_index(Algorithm algo, const Dataset& data, const BuildParams& p) {
  validate_build(algo, p, data.size(), data.dim());
  switch (algo) {
    case Algorithm::flat: return FlatIndex(data);
    case Algorithm::ivfflat: return IvfFlatIndex::build(data, {p.nlist, p.kmeans_iters, p.seed});
    case Algorithm::ivfpq:
      return IvfPqIndex::build(data, {p.nlist, data.dim() / p.pq_chunk, std::size_t{1} << p.pq_bits,
                                      p.kmeans_iters, p.seed});
    case Algorithm::nsw: return NswIndex::build(data, {p.nn, p.ef_construction, p.seed});
    case Algorithm::hnsw: return HnswIndex::build(data, {p.hnsw_M, p.ef_construction, p.hnsw_levels, p.seed});
    case Algorithm::annoy: return AnnoyIndex::build(data, {p.n_trees, p.leaf_cap, p.seed});
  }
  throw InputError("unknown algorithm");
}

struct BenchRun {
  std::string algorithm;
  std::string dataset;
  std::size_t repetitions = 1;
  std::uint64_t seed = 0;
  double build_seconds = 0.0;   // median over repetitions
  double query_seconds = 0.0;   // median per-query time
  double recall = 0.0;          // recall@k against exact search
};

inline double median(std::vector<double> v) {
  if (v.empty()) throw InputError("median of empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

/// Build and search `reps` times; time with a monotonic clock.
inline BenchRun run_bench(Algorithm algo, const std::string& dataset_name, const Dataset& data,
                          const Dataset& queries, std::size_t k, const BuildParams& build,
                          const SearchParams& search_params, std::size_t reps) {
  if (reps == 0) throw InputError("bench: repetitions must be >= 1");
  if (queries.dim() != data.dim()) throw InputError("bench: query dimension mismatch");
  using clock = std::chrono::steady_clock;
  const std::vector<SearchResult> truth = exact_knn_batch(data, queries, k);

  std::vector<double> build_t;
  std::vector<double> query_t;
  double recall = 0.0;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto t0 = clock::now();
    const AnyIndex index = build_index(algo, data, build);
    const auto t1 = clock::now();
    const std::vector<SearchResult> got = search_batch(index, queries, k, search_params);
    const auto t2 = clock::now();
    build_t.push_back(std::chrono::duration<double>(t1 - t0).count());
    query_t.push_back(std::chrono::duration<double>(t2 - t1).count() / static_cast<double>(queries.size()));
    recall = mean_recall(got, truth);
  }
  return {std::string(algorithm_name(algo)), dataset_name, reps, build.seed,
          median(build_t), median(query_t), recall};
}

inline Report bench_report(const std::vector<BenchRun>& runs) {
  Report r;
  r.header = {"algorithm", "dataset", "repetitions", "seed", "build_seconds_median",
              "query_seconds_median", "recall"};
  for (const BenchRun& b : runs) {
    r.rows.push_back({b.algorithm, b.dataset, std::to_string(b.repetitions), std::to_string(b.seed),
                      format_fixed(b.build_seconds, 6), format_fixed(b.query_seconds, 9),
                      format_fixed(b.recall, 6)});
  }
  return r;
}

}  // namespace vann
