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
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "vann/dataset.hpp"
#include "vann/rng.hpp"

namespace vann {

class IndexSerializer;

struct AnnoyParams {
  std::size_t n_trees = 64;
  std::size_t leaf_cap = 16;
  std::uint64_t seed = 0;
};

/// Forest of random-hyperplane trees. Every internal node splits its points
/// by the perpendicular bisector of two of them; points with positive margin
/// go right.
class AnnoyIndex {
 public:
  static constexpr std::int32_t kNoChild = -1;
  static constexpr int kSplitAttempts = 3;

  struct Node {
    std::int32_t left = kNoChild;
    std::int32_t right = kNoChild;
    float bias = 0.0f;
    std::vector<float> normal;   // empty for leaves
    std::vector<VectorId> items;  // leaves only

    bool is_leaf() const noexcept { return left == kNoChild; }
    friend bool operator==(const Node&, const Node&) = default;
  };

  AnnoyIndex() = default;

  static AnnoyIndex build(Dataset data, AnnoyParams params) {
    if (params.n_trees == 0) throw InputError("annoy_build: n_trees must be >= 1");
    if (params.leaf_cap == 0) throw InputError("annoy_build: leaf_cap must be >= 1");
    AnnoyIndex idx;
    idx.params_ = params;
    idx.data_ = std::move(data);
    Rng rng(params.seed);
    std::vector<VectorId> all(idx.data_.size());
    std::iota(all.begin(), all.end(), VectorId{0});
    for (std::size_t t = 0; t < params.n_trees; ++t) {
      idx.roots_.push_back(idx.make_tree(all, rng));
    }
    return idx;
  }

  std::size_t default_budget(std::size_t k) const noexcept { return k * params_.n_trees * 2; }

  /// Best-first descent of all trees ordered by margin; gathers distinct
  /// leaf ids until at least `search_budget` are collected, then re-ranks
  /// them exactly. A budget of 0 means default_budget(k).
  SearchResult search(FloatSpan q, std::size_t k, std::size_t search_budget,
                      DistanceCallCounter* counter = nullptr) const {
    check_query(data_, q, k, "annoy_search");
    if (search_budget == 0) search_budget = default_budget(k);

    using Entry = std::pair<float, std::int32_t>;
    auto cmp = [](const Entry& a, const Entry& b) {
      return a.first < b.first || (a.first == b.first && a.second > b.second);
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> queue(cmp);
    for (std::int32_t r : roots_) queue.emplace(std::numeric_limits<float>::infinity(), r);

    std::vector<char> seen(data_.size(), 0);
    std::vector<VectorId> cand;
    while (!queue.empty() && cand.size() < search_budget) {
      const auto [prio, id] = queue.top();
      queue.pop();
      const Node& node = nodes_[static_cast<std::size_t>(id)];
      if (node.is_leaf()) {
        for (VectorId v : node.items) {
          if (!seen[v]) {
            seen[v] = 1;
            cand.push_back(v);
          }
        }
        continue;
      }
      const float m = margin(node, q, counter);
      queue.emplace(std::min(prio, m), node.right);
      queue.emplace(std::min(prio, -m), node.left);
    }

    std::vector<Neighbor> ranked;
    ranked.reserve(cand.size());
    for (VectorId v : cand) ranked.push_back({detail::counted_l2(q, data_.row(v), counter), v});
    return top_k(std::move(ranked), k);
  }

  SearchResult search(FloatSpan q, std::size_t k, const SearchParams& p,
                      DistanceCallCounter* counter = nullptr) const {
    return search(q, k, p.search_budget, counter);
  }

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::vector<std::int32_t>& roots() const noexcept { return roots_; }
  const Dataset& data() const noexcept { return data_; }
  const AnnoyParams& params() const noexcept { return params_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t dim() const noexcept { return data_.dim(); }

  /// Leaf item sets of one tree, in traversal order.
  std::vector<std::vector<VectorId>> leaves(std::size_t tree) const {
    std::vector<std::vector<VectorId>> out;
    std::vector<std::int32_t> stack{roots_.at(tree)};
    while (!stack.empty()) {
      const Node& node = nodes_[static_cast<std::size_t>(stack.back())];
      stack.pop_back();
      if (node.is_leaf()) {
        out.push_back(node.items);
      } else {
        stack.push_back(node.right);
        stack.push_back(node.left);
      }
    }
    return out;
  }

 private:
  friend class IndexSerializer;

  static float margin(const Node& node, FloatSpan x, DistanceCallCounter* counter) {
    return detail::counted_dot(node.normal, x, counter) + node.bias;
  }

  std::int32_t add_node(Node node) {
    nodes_.push_back(std::move(node));
    return static_cast<std::int32_t>(nodes_.size() - 1);
  }

  std::int32_t make_tree(std::vector<VectorId> ids, Rng& rng) {
    if (ids.size() <= params_.leaf_cap) {
      Node leaf;
      leaf.items = std::move(ids);
      return add_node(std::move(leaf));
    }
    const std::size_t d = data_.dim();
    Node split;
    std::vector<VectorId> lo;
    std::vector<VectorId> hi;
    bool ok = false;
    for (int attempt = 0; attempt < kSplitAttempts && !ok; ++attempt) {
      const std::size_t i = rng.index(ids.size());
      std::size_t j = rng.index(ids.size() - 1);
      if (j >= i) ++j;
      const FloatSpan a = data_.row(ids[i]);
      const FloatSpan b = data_.row(ids[j]);
      if (std::equal(a.begin(), a.end(), b.begin())) continue;
      split.normal.assign(d, 0.0f);
      std::vector<float> mid(d);
      for (std::size_t c = 0; c < d; ++c) {
        split.normal[c] = a[c] - b[c];
        mid[c] = 0.5f * (a[c] + b[c]);
      }
      split.bias = -dot(split.normal, mid);
      lo.clear();
      hi.clear();
      for (VectorId v : ids) {
        const float m = margin(split, data_.row(v), nullptr);
        const bool right = m > 0.0f || (m == 0.0f && (rng.next() & 1U));
        (right ? hi : lo).push_back(v);
      }
      ok = !lo.empty() && !hi.empty();
    }
    if (!ok) {
      // Degenerate point set: balanced random split, zero hyperplane.
      rng.shuffle(ids);
      const auto half = static_cast<std::ptrdiff_t>(ids.size() / 2);
      lo.assign(ids.begin(), ids.begin() + half);
      hi.assign(ids.begin() + half, ids.end());
      split.normal.assign(d, 0.0f);
      split.bias = 0.0f;
    }
    ids.clear();
    ids.shrink_to_fit();
    const std::int32_t self = add_node(std::move(split));
    const std::int32_t left = make_tree(std::move(lo), rng);
    const std::int32_t right = make_tree(std::move(hi), rng);
    nodes_[static_cast<std::size_t>(self)].left = left;
    nodes_[static_cast<std::size_t>(self)].right = right;
    return self;
  }

  AnnoyParams params_;
  Dataset data_;
  std::vector<Node> nodes_;
  std::vector<std::int32_t> roots_;
};

}  // namespace vann
