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

// VANN binary index files.
//
//   "VANN"            4 bytes magic
//   version           u16
//   algorithm tag     u8   (Algorithm enum value)
//   parameter block   u32 length + bytes
//   payload           algorithm-specific
//
// All integers and floats are little-endian. Loading parses the whole
// buffer before returning, so a failed load never yields a partial index.

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>
#include <vector>

#include "vann/error.hpp"
#include "vann/index.hpp"

namespace vann {

inline constexpr std::string_view kIndexMagic = "VANN";
inline constexpr std::uint16_t kIndexVersion = 1;

namespace detail {

class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v) { le(v, 2); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void size(std::size_t v) { u64(static_cast<std::uint64_t>(v)); }

  void floats(const std::vector<float>& v) {
    size(v.size());
    for (float f : v) f32(f);
  }
  void ids(const std::vector<VectorId>& v) {
    size(v.size());
    for (VectorId i : v) u32(i);
  }
  void bytes(std::string_view s) { buf_.insert(buf_.end(), s.begin(), s.end()); }
  void append(const std::vector<std::uint8_t>& b) { buf_.insert(buf_.end(), b.begin(), b.end()); }

  const std::vector<std::uint8_t>& buffer() const noexcept { return buf_; }

 private:
  void le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> buf_;
};

class ByteReader {
 public:
  ByteReader(const std::uint8_t* data, std::size_t size) : p_(data), end_(data + size) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(le(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(le(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  float f32() { return std::bit_cast<float>(u32()); }

  /// Element count that must fit in the remaining bytes at `elem` bytes each.
  std::size_t count(std::size_t elem) {
    const std::uint64_t c = u64();
    if (elem != 0 && c > remaining() / elem) throw TruncationError("index file truncated");
    return static_cast<std::size_t>(c);
  }

  std::vector<float> floats() {
    std::vector<float> v(count(4));
    for (float& f : v) f = f32();
    return v;
  }
  std::vector<VectorId> ids() {
    std::vector<VectorId> v(count(4));
    for (VectorId& i : v) i = u32();
    return v;
  }
  void skip(std::size_t n) {
    need(n);
    p_ += n;
  }

  std::size_t remaining() const noexcept { return static_cast<std::size_t>(end_ - p_); }

 private:
  void need(std::size_t n) const {
    if (remaining() < n) throw TruncationError("index file truncated");
  }
  std::uint64_t le(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= std::uint64_t{p_[i]} << (8 * i);
    p_ += n;
    return v;
  }
  const std::uint8_t* p_;
  const std::uint8_t* end_;
};

inline void corrupt_unless(bool ok, const char* what) {
  if (!ok) throw FormatError(std::string("corrupt index file: ") + what);
}

}  // namespace detail

/// Encodes and decodes every index type.
class IndexSerializer {
 public:
  static std::vector<std::uint8_t> encode(const AnyIndex& index) {
    detail::ByteWriter params;
    detail::ByteWriter payload;
    std::visit([&](const auto& idx) { write(idx, params, payload); }, index);

    detail::ByteWriter out;
    out.bytes(kIndexMagic);
    out.u16(kIndexVersion);
    out.u8(static_cast<std::uint8_t>(algorithm_of(index)));
    out.u32(static_cast<std::uint32_t>(params.buffer().size()));
    out.append(params.buffer());
    out.append(payload.buffer());
    return out.buffer();
  }

  static AnyIndex decode(const std::vector<std::uint8_t>& bytes) {
    detail::ByteReader in(bytes.data(), bytes.size());
    if (bytes.size() < kIndexMagic.size() ||
        std::memcmp(bytes.data(), kIndexMagic.data(), kIndexMagic.size()) != 0) {
      throw FormatError("not a VANN index file (bad magic)");
    }
    in.skip(kIndexMagic.size());
    const std::uint16_t version = in.u16();
    if (version != kIndexVersion) {
      throw VersionError("index format version " + std::to_string(version) + " unsupported (expected " +
                         std::to_string(kIndexVersion) + ")");
    }
    const std::uint8_t tag = in.u8();
    const std::uint32_t plen = in.u32();
    if (plen > in.remaining()) throw TruncationError("index file truncated in parameter block");
    const std::size_t header = bytes.size() - in.remaining();
    detail::ByteReader params(bytes.data() + header, plen);
    in.skip(plen);
    AnyIndex out;
    switch (static_cast<Algorithm>(tag)) {
      case Algorithm::flat: out = read_flat(params, in); break;
      case Algorithm::ivfflat: out = read_ivfflat(params, in); break;
      case Algorithm::ivfpq: out = read_ivfpq(params, in); break;
      case Algorithm::nsw: out = read_nsw(params, in); break;
      case Algorithm::hnsw: out = read_hnsw(params, in); break;
      case Algorithm::annoy: out = read_annoy(params, in); break;
      default: throw FormatError("unknown algorithm tag " + std::to_string(tag));
    }
    if (params.remaining() != 0) throw FormatError("parameter block length mismatch");
    if (in.remaining() != 0) throw FormatError("trailing bytes after index payload");
    return out;
  }

 private:
  static void write_dataset(const Dataset& d, detail::ByteWriter& w) {
    w.size(d.dim());
    w.floats(d.values());
  }

  static Dataset read_dataset(detail::ByteReader& r) {
    const std::size_t dim = r.u64();
    std::vector<float> v = r.floats();
    detail::corrupt_unless(dim > 0 && !v.empty() && v.size() % dim == 0, "dataset shape");
    try {
      return Dataset(std::move(v), dim);
    } catch (const InputError& e) {
      throw FormatError(std::string("corrupt index file: ") + e.what());
    }
  }

  static void write_adjacency(const AdjacencyList& adj, detail::ByteWriter& w) {
    w.size(adj.size());
    for (const auto& l : adj) w.ids(l);
  }

  static AdjacencyList read_adjacency(detail::ByteReader& r, std::size_t n) {
    AdjacencyList adj(r.count(8));
    detail::corrupt_unless(adj.size() == n, "adjacency size");
    for (auto& l : adj) {
      l = r.ids();
      for (VectorId v : l) detail::corrupt_unless(v < n, "edge target");
    }
    return adj;
  }

  // flat
  static void write(const FlatIndex& idx, detail::ByteWriter&, detail::ByteWriter& payload) {
    write_dataset(idx.data(), payload);
  }
  static FlatIndex read_flat(detail::ByteReader&, detail::ByteReader& r) { return FlatIndex(read_dataset(r)); }

  // ivfflat
  static void write(const IvfFlatIndex& idx, detail::ByteWriter& p, detail::ByteWriter& w) {
    p.size(idx.params_.nlist);
    p.size(idx.params_.kmeans_iters);
    p.u64(idx.params_.seed);
    w.size(idx.dim_);
    w.size(idx.n_);
    write_dataset(idx.centroids_, w);
    w.size(idx.lists_.size());
    for (const auto& l : idx.lists_) {
      w.ids(l.ids);
      w.floats(l.vectors);
    }
  }
  static IvfFlatIndex read_ivfflat(detail::ByteReader& p, detail::ByteReader& r) {
    IvfFlatIndex idx;
    idx.params_.nlist = p.u64();
    idx.params_.kmeans_iters = p.u64();
    idx.params_.seed = p.u64();
    idx.dim_ = r.u64();
    idx.n_ = r.u64();
    idx.centroids_ = read_dataset(r);
    idx.lists_.resize(r.count(16));
    detail::corrupt_unless(idx.lists_.size() == idx.centroids_.size() && idx.centroids_.dim() == idx.dim_,
                           "ivfflat lists");
    std::size_t total = 0;
    for (auto& l : idx.lists_) {
      l.ids = r.ids();
      l.vectors = r.floats();
      detail::corrupt_unless(l.vectors.size() == l.ids.size() * idx.dim_, "ivfflat list vectors");
      for (VectorId v : l.ids) detail::corrupt_unless(v < idx.n_, "ivfflat id");
      total += l.ids.size();
    }
    detail::corrupt_unless(total == idx.n_, "ivfflat coverage");
    return idx;
  }

  // ivfpq
  static void write(const IvfPqIndex& idx, detail::ByteWriter& p, detail::ByteWriter& w) {
    p.size(idx.params_.nlist);
    p.size(idx.params_.M);
    p.size(idx.params_.ksub);
    p.size(idx.params_.kmeans_iters);
    p.u64(idx.params_.seed);
    w.size(idx.dim_);
    w.size(idx.n_);
    write_dataset(idx.centroids_, w);
    w.size(idx.codebook_.M);
    w.size(idx.codebook_.dsub);
    w.size(idx.codebook_.ksub);
    w.floats(idx.codebook_.centroids);
    w.size(idx.lists_.size());
    for (const auto& l : idx.lists_) {
      w.ids(l.ids);
      w.size(l.codes.size());
      for (std::uint16_t c : l.codes) w.u16(c);
    }
  }
  static IvfPqIndex read_ivfpq(detail::ByteReader& p, detail::ByteReader& r) {
    IvfPqIndex idx;
    idx.params_.nlist = p.u64();
    idx.params_.M = p.u64();
    idx.params_.ksub = p.u64();
    idx.params_.kmeans_iters = p.u64();
    idx.params_.seed = p.u64();
    idx.dim_ = r.u64();
    idx.n_ = r.u64();
    idx.centroids_ = read_dataset(r);
    PqCodebook& cb = idx.codebook_;
    cb.M = r.u64();
    cb.dsub = r.u64();
    cb.ksub = r.u64();
    cb.centroids = r.floats();
    detail::corrupt_unless(cb.M * cb.dsub == idx.dim_ && cb.centroids.size() == cb.M * cb.ksub * cb.dsub &&
                               idx.centroids_.dim() == idx.dim_,
                           "pq codebook");
    idx.lists_.resize(r.count(16));
    detail::corrupt_unless(idx.lists_.size() == idx.centroids_.size(), "ivfpq lists");
    std::size_t total = 0;
    for (auto& l : idx.lists_) {
      l.ids = r.ids();
      l.codes.resize(r.count(2));
      for (auto& c : l.codes) {
        c = r.u16();
        detail::corrupt_unless(c < cb.ksub, "pq code");
      }
      detail::corrupt_unless(l.codes.size() == l.ids.size() * cb.M, "ivfpq list codes");
      for (VectorId v : l.ids) detail::corrupt_unless(v < idx.n_, "ivfpq id");
      total += l.ids.size();
    }
    detail::corrupt_unless(total == idx.n_, "ivfpq coverage");
    return idx;
  }

  // nsw
  static void write(const NswIndex& idx, detail::ByteWriter& p, detail::ByteWriter& w) {
    p.size(idx.params_.nn);
    p.size(idx.params_.ef_construction);
    p.u64(idx.params_.seed);
    write_dataset(idx.data_, w);
    w.u32(idx.entry_point_);
    write_adjacency(idx.adjacency_, w);
  }
  static NswIndex read_nsw(detail::ByteReader& p, detail::ByteReader& r) {
    NswIndex idx;
    idx.params_.nn = p.u64();
    idx.params_.ef_construction = p.u64();
    idx.params_.seed = p.u64();
    idx.data_ = read_dataset(r);
    idx.entry_point_ = r.u32();
    detail::corrupt_unless(idx.entry_point_ < idx.data_.size(), "nsw entry point");
    idx.adjacency_ = read_adjacency(r, idx.data_.size());
    return idx;
  }

  // hnsw
  static void write(const HnswIndex& idx, detail::ByteWriter& p, detail::ByteWriter& w) {
    p.size(idx.params_.M);
    p.size(idx.params_.ef_construction);
    p.u8(static_cast<std::uint8_t>(idx.params_.levels));
    p.u64(idx.params_.seed);
    write_dataset(idx.data_, w);
    w.u32(idx.entry_point_);
    w.size(idx.max_level_);
    for (std::size_t v = 0; v < idx.level_of_.size(); ++v) {
      w.u32(static_cast<std::uint32_t>(idx.level_of_[v]));
      for (const auto& layer : idx.links_[v]) w.ids(layer);
    }
  }
  static HnswIndex read_hnsw(detail::ByteReader& p, detail::ByteReader& r) {
    HnswIndex idx;
    idx.params_.M = p.u64();
    idx.params_.ef_construction = p.u64();
    const std::uint8_t mode = p.u8();
    detail::corrupt_unless(mode <= static_cast<std::uint8_t>(LevelMode::flat), "hnsw level mode");
    idx.params_.levels = static_cast<LevelMode>(mode);
    idx.params_.seed = p.u64();
    idx.data_ = read_dataset(r);
    const std::size_t n = idx.data_.size();
    idx.entry_point_ = r.u32();
    idx.max_level_ = r.u64();
    detail::corrupt_unless(idx.entry_point_ < n, "hnsw entry point");
    idx.level_of_.resize(n);
    idx.links_.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
      idx.level_of_[v] = r.u32();
      detail::corrupt_unless(idx.level_of_[v] <= idx.max_level_, "hnsw level");
      idx.links_[v].resize(idx.level_of_[v] + 1);
      for (auto& layer : idx.links_[v]) {
        layer = r.ids();
        for (VectorId u : layer) detail::corrupt_unless(u < n, "hnsw edge target");
      }
    }
    detail::corrupt_unless(idx.level_of_[idx.entry_point_] == idx.max_level_, "hnsw entry level");
    return idx;
  }

  // annoy
  static void write(const AnnoyIndex& idx, detail::ByteWriter& p, detail::ByteWriter& w) {
    p.size(idx.params_.n_trees);
    p.size(idx.params_.leaf_cap);
    p.u64(idx.params_.seed);
    write_dataset(idx.data_, w);
    w.size(idx.roots_.size());
    for (std::int32_t root : idx.roots_) w.i32(root);
    w.size(idx.nodes_.size());
    for (const auto& node : idx.nodes_) {
      w.i32(node.left);
      w.i32(node.right);
      w.f32(node.bias);
      w.floats(node.normal);
      w.ids(node.items);
    }
  }
  static AnnoyIndex read_annoy(detail::ByteReader& p, detail::ByteReader& r) {
    AnnoyIndex idx;
    idx.params_.n_trees = p.u64();
    idx.params_.leaf_cap = p.u64();
    idx.params_.seed = p.u64();
    idx.data_ = read_dataset(r);
    idx.roots_.resize(r.count(4));
    for (auto& root : idx.roots_) root = r.i32();
    idx.nodes_.resize(r.count(36));
    const auto nn = static_cast<std::int32_t>(idx.nodes_.size());
    for (auto& node : idx.nodes_) {
      node.left = r.i32();
      node.right = r.i32();
      node.bias = r.f32();
      node.normal = r.floats();
      node.items = r.ids();
      const bool leaf = node.left == AnnoyIndex::kNoChild && node.right == AnnoyIndex::kNoChild;
      const bool inner = node.left >= 0 && node.left < nn && node.right >= 0 && node.right < nn &&
                         node.normal.size() == idx.data_.dim();
      detail::corrupt_unless(leaf || inner, "annoy node");
      for (VectorId v : node.items) detail::corrupt_unless(v < idx.data_.size(), "annoy item");
    }
    for (std::int32_t root : idx.roots_) detail::corrupt_unless(root >= 0 && root < nn, "annoy root");
    return idx;
  }
};

inline void save_index(const AnyIndex& index, const std::string& path) {
  const std::vector<std::uint8_t> bytes = IndexSerializer::encode(index);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for '" + path + "'");
}

inline AnyIndex load_index(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  return IndexSerializer::decode(bytes);
}

}  // namespace vann
