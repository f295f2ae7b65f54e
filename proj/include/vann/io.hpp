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

// Dataset loaders and the synthetic generator.

#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vann/dataset.hpp"
#include "vann/error.hpp"
#include "vann/rng.hpp"

namespace vann {

struct LabeledDataset {
  Dataset data;
  std::vector<double> labels;  // parsed, unused by the indexes
};

struct TokenDataset {
  Dataset data;
  std::vector<std::string> tokens;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return in;
}

}  // namespace detail

/// Sparse "label idx:val ..." lines with 1-based feature indices,
/// densified to `dim` columns. Reads at most `max_rows` rows (0: all);
/// the rows kept are always a prefix of the file.
inline LabeledDataset parse_libsvm(std::istream& in, std::size_t dim, std::size_t max_rows = 0) {
  if (dim == 0) throw InputError("libsvm: dim must be positive");
  std::vector<float> values;
  std::vector<double> labels;
  std::string line;
  std::size_t lineno = 0;
  while ((max_rows == 0 || labels.size() < max_rows) && std::getline(in, line)) {
    ++lineno;
    const auto tok = detail::split_ws(line);
    if (tok.empty()) continue;
    double label = 0.0;
    if (!detail::parse_number(tok[0], label)) {
      throw ParseError(lineno, "bad label '" + std::string(tok[0]) + "'");
    }
    const std::size_t base = values.size();
    values.resize(base + dim, 0.0f);
    for (std::size_t t = 1; t < tok.size(); ++t) {
      const std::size_t colon = tok[t].find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(lineno, "expected idx:val, got '" + std::string(tok[t]) + "'");
      }
      std::size_t idx = 0;
      float val = 0.0f;
      if (!detail::parse_number(tok[t].substr(0, colon), idx) || idx == 0) {
        throw ParseError(lineno, "bad feature index in '" + std::string(tok[t]) + "'");
      }
      if (!detail::parse_number(tok[t].substr(colon + 1), val) || !std::isfinite(val)) {
        throw ParseError(lineno, "bad feature value in '" + std::string(tok[t]) + "'");
      }
      if (idx > dim) {
        throw InputError("line " + std::to_string(lineno) + ": feature index " +
                         std::to_string(idx) + " exceeds dim " + std::to_string(dim));
      }
      values[base + idx - 1] = val;
    }
    labels.push_back(label);
  }
  if (labels.empty()) throw InputError("libsvm: no rows");
  return {Dataset(std::move(values), dim), std::move(labels)};
}

inline LabeledDataset load_libsvm(const std::string& path, std::size_t dim, std::size_t max_rows = 0) {
  std::ifstream in = detail::open_input(path);
  return parse_libsvm(in, dim, max_rows);
}

/// "token f1 ... fd" lines; d comes from the first line.
inline TokenDataset parse_glove(std::istream& in, std::size_t max_rows = 0) {
  std::vector<float> values;
  std::vector<std::string> tokens;
  std::size_t dim = 0;
  std::string line;
  std::size_t lineno = 0;
  while ((max_rows == 0 || tokens.size() < max_rows) && std::getline(in, line)) {
    ++lineno;
    const auto tok = detail::split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() < 2) throw ParseError(lineno, "token without features");
    const std::size_t width = tok.size() - 1;
    if (dim == 0) {
      dim = width;
    } else if (width != dim) {
      throw ParseError(lineno, "expected " + std::to_string(dim) + " features, got " +
                                   std::to_string(width));
    }
    for (std::size_t t = 1; t < tok.size(); ++t) {
      float v = 0.0f;
      if (!detail::parse_number(tok[t], v) || !std::isfinite(v)) {
        throw ParseError(lineno, "bad feature value '" + std::string(tok[t]) + "'");
      }
      values.push_back(v);
    }
    tokens.emplace_back(tok[0]);
  }
  if (tokens.empty()) throw InputError("glove: no rows");
  return {Dataset(std::move(values), dim), std::move(tokens)};
}

inline TokenDataset load_glove(const std::string& path, std::size_t max_rows = 0) {
  std::ifstream in = detail::open_input(path);
  return parse_glove(in, max_rows);
}

struct SyntheticDataset {
  Dataset data;
  Dataset means;                  // clusters x d
  std::vector<std::uint32_t> labels;  // generating cluster per row
};

inline constexpr double kSyntheticSeparation = 8.0;  // min distance between means, in sigmas

/// Mixture of unit-variance Gaussians. The means depend on `seed` only, so
/// different `stream`s draw train and query points from one mixture.
inline SyntheticDataset synthetic_gaussian(std::size_t n, std::size_t d, std::size_t clusters,
                                           std::uint64_t seed, std::uint64_t stream = 0) {
  if (n == 0 || d == 0 || clusters == 0) throw InputError("synthetic: n, d, clusters must be positive");
  Rng mean_rng(mix_seed(seed, 0xC0FFEE));
  double half_width =
      10.0 * std::max(1.0, std::pow(static_cast<double>(clusters), 1.0 / static_cast<double>(d)));
  std::vector<float> means;
  means.reserve(clusters * d);
  std::vector<float> cand(d);
  while (means.size() < clusters * d) {
    bool placed = false;
    for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
      for (float& c : cand) c = static_cast<float>(mean_rng.uniform(-half_width, half_width));
      placed = true;
      for (std::size_t j = 0; j < means.size() / d && placed; ++j) {
        double s = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
          const double diff = double(cand[c]) - double(means[j * d + c]);
          s += diff * diff;
        }
        placed = std::sqrt(s) >= kSyntheticSeparation;
      }
    }
    if (placed) {
      means.insert(means.end(), cand.begin(), cand.end());
    } else {
      half_width *= 1.25;
    }
  }

  Rng rng(mix_seed(seed, stream));
  std::vector<float> values(n * d);
  std::vector<std::uint32_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = rng.index(clusters);
    labels[i] = static_cast<std::uint32_t>(c);
    for (std::size_t j = 0; j < d; ++j) {
      values[i * d + j] = means[c * d + j] + static_cast<float>(rng.normal());
    }
  }
  return {Dataset(std::move(values), d), Dataset(std::move(means), d), std::move(labels)};
}

}  // namespace vann
