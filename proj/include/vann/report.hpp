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

// Tabular reports: CSV, structured (JSON) and the fixed-layout summary of
// sweep winners.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vann/error.hpp"
#include "vann/sim.hpp"

namespace vann {

inline std::string format_fixed(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

/// Rows of pre-rendered cells under a fixed header.
struct Report {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

enum class ReportFormat { csv, structured };

namespace detail {

inline std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

inline std::string render_csv(const Report& r) {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += detail::csv_cell(cells[i]);
    }
    out += '\n';
  };
  line(r.header);
  for (const auto& row : r.rows) line(row);
  return out;
}

/// Array of objects keyed by header; cells stay strings so both renderings
/// carry the same digits.
inline std::string render_structured(const Report& r) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < r.header.size() && i < row.size(); ++i) obj[r.header[i]] = row[i];
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

inline std::string render(const Report& r, ReportFormat f) {
  return f == ReportFormat::csv ? render_csv(r) : render_structured(r);
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  if (!out) throw IoError("write failed for '" + path + "'");
}

inline void write_report(const Report& r, ReportFormat f, const std::string& path) {
  write_text_file(path, render(r, f));
}

/// One row per (configuration, profile).
inline Report sweep_report(const SweepResult& s) {
  Report r;
  r.header = {"algorithm", "vlen", "k", "n", "m", "freq_hz", "bandwidth_limit_gbs",
              "cycles_per_call", "cycles_per_query", "qps", "achieved_bandwidth_gbs"};
  for (const SweepRow& row : s.rows) {
    const VectorUnitConfig& c = row.config;
    r.rows.push_back({s.profiles[row.profile].algorithm, std::to_string(c.vlen), std::to_string(c.k),
                      std::to_string(c.n), std::to_string(c.m), format_fixed(c.freq, 0),
                      format_fixed(c.bandwidth / 1e9, 3), format_fixed(row.report.cycles_per_call, 0),
                      format_fixed(row.report.cycles_per_query, 3), format_fixed(row.report.qps, 3),
                      format_fixed(row.report.achieved_bandwidth / 1e9, 6)});
  }
  return r;
}

// ---------------------------------------------------------------------------
// Winner summary: one column per algorithm plus the best-on-average column,
// rows k / vlen / n / m / bandwidth (GB/s) / Q/s. The average column's
// bandwidth is the mean over all algorithms at that configuration.

struct SummaryColumn {
  std::string name;
  VectorUnitConfig config;
  double bandwidth_gbs = 0.0;
  double qps = 0.0;
};

struct WinnerSummary {
  std::vector<SummaryColumn> columns;

  static constexpr std::string_view kRows[] = {"k", "vlen", "n", "m", "bandwidth (GB/s)", "Q/s"};

  /// Rendered cell for row r of column c.
  std::string cell(std::size_t r, std::size_t c) const {
    const SummaryColumn& col = columns[c];
    switch (r) {
      case 0: return std::to_string(col.config.k);
      case 1: return std::to_string(col.config.vlen);
      case 2: return std::to_string(col.config.n);
      case 3: return std::to_string(col.config.m);
      case 4: return format_fixed(col.bandwidth_gbs, 1);
      default: return format_fixed(std::round(col.qps), 0);
    }
  }
};

inline WinnerSummary winner_summary(const SweepResult& s) {
  WinnerSummary t;
  for (const SweepWinner& w : s.per_algorithm) {
    t.columns.push_back({w.algorithm, w.config, w.achieved_bandwidth / 1e9, w.qps});
  }
  t.columns.push_back({"Best on average", s.best_average.config,
                       s.best_average.achieved_bandwidth / 1e9, s.best_average.qps});
  return t;
}

inline std::string render_summary_text(const WinnerSummary& t) {
  std::vector<std::vector<std::string>> grid;
  grid.push_back({""});
  for (const auto& c : t.columns) grid[0].push_back(c.name);
  for (std::size_t r = 0; r < std::size(WinnerSummary::kRows); ++r) {
    std::vector<std::string> line{std::string(WinnerSummary::kRows[r])};
    for (std::size_t c = 0; c < t.columns.size(); ++c) line.push_back(t.cell(r, c));
    grid.push_back(std::move(line));
  }
  std::vector<std::size_t> width(grid[0].size(), 0);
  for (const auto& line : grid)
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());

  std::string out;
  for (std::size_t r = 0; r < grid.size(); ++r) {
    for (std::size_t c = 0; c < grid[r].size(); ++c) {
      const std::string& s = grid[r][c];
      if (c == 0) {
        out += s + std::string(width[c] - s.size(), ' ');
      } else {
        out += " | " + std::string(width[c] - s.size(), ' ') + s;
      }
    }
    out += '\n';
    if (r == 0) {
      std::size_t total = width[0];
      for (std::size_t c = 1; c < width.size(); ++c) total += 3 + width[c];
      out += std::string(total, '-') + '\n';
    }
  }
  out += "bandwidth of \"Best on average\" is the mean over all algorithms at that configuration\n";
  return out;
}

inline Report summary_report(const WinnerSummary& t) {
  Report r;
  r.header = {"row"};
  for (const auto& c : t.columns) r.header.push_back(c.name);
  for (std::size_t row = 0; row < std::size(WinnerSummary::kRows); ++row) {
    std::vector<std::string> line{std::string(WinnerSummary::kRows[row])};
    for (std::size_t c = 0; c < t.columns.size(); ++c) line.push_back(t.cell(row, c));
    r.rows.push_back(std::move(line));
  }
  return r;
}

/// Column-oriented structured form, with unrounded values alongside.
inline std::string render_summary_structured(const WinnerSummary& t) {
  nlohmann::ordered_json cols = nlohmann::ordered_json::array();
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    const SummaryColumn& col = t.columns[c];
    nlohmann::ordered_json j;
    j["name"] = col.name;
    j["k"] = col.config.k;
    j["vlen"] = col.config.vlen;
    j["n"] = col.config.n;
    j["m"] = col.config.m;
    j["bandwidth_gbs"] = t.cell(4, c);
    j["qps"] = t.cell(5, c);
    j["bandwidth_gbs_exact"] = col.bandwidth_gbs;
    j["qps_exact"] = col.qps;
    cols.push_back(std::move(j));
  }
  nlohmann::ordered_json root;
  root["columns"] = std::move(cols);
  root["average_bandwidth"] = "mean over all algorithms at the best-on-average configuration";
  return root.dump(2) + "\n";
}

}  // namespace vann
