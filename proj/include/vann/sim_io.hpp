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

// JSON files for the simulator: sweep specification and workload profiles.
//
// Sweep spec (every key optional; missing keys keep the defaults):
//   { "vlen": [128, 256], "k": [4], "n": [8, 16], "m": [16],
//     "freq_hz": 1.85e9, "bandwidth_bytes_per_s": 29.8e9,
//     "latencies": { "add": 3, "macc": 6, "load": 1, "setvl": 1,
//                    "mv_v_to_s": 1, "mv_s_to_v": 1 } }
//
// Profiles: { "profiles": [ { "algorithm": "hnsw", "dim": 32,
//                             "calls_per_query": 812.4, "kernel": "l2" } ] }

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vann/error.hpp"
#include "vann/sim.hpp"

namespace vann {

namespace detail {

inline nlohmann::json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(what + ": " + e.what());
  }
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename T>
T json_get(const nlohmann::json& j, const char* key, const std::string& what) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(what + ": key '" + key + "': " + e.what());
  }
}

}  // namespace detail

inline SweepSpec parse_sweep_spec(const std::string& text) {
  const nlohmann::json j = detail::parse_json_text(text, "sweep spec");
  if (!j.is_object()) throw InputError("sweep spec: top level must be an object");
  SweepSpec s = default_sweep_spec();
  const std::string what = "sweep spec";
  if (j.contains("vlen")) s.vlen = detail::json_get<std::vector<std::size_t>>(j, "vlen", what);
  if (j.contains("k")) s.k = detail::json_get<std::vector<std::size_t>>(j, "k", what);
  if (j.contains("n")) s.n = detail::json_get<std::vector<std::size_t>>(j, "n", what);
  if (j.contains("m")) s.m = detail::json_get<std::vector<std::size_t>>(j, "m", what);
  if (j.contains("freq_hz")) s.freq = detail::json_get<double>(j, "freq_hz", what);
  if (j.contains("bandwidth_bytes_per_s")) {
    s.bandwidth = detail::json_get<double>(j, "bandwidth_bytes_per_s", what);
  }
  if (j.contains("latencies")) {
    const auto& l = j["latencies"];
    if (!l.is_object()) throw InputError("sweep spec: 'latencies' must be an object");
    auto set = [&](const char* key, std::uint64_t& field) {
      if (l.contains(key)) field = detail::json_get<std::uint64_t>(l, key, what);
    };
    set("add", s.latencies.add);
    set("macc", s.latencies.macc);
    set("load", s.latencies.load);
    set("setvl", s.latencies.setvl);
    set("mv_v_to_s", s.latencies.mv_v_to_s);
    set("mv_s_to_v", s.latencies.mv_s_to_v);
  }
  s.validate();
  return s;
}

inline SweepSpec load_sweep_spec(const std::string& path) {
  return parse_sweep_spec(detail::read_text_file(path));
}

inline std::vector<WorkloadProfile> parse_profiles(const std::string& text) {
  const nlohmann::json j = detail::parse_json_text(text, "profiles");
  if (!j.is_object() || !j.contains("profiles") || !j["profiles"].is_array()) {
    throw InputError("profiles: expected an object with a 'profiles' array");
  }
  std::vector<WorkloadProfile> out;
  for (const auto& p : j["profiles"]) {
    WorkloadProfile w;
    w.algorithm = detail::json_get<std::string>(p, "algorithm", "profile");
    w.dim = detail::json_get<std::size_t>(p, "dim", "profile");
    w.calls_per_query = detail::json_get<double>(p, "calls_per_query", "profile");
    const std::string kernel = p.contains("kernel") ? detail::json_get<std::string>(p, "kernel", "profile") : "l2";
    if (kernel == "l2") {
      w.kernel = KernelKind::l2;
    } else if (kernel == "dot") {
      w.kernel = KernelKind::dot;
    } else {
      throw InputError("profile '" + w.algorithm + "': unknown kernel '" + kernel + "'");
    }
    validate_profile(w);
    out.push_back(std::move(w));
  }
  return out;
}

inline std::vector<WorkloadProfile> load_profiles(const std::string& path) {
  return parse_profiles(detail::read_text_file(path));
}

inline std::string render_profiles(const std::vector<WorkloadProfile>& profiles) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const WorkloadProfile& p : profiles) {
    nlohmann::ordered_json j;
    j["algorithm"] = p.algorithm;
    j["dim"] = p.dim;
    j["calls_per_query"] = p.calls_per_query;
    j["kernel"] = std::string(kernel_name(p.kernel));
    arr.push_back(std::move(j));
  }
  nlohmann::ordered_json root;
  root["profiles"] = std::move(arr);
  return root.dump(2) + "\n";
}

}  // namespace vann
