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

// Parameterized vector-unit cost model.
//
// A configuration is (vlen, k, n, m) plus clock frequency and memory
// bandwidth. Instructions execute in order with no overlap; an instruction
// over `lanes` elements is priced as
//
//   setvl, mv_*        latency
//   add, sub           add  + ceil(lanes / n) - 1     (pipelined adders)
//   macc               macc + ceil(lanes / m) - 1     (pipelined fused MACs)
//   redosum            add  * ceil(log2(max(2, lanes)))  (adder tree)
//   load               max(load, ceil(4 * lanes / (bandwidth / freq)))
//
// so no load moves bytes faster than the memory controller allows.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "vann/error.hpp"
#include "vann/kernels.hpp"
#include "vann/profile.hpp"

namespace vann {

inline constexpr double kDefaultFreqHz = 1.85e9;
inline constexpr double kDefaultBandwidth = 29.8e9;  // bytes per second

struct VectorUnitConfig {
  std::size_t vlen = 512;  // register width in bits
  std::size_t k = 4;       // vector registers
  std::size_t n = 16;      // adders
  std::size_t m = 16;      // fused multiply-accumulate units
  double freq = kDefaultFreqHz;
  double bandwidth = kDefaultBandwidth;

  std::size_t lanes() const noexcept { return vlen / 32; }
  double bytes_per_cycle() const noexcept { return bandwidth / freq; }

  void validate() const {
    if (vlen == 0 || vlen % 32 != 0) {
      throw ConfigError("vlen=" + std::to_string(vlen) + " is not a positive multiple of 32");
    }
    if (k == 0 || n == 0 || m == 0) throw ConfigError("k, n and m must be >= 1");
    if (!(freq > 0.0) || !(bandwidth > 0.0)) throw ConfigError("freq and bandwidth must be > 0");
  }

  friend bool operator==(const VectorUnitConfig&, const VectorUnitConfig&) = default;
};

struct LatencyTable {
  std::uint64_t add = 3;
  std::uint64_t macc = 6;
  std::uint64_t load = 1;
  std::uint64_t setvl = 1;
  std::uint64_t mv_v_to_s = 1;
  std::uint64_t mv_s_to_v = 1;

  void validate() const {
    if (add == 0 || macc == 0 || load == 0 || setvl == 0 || mv_v_to_s == 0 || mv_s_to_v == 0) {
      throw ConfigError("instruction latencies must be positive");
    }
  }

  friend bool operator==(const LatencyTable&, const LatencyTable&) = default;
};

namespace detail {

inline std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

inline std::uint64_t ceil_log2(std::uint64_t x) {
  return static_cast<std::uint64_t>(std::bit_width(x - 1));
}

}  // namespace detail

inline std::uint64_t instruction_cost(const Instruction& instr, const VectorUnitConfig& config,
                                      const LatencyTable& lat) {
  const std::uint64_t lanes = instr.active_lanes;
  if (lanes == 0 || lanes > config.lanes()) {
    throw ConfigError("instruction uses " + std::to_string(lanes) + " lanes; vlen=" +
                      std::to_string(config.vlen) + " holds " + std::to_string(config.lanes()));
  }
  switch (instr.opcode) {
    case Opcode::setvl: return lat.setvl;
    case Opcode::mv_s_to_v: return lat.mv_s_to_v;
    case Opcode::mv_v_to_s: return lat.mv_v_to_s;
    case Opcode::add:
    case Opcode::sub: return lat.add + detail::ceil_div(lanes, config.n) - 1;
    case Opcode::macc: return lat.macc + detail::ceil_div(lanes, config.m) - 1;
    case Opcode::redosum: return lat.add * detail::ceil_log2(std::max<std::uint64_t>(2, lanes));
    case Opcode::load: {
      const double bytes = static_cast<double>(lanes * sizeof(float));
      const auto mem = static_cast<std::uint64_t>(std::ceil(bytes * config.freq / config.bandwidth));
      return std::max(lat.load, mem);
    }
  }
  return 0;
}

struct TraceCost {
  std::uint64_t cycles = 0;
  std::uint64_t bytes = 0;

  friend bool operator==(const TraceCost&, const TraceCost&) = default;
};

inline TraceCost simulate_trace(const InstructionTrace& trace, const VectorUnitConfig& config,
                                const LatencyTable& lat) {
  config.validate();
  if (trace.registers_used > config.k) {
    throw InfeasibleError("trace needs " + std::to_string(trace.registers_used) +
                          " vector registers; configuration has k=" + std::to_string(config.k));
  }
  TraceCost cost;
  for (const Instruction& i : trace.instructions) cost.cycles += instruction_cost(i, config, lat);
  cost.bytes = trace.bytes_loaded;
  return cost;
}

struct SimReport {
  double cycles_per_call = 0.0;
  double cycles_per_query = 0.0;
  double time_per_query = 0.0;      // seconds
  double qps = 0.0;
  double bytes_per_query = 0.0;
  double achieved_bandwidth = 0.0;  // bytes per second

  friend bool operator==(const SimReport&, const SimReport&) = default;
};

inline void validate_profile(const WorkloadProfile& p) {
  if (p.dim == 0) throw InputError("workload profile '" + p.algorithm + "': dim must be >= 1");
  if (!(p.calls_per_query > 0.0) || !std::isfinite(p.calls_per_query)) {
    throw InputError("workload profile '" + p.algorithm + "': calls_per_query must be > 0");
  }
}

/// Assemble the per-query report from the cost of one kernel call.
inline SimReport make_report(const WorkloadProfile& profile, const TraceCost& call,
                             const VectorUnitConfig& config) {
  SimReport r;
  r.cycles_per_call = static_cast<double>(call.cycles);
  r.cycles_per_query = profile.calls_per_query * r.cycles_per_call;
  r.time_per_query = r.cycles_per_query / config.freq;
  r.qps = config.freq / r.cycles_per_query;
  r.bytes_per_query = profile.calls_per_query * static_cast<double>(call.bytes);
  r.achieved_bandwidth = r.bytes_per_query / r.time_per_query;
  return r;
}

/// Only vectorized kernel work is priced.
inline SimReport qps(const WorkloadProfile& profile, const VectorUnitConfig& config,
                     const LatencyTable& lat) {
  validate_profile(profile);
  config.validate();
  const InstructionTrace trace = trace_for(profile.kernel, profile.dim, config.lanes());
  return make_report(profile, simulate_trace(trace, config, lat), config);
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepSpec {
  std::vector<std::size_t> vlen;
  std::vector<std::size_t> k;
  std::vector<std::size_t> n;
  std::vector<std::size_t> m;
  double freq = kDefaultFreqHz;
  double bandwidth = kDefaultBandwidth;
  LatencyTable latencies;

  std::size_t grid_size() const noexcept { return vlen.size() * k.size() * n.size() * m.size(); }

  void validate() const {
    if (grid_size() == 0) throw ConfigError("sweep grid is empty");
    latencies.validate();
    for (const VectorUnitConfig& c : configs()) c.validate();
  }

  std::vector<VectorUnitConfig> configs() const {
    std::vector<VectorUnitConfig> out;
    out.reserve(grid_size());
    for (std::size_t v : vlen)
      for (std::size_t kk : k)
        for (std::size_t nn : n)
          for (std::size_t mm : m) out.push_back({v, kk, nn, mm, freq, bandwidth});
    return out;
  }
};

inline std::vector<std::size_t> powers_of_two(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> out;
  for (std::size_t v = lo; v <= hi; v *= 2) out.push_back(v);
  return out;
}

/// vlen 128..16384, n and m 1..512, k in {4, 8, 16, 32}.
inline SweepSpec default_sweep_spec() {
  SweepSpec s;
  s.vlen = powers_of_two(128, 16384);
  s.k = {4, 8, 16, 32};
  s.n = powers_of_two(1, 512);
  s.m = powers_of_two(1, 512);
  return s;
}

/// Preference between two configurations with equal objective:
/// smaller vlen, then smaller n + m, then smaller k, then smaller n.
inline bool config_preferred(const VectorUnitConfig& a, const VectorUnitConfig& b) noexcept {
  return std::make_tuple(a.vlen, a.n + a.m, a.k, a.n, a.m) <
         std::make_tuple(b.vlen, b.n + b.m, b.k, b.n, b.m);
}

struct SweepRow {
  VectorUnitConfig config;
  std::size_t profile = 0;  // index into the profile list
  SimReport report;
};

struct SweepWinner {
  std::string algorithm;
  VectorUnitConfig config;
  double qps = 0.0;
  double achieved_bandwidth = 0.0;
};

struct SweepResult {
  std::vector<WorkloadProfile> profiles;
  /// Feasible (config, profile) evaluations, ordered by config then profile.
  std::vector<SweepRow> rows;
  std::vector<SweepWinner> per_algorithm;
  /// Mean qps and mean achieved bandwidth over all profiles.
  SweepWinner best_average;
  std::size_t infeasible = 0;
};

namespace detail {

struct ConfigEval {
  bool feasible = false;
  std::vector<SimReport> reports;  // one per profile
};

inline ConfigEval evaluate_config(const VectorUnitConfig& c, std::span<const WorkloadProfile> profiles,
                                  const LatencyTable& lat) {
  ConfigEval e;
  e.reports.reserve(profiles.size());
  for (const WorkloadProfile& p : profiles) {
    const InstructionTrace t = trace_for(p.kernel, p.dim, c.lanes());
    if (t.registers_used > c.k) return e;
    e.reports.push_back(make_report(p, simulate_trace(t, c, lat), c));
  }
  e.feasible = true;
  return e;
}

inline bool config_less(const VectorUnitConfig& a, const VectorUnitConfig& b) noexcept {
  return std::make_tuple(a.vlen, a.k, a.n, a.m) < std::make_tuple(b.vlen, b.k, b.n, b.m);
}

inline bool better(double qa, const VectorUnitConfig& a, double qb, const VectorUnitConfig& b) {
  if (qa != qb) return qa > qb;
  return config_preferred(a, b);
}

}  // namespace detail

/// Exhaustive evaluation of the grid. A configuration is feasible when it
/// holds every profile's kernel registers. `threads` > 1 evaluates grid
/// points concurrently; the result does not depend on it.
inline SweepResult sweep(const SweepSpec& spec, std::vector<WorkloadProfile> profiles,
                         unsigned threads = 1) {
  spec.validate();
  if (profiles.empty()) throw InputError("sweep: no workload profiles");
  for (const WorkloadProfile& p : profiles) validate_profile(p);

  std::vector<VectorUnitConfig> configs = spec.configs();
  std::sort(configs.begin(), configs.end(), detail::config_less);
  configs.erase(std::unique(configs.begin(), configs.end()), configs.end());

  std::vector<detail::ConfigEval> evals(configs.size());
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < configs.size(); i += stride) {
      evals[i] = detail::evaluate_config(configs[i], profiles, spec.latencies);
    }
  };
  threads = std::max(1U, threads);
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
  }

  SweepResult out;
  const std::size_t np = profiles.size();
  out.per_algorithm.resize(np);
  std::vector<bool> have(np, false);
  bool have_avg = false;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const detail::ConfigEval& e = evals[i];
    if (!e.feasible) {
      ++out.infeasible;
      continue;
    }
    double qsum = 0.0;
    double bsum = 0.0;
    for (std::size_t p = 0; p < np; ++p) {
      const SimReport& r = e.reports[p];
      out.rows.push_back({configs[i], p, r});
      qsum += r.qps;
      bsum += r.achieved_bandwidth;
      SweepWinner& w = out.per_algorithm[p];
      if (!have[p] || detail::better(r.qps, configs[i], w.qps, w.config)) {
        w = {profiles[p].algorithm, configs[i], r.qps, r.achieved_bandwidth};
        have[p] = true;
      }
    }
    const double qmean = qsum / static_cast<double>(np);
    if (!have_avg || detail::better(qmean, configs[i], out.best_average.qps, out.best_average.config)) {
      out.best_average = {"Best on average", configs[i], qmean, bsum / static_cast<double>(np)};
      have_avg = true;
    }
  }
  if (!have_avg) throw InfeasibleError("sweep: no feasible configuration in the grid");
  out.profiles = std::move(profiles);
  return out;
}

}  // namespace vann
