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

// Distance kernels.
//
// Two families live here. The scalar reference kernels accumulate
// left-to-right in one float. The strip-mined kernels emulate a
// vector-length-agnostic loop: the array is cut into chunks of at most
// `lanes` elements, each chunk is subtracted / multiply-accumulated into a
// register of lane accumulators, and the register is reduced by a binary
// tree at the end. The trace_* functions emit the instruction sequence the
// same loop would execute, for pricing by the vector-unit simulator.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vann/error.hpp"

namespace vann {

using FloatSpan = std::span<const float>;

/// Lane count used by the indexes: a 512-bit register of 32-bit floats.
inline constexpr std::size_t kDefaultLanes = 16;

/// Lengths of the chunks a strip-mined loop over `d` elements processes.
inline std::vector<std::size_t> strip_mine(std::size_t d, std::size_t lanes) {
  if (d == 0 || lanes == 0) {
    throw InputError("strip_mine: d and lanes must be positive");
  }
  std::vector<std::size_t> chunks(d / lanes, lanes);
  if (d % lanes != 0) chunks.push_back(d % lanes);
  return chunks;
}

namespace detail {

inline void check_dims(FloatSpan a, FloatSpan b, const char* who) {
  if (a.size() != b.size()) {
    throw InputError(std::string(who) + ": dimension mismatch (" +
                     std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  }
}

// Lane accumulators. Small registers live on the stack.
class LaneRegister {
 public:
  explicit LaneRegister(std::size_t width) : width_(width) {
    if (width_ > kInline) heap_.assign(width_, 0.0f);
    std::fill_n(data(), width_, 0.0f);
  }

  float* data() noexcept { return width_ > kInline ? heap_.data() : inline_.data(); }

  // Pairwise tree over the live lanes: lane i absorbs lane i + ceil(w/2).
  float tree_reduce() noexcept {
    float* acc = data();
    std::size_t w = width_;
    while (w > 1) {
      const std::size_t half = (w + 1) / 2;
      for (std::size_t i = 0; i + half < w; ++i) acc[i] += acc[i + half];
      w = half;
    }
    return width_ == 0 ? 0.0f : acc[0];
  }

 private:
  static constexpr std::size_t kInline = 512;
  std::size_t width_;
  std::array<float, kInline> inline_;
  std::vector<float> heap_;
};

}  // namespace detail

inline float scalar_l2_squared(FloatSpan a, FloatSpan b) {
  detail::check_dims(a, b, "scalar_l2_squared");
  float s = 0.0f;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const float diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

inline float scalar_dot(FloatSpan a, FloatSpan b) {
  detail::check_dims(a, b, "scalar_dot");
  float s = 0.0f;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Strip-mined squared Euclidean distance. Differs from the scalar
/// reference only in accumulation order.
inline float vec_l2_squared(FloatSpan a, FloatSpan b, std::size_t lanes) {
  detail::check_dims(a, b, "vec_l2_squared");
  if (lanes == 0) throw InputError("vec_l2_squared: lanes must be positive");
  const std::size_t d = a.size();
  if (d == 0) return 0.0f;
  detail::LaneRegister acc(std::min(d, lanes));
  float* s = acc.data();
  for (std::size_t i = 0; i < d; i += lanes) {
    const std::size_t vl = std::min(lanes, d - i);
    const float* pa = a.data() + i;
    const float* pb = b.data() + i;
    for (std::size_t j = 0; j < vl; ++j) {
      const float diff = pa[j] - pb[j];
      s[j] += diff * diff;
    }
  }
  return acc.tree_reduce();
}

/// Strip-mined dot product.
inline float vec_dot(FloatSpan a, FloatSpan b, std::size_t lanes) {
  detail::check_dims(a, b, "vec_dot");
  if (lanes == 0) throw InputError("vec_dot: lanes must be positive");
  const std::size_t d = a.size();
  if (d == 0) return 0.0f;
  detail::LaneRegister acc(std::min(d, lanes));
  float* s = acc.data();
  for (std::size_t i = 0; i < d; i += lanes) {
    const std::size_t vl = std::min(lanes, d - i);
    const float* pa = a.data() + i;
    const float* pb = b.data() + i;
    for (std::size_t j = 0; j < vl; ++j) s[j] += pa[j] * pb[j];
  }
  return acc.tree_reduce();
}

/// The distance every index ranks by.
inline float l2_squared(FloatSpan a, FloatSpan b) {
  return vec_l2_squared(a, b, kDefaultLanes);
}

inline float dot(FloatSpan a, FloatSpan b) { return vec_dot(a, b, kDefaultLanes); }

// ---------------------------------------------------------------------------
// Instruction traces

enum class Opcode : std::uint8_t {
  setvl,
  load,
  sub,
  add,
  macc,
  redosum,
  mv_s_to_v,
  mv_v_to_s,
};

inline constexpr std::string_view opcode_name(Opcode op) noexcept {
  switch (op) {
    case Opcode::setvl: return "setvl";
    case Opcode::load: return "load";
    case Opcode::sub: return "sub";
    case Opcode::add: return "add";
    case Opcode::macc: return "macc";
    case Opcode::redosum: return "redosum";
    case Opcode::mv_s_to_v: return "mv_s_to_v";
    case Opcode::mv_v_to_s: return "mv_v_to_s";
  }
  return "?";
}

struct Instruction {
  Opcode opcode;
  std::size_t active_lanes;  // vl in effect

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

struct InstructionTrace {
  std::vector<Instruction> instructions;
  std::uint64_t bytes_loaded = 0;
  std::size_t registers_used = 0;

  std::size_t count(Opcode op) const noexcept {
    return static_cast<std::size_t>(
        std::count_if(instructions.begin(), instructions.end(),
                      [op](const Instruction& i) { return i.opcode == op; }));
  }
};

enum class KernelKind : std::uint8_t { l2, dot };

inline constexpr std::string_view kernel_name(KernelKind k) noexcept {
  return k == KernelKind::l2 ? "l2" : "dot";
}

namespace detail {

inline InstructionTrace trace_kernel(std::size_t d, std::size_t lanes, bool with_sub) {
  if (d == 0 || lanes == 0) throw InputError("trace: d and lanes must be positive");
  InstructionTrace t;
  const std::size_t vl0 = std::min(d, lanes);
  auto emit = [&t](Opcode op, std::size_t vl) { t.instructions.push_back({op, vl}); };

  emit(Opcode::setvl, vl0);
  emit(Opcode::mv_s_to_v, vl0);
  std::size_t vl = vl0;
  for (std::size_t chunk : strip_mine(d, lanes)) {
    if (chunk != vl) {
      emit(Opcode::setvl, chunk);
      vl = chunk;
    }
    emit(Opcode::load, chunk);
    emit(Opcode::load, chunk);
    t.bytes_loaded += 2 * chunk * sizeof(float);
    if (with_sub) emit(Opcode::sub, chunk);
    emit(Opcode::macc, chunk);
  }
  // The accumulator keeps vl0 live lanes regardless of the last chunk.
  emit(Opcode::redosum, vl0);
  emit(Opcode::mv_v_to_s, 1);
  // accumulator, a, b [, difference]
  t.registers_used = with_sub ? 4 : 3;
  return t;
}

}  // namespace detail

inline InstructionTrace trace_l2(std::size_t d, std::size_t lanes) {
  return detail::trace_kernel(d, lanes, true);
}

inline InstructionTrace trace_dot(std::size_t d, std::size_t lanes) {
  return detail::trace_kernel(d, lanes, false);
}

inline InstructionTrace trace_for(KernelKind kind, std::size_t d, std::size_t lanes) {
  return kind == KernelKind::l2 ? trace_l2(d, lanes) : trace_dot(d, lanes);
}

}  // namespace vann
