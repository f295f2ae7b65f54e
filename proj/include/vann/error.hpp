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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vann {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied an argument outside an operation's domain
/// (dimension mismatch, k out of range, bad parameter).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Filesystem failure (cannot open, cannot write).
class IoError : public Error {
 public:
  using Error::Error;
};

/// Binary file does not start with the expected magic / tag is unknown.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Binary file ended before the declared payload was complete.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Binary file was written by an incompatible format version.
class VersionError : public Error {
 public:
  using Error::Error;
};

/// Vector-unit configuration violates its own invariants, or an
/// instruction needs more lanes than the register holds.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Configuration is valid but cannot run the workload (too few registers,
/// empty feasible set in a sweep).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace vann
