// Copyright 2026 The qexcite Authors
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

#include <stdexcept>
#include <string>

namespace qexcite {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

class UnsupportedRequest : public Error {
 public:
  using Error::Error;
};

/// The Liouvillian has more than one stationary state.
class NonUniqueSteadyState : public Error {
 public:
  using Error::Error;
};

/// A solver did not reach the requested accuracy.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A normalized correlator was requested for a vanishing population.
class UndefinedCorrelator : public Error {
 public:
  using Error::Error;
};

class Infeasible : public Error {
 public:
  using Error::Error;
};

/// Phase-space grid does not hold the Wigner function's norm.
class GridTooSmall : public Error {
 public:
  using Error::Error;
};

/// Configuration file problem; carries the offending line (0 when not tied to a line).
class ConfigError : public Error {
 public:
  ConfigError(int line, const std::string& what)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace qexcite
