// Copyright 2026 The mltt Authors
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

namespace mltt {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not chain, or an index/mode is out of range.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// The unfolding of an operator is numerically singular.
class SingularityError : public Error {
public:
    using Error::Error;
};

/// A dense materialization would exceed the configured memory budget.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Spectral radius of a system operator is not below one.
class StabilityError : public Error {
public:
    using Error::Error;
};

/// Requested truncation order exceeds the numerical rank.
class RankError : public Error {
public:
    using Error::Error;
};

/// Invalid user configuration (CFL violation, bad factorization, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Iterative solver did not reach its tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Malformed or truncated file; carries the byte offset of the failure.
class FormatError : public Error {
public:
    FormatError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace mltt
