// Copyright 2026 The qliar Authors
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
#include <utility>

namespace qliar {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Bad argument: out-of-range index, dimension mismatch, non-unitary input.
class ArgumentError : public Error {
  public:
    using Error::Error;
};

/// A result would exceed the configured maximum dimension.
class CapacityError : public Error {
  public:
    using Error::Error;
};

/// Amplitudes that were required to be normalized are not.
class NormalizationError : public Error {
  public:
    using Error::Error;
};

/// The operator is outside the class the spectral routines handle
/// (only permutation operators are diagonalized).
class UnsupportedOperatorError : public Error {
  public:
    using Error::Error;
};

/// Malformed sentence source. Line and column are 1-based.
class ParseError : public Error {
  public:
    enum class Kind { Syntax, DanglingReference, DuplicateIndex, NonContiguous };

    ParseError(Kind kind, const std::string &what, std::size_t line, std::size_t column, std::string token)
        : Error(what), kind_(kind), line_(line), column_(column), token_(std::move(token)) {}

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }
    [[nodiscard]] const std::string &token() const noexcept { return token_; }

  private:
    Kind kind_;
    std::size_t line_;
    std::size_t column_;
    std::string token_;
};

/// The sentence reference graph is not a single cycle covering all sentences.
class TopologyError : public Error {
  public:
    using Error::Error;
};

/// A hypothesis was made that the current state assigns zero weight.
class ImpossibleHypothesisError : public Error {
  public:
    ImpossibleHypothesisError(const std::string &what, std::size_t event_index = npos)
        : Error(what), event_index_(event_index) {}

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    /// Index of the schedule event that failed, or npos outside a schedule.
    [[nodiscard]] std::size_t event_index() const noexcept { return event_index_; }

  private:
    std::size_t event_index_;
};

} // namespace qliar
