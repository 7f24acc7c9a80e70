// Copyright 2026 The tagground Authors
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

namespace tagground {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A tagging record (or a single tag) failed validation.
class RejectedRecord : public Error {
 public:
  using Error::Error;
};

/// A resource or author id is not present in the corpus.
class NotFound : public Error {
 public:
  using Error::Error;
};

/// Input text could not be parsed. Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// The input stream itself failed while reading.
class IngestError : public Error {
 public:
  IngestError(std::size_t line, const std::string& what)
      : Error("ingestion failed at line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A rate was requested over an empty population.
class UndefinedRate : public Error {
 public:
  using Error::Error;
};

/// MFT grounding without a profile and without fallback.
class MissingContext : public Error {
 public:
  using Error::Error;
};

/// A caller broke an operation's precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace tagground
