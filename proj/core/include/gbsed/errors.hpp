// Copyright 2026 The GBSED Authors
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

#ifndef GBSED_ERRORS_HPP_
#define GBSED_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gbsed {

/// Root of every data error raised by the library. Callers that only care
/// whether an input was acceptable catch this; the CLI maps it to exit 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class HorizonError : public Error {
 public:
  HorizonError(const std::string& what, std::size_t object_index)
      : Error(what), object_index_(object_index) {}
  std::size_t object_index() const noexcept { return object_index_; }

 private:
  std::size_t object_index_;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

class DecodeError : public Error {
 public:
  using Error::Error;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class SpecError : public Error {
 public:
  using Error::Error;
};

/// Text-format error carrying the 1-based line number of the offending line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Errors raised while reading a wire payload; `offset` is the octet
/// position at which the problem was detected.
class WireError : public Error {
 public:
  WireError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class FormatError : public WireError {
 public:
  using WireError::WireError;
};

class TruncationError : public WireError {
 public:
  using WireError::WireError;
};

/// Transmitter and receiver disagree on the shared ontology. Raised both by
/// the payload parser (with an offset) and by in-memory consistency checks.
class OntologyMismatch : public WireError {
 public:
  using WireError::WireError;
  explicit OntologyMismatch(const std::string& what) : WireError(what, 0) {}
};

}  // namespace gbsed

#endif  // GBSED_ERRORS_HPP_
