// Copyright 2026 The Seedsmith Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEEDSMITH_CORE_ERRORS_HPP
#define SEEDSMITH_CORE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace seedsmith {

/// Base class for every error this library raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two coverage values (or a coverage value and a program) disagree on
/// program identity or denominator.
class ProgramMismatch : public Error {
 public:
  using Error::Error;
};

/// The program has no executable lines, so coverage percentages are undefined.
class DegenerateProgram : public Error {
 public:
  using Error::Error;
};

/// An annotated coverage listing could not be parsed back into a map.
class PredictionParseError : public Error {
 public:
  using Error::Error;
};

/// A generation response carried no usable test input.
class GenerationParseError : public Error {
 public:
  using Error::Error;
};

/// The transport gave up after its retry budget.
class ProviderUnavailable : public Error {
 public:
  using Error::Error;
};

/// The generation provider produced unparseable responses N times in a row.
class GenerationExhausted : public Error {
 public:
  using Error::Error;
};

/// The prediction provider produced unparseable responses N times in a row.
class PredictionExhausted : public Error {
 public:
  using Error::Error;
};

/// A replayed request does not match the next cassette entry.
class CassetteDrift : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// The exact set-cover oracle refuses instances it cannot enumerate.
class OracleTooLarge : public Error {
 public:
  using Error::Error;
};

/// A time denominator of zero or less was passed to a rate metric.
class DegenerateInterval : public Error {
 public:
  using Error::Error;
};

/// Subject-language syntax error, carrying the 1-based offending line.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace seedsmith

#endif  // SEEDSMITH_CORE_ERRORS_HPP
