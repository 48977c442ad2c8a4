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

#ifndef SEEDSMITH_CORE_TESTCASE_HPP
#define SEEDSMITH_CORE_TESTCASE_HPP

#include <string>
#include <string_view>
#include <vector>

namespace seedsmith {

/// An ordered sequence of input tokens for a subject program's input stream.
/// Canonical form: tokens carry no surrounding whitespace and are never
/// empty; canonical_text is the tokens joined with '\n'. Two test cases are
/// duplicates exactly when their canonical_text is byte-identical.
struct TestCase {
  std::vector<std::string> tokens;
  std::string canonical_text;

  static TestCase from_tokens(std::vector<std::string> tokens);
  /// Splits on any whitespace.
  static TestCase from_text(std::string_view text);

  bool empty() const { return tokens.empty(); }
  size_t size_bytes() const { return canonical_text.size(); }
  bool operator==(const TestCase& o) const { return canonical_text == o.canonical_text; }
};

}  // namespace seedsmith

#endif  // SEEDSMITH_CORE_TESTCASE_HPP
