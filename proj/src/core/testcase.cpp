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

#include "core/testcase.hpp"

#include <cctype>

namespace seedsmith {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

TestCase TestCase::from_tokens(std::vector<std::string> raw) {
  TestCase tc;
  tc.tokens.reserve(raw.size());
  for (auto& token : raw) {
    std::string t = trim(token);
    if (t.empty()) continue;
    // A "token" containing inner whitespace is really several tokens.
    size_t start = 0;
    while (start < t.size()) {
      while (start < t.size() && is_space(t[start])) ++start;
      size_t end = start;
      while (end < t.size() && !is_space(t[end])) ++end;
      if (end > start) tc.tokens.push_back(t.substr(start, end - start));
      start = end;
    }
  }
  for (size_t i = 0; i < tc.tokens.size(); ++i) {
    if (i) tc.canonical_text += '\n';
    tc.canonical_text += tc.tokens[i];
  }
  return tc;
}

TestCase TestCase::from_text(std::string_view text) {
  return from_tokens({std::string(text)});
}

}  // namespace seedsmith
