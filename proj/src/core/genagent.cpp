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

#include "core/genagent.hpp"

#include <cassert>

#include "core/errors.hpp"

namespace seedsmith {

const char* mode_name(GenerationMode mode) {
  return mode == GenerationMode::coverage_seeking ? "coverage_seeking" : "error_seeking";
}

namespace {

const char* language_label(const Program& p) {
  return p.language_tag == LanguageTag::minilang ? "MiniLang" : "target";
}

constexpr const char* kFormatBlock =
    "Ensure the test case input is in the following format:\n"
    "Test Case Input:\n"
    "<input 1>\n"
    "<input 2>...\n";

void append_history(std::string& prompt, const std::vector<std::string>& history) {
  if (history.empty()) return;
  prompt += "\nDo not repeat these inputs:\n";
  size_t start = history.size() > 5 ? history.size() - 5 : 0;
  for (size_t i = start; i < history.size(); ++i) {
    std::string one_line = history[i];
    for (char& c : one_line) {
      if (c == '\n') c = ' ';
    }
    prompt += one_line;
    prompt += '\n';
  }
}

}  // namespace

std::string build_coverage_prompt(const GenerationRequest& request) {
  assert(request.program != nullptr);
  if (request.mode != GenerationMode::coverage_seeking || !request.annotated.has_value()) {
    throw Error("build_coverage_prompt requires coverage_seeking mode with an annotated listing");
  }
  // Full coverage means the orchestrator should have switched modes already.
  bool any_uncovered = false;
  for (const auto& line : request.annotated->lines) {
    if (line.marker == '!') any_uncovered = true;
  }
  if (!any_uncovered) {
    throw Error("coverage prompt requested for a fully covered program");
  }
  std::string prompt;
  prompt += "Generate a single test case for a ";
  prompt += language_label(*request.program);
  prompt +=
      " program to cover uncovered lines of code denoted by '!'. Provide only "
      "the test input without explanations. Consider various conditions, edge "
      "cases, and typical use cases.\n";
  prompt += kFormatBlock;
  if (!request.format_spec.empty()) {
    prompt += '\n';
    prompt += request.format_spec;
    prompt += '\n';
  }
  prompt += "\nCode Coverage of Current Corpus:\n";
  prompt += request.annotated->to_text();
  append_history(prompt, request.rejected_history);
  return prompt;
}

std::string build_error_prompt(const GenerationRequest& request) {
  assert(request.program != nullptr);
  if (request.mode != GenerationMode::error_seeking) {
    throw Error("build_error_prompt requires error_seeking mode");
  }
  const char* lang = language_label(*request.program);
  std::string prompt;
  prompt += "Generate a single test case without any explanation to raise the following scenarios in a ";
  prompt += lang;
  prompt += " program:\n";
  prompt +=
      "InputMismatchException: Provide an input value whose data type is "
      "different than the one specified.\n"
      "ArithmeticException: Test cases that could raise arithmetic exceptions "
      "include division by zero, overflow, underflow, or attempt to perform "
      "invalid operations, e.g., taking the square root of a negative number.\n"
      "NullPointerException: Create a scenario where a variable is explicitly "
      "set to null before usage.\n"
      "NumberFormatException: Input a value that cannot be parsed to the "
      "expected data type (a non-numeric string).\n"
      "ArrayIndexOutOfBoundsException or IndexOutOfBoundsException: Design "
      "input values that lead to accessing array or list indices beyond their "
      "bounds.\n"
      "(Other types of runtime errors and exceptions)\n";
  prompt += kFormatBlock;
  if (!request.format_spec.empty()) {
    prompt += '\n';
    prompt += request.format_spec;
    prompt += '\n';
  }
  prompt += "\nGenerate a single test case without providing an explanation for the below ";
  prompt += lang;
  prompt += " program:\n";
  prompt += request.program->source_text();
  append_history(prompt, request.rejected_history);
  return prompt;
}

namespace {

std::string trim_copy(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  size_t start = 0;
  while (start <= text.size()) {
    size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      if (start < text.size()) lines.emplace_back(text.substr(start));
      break;
    }
    lines.emplace_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

bool is_fence(const std::string& line) { return line.rfind("```", 0) == 0; }

bool is_placeholder(const std::string& line) {
  // Providers occasionally echo the "<input 1>" skeleton back.
  return !line.empty() && line.front() == '<' && line.find("input") != std::string::npos;
}

// Without the marker we only trust lines that look like raw input tokens,
// not prose: letters, digits, sign characters, nothing sentence-like.
bool is_input_like(const std::string& token) {
  for (char c : token) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
              c == '+' || c == '-' || c == '_';
    if (!ok) return false;
  }
  return !token.empty();
}

}  // namespace

TestCase parse_generation(std::string_view response) {
  constexpr std::string_view kMarker = "Test Case Input:";
  std::string_view block = response;
  bool have_marker = false;
  size_t marker = response.rfind(kMarker);
  if (marker != std::string_view::npos) {
    have_marker = true;
    block = response.substr(marker + kMarker.size());
  }

  std::vector<std::string> gathered;
  bool seen_content = false;
  for (const std::string& raw : split_lines(block)) {
    std::string line = trim_copy(raw);
    if (is_fence(line) || is_placeholder(line)) continue;
    if (line.empty()) {
      if (seen_content) break;  // a blank line ends the input block
      continue;
    }
    seen_content = true;
    gathered.push_back(std::move(line));
  }

  TestCase tc = TestCase::from_tokens(std::move(gathered));
  if (tc.empty()) {
    throw GenerationParseError(have_marker ? "empty input block after 'Test Case Input:'"
                                           : "response carries no marker and no token lines");
  }
  if (!have_marker) {
    bool plausible = tc.tokens.size() <= 32;
    for (const auto& token : tc.tokens) {
      if (!is_input_like(token)) plausible = false;
    }
    if (!plausible) {
      throw GenerationParseError("marker-less response does not look like a test input");
    }
  }
  return tc;
}

std::string format_generation_response(const TestCase& test_case) {
  return "Test Case Input:\n" + test_case.canonical_text + "\n";
}

// ---------------------------------------------------------------------------
// Mock provider

MockGenerator::MockGenerator(uint64_t seed, minilang::InputSpec spec, SimClock* clock,
                             int64_t cost_ms)
    : rng_(seed), spec_(std::move(spec)), clock_(clock), cost_ms_(cost_ms) {}

TestCase MockGenerator::generate(const GenerationRequest& request) {
  if (clock_ != nullptr) clock_->advance_ms(cost_ms_);

  static const std::vector<std::string> kMismatchPool = {"x",   "foo", "?",  "NaN",
                                                         "two", "1e9", "12a"};
  static const std::vector<std::string> kWordPool = {"a", "S", "H", "abc", "zz", "left"};
  static const std::vector<int64_t> kBoundaryPool = {
      0, 1, -1, 2, 13, 100, 101, 127, 255, 1000, -100, INT64_MAX, INT64_MIN};

  const bool error_mode = request.mode == GenerationMode::error_seeking;
  const double p_mismatch = error_mode ? 0.25 : 0.05;

  auto emit_token = [&](minilang::TokenKind kind, bool first_scalar) -> std::string {
    if (rng_.chance(p_mismatch)) return rng_.pick(kMismatchPool);
    if (kind == minilang::TokenKind::text) return rng_.pick(kWordPool);
    // Leading counts (array sizes, loop bounds) want to stay small.
    if (first_scalar && rng_.chance(0.5)) return std::to_string(rng_.index(5));
    double roll = rng_.unit();
    if (roll < 0.35) return std::to_string(rng_.index(13));
    if (roll < 0.55 || error_mode) return std::to_string(rng_.pick(kBoundaryPool));
    return std::to_string(rng_.range(-100, 1000));
  };

  std::vector<std::string> tokens;
  if (spec_.empty()) {
    size_t n = 1 + rng_.index(3);
    for (size_t i = 0; i < n; ++i) tokens.push_back(emit_token(minilang::TokenKind::integer, false));
  } else {
    bool first = true;
    for (const auto& slot : spec_) {
      size_t repeats = slot.in_loop ? 1 + rng_.index(4) : 1;
      for (size_t r = 0; r < repeats; ++r) {
        tokens.push_back(emit_token(slot.kind, first && !slot.in_loop));
        first = false;
      }
    }
  }
  // Occasionally starve the stream so exhausted-input paths stay reachable.
  if (error_mode && tokens.size() > 1 && rng_.chance(0.2)) {
    tokens.resize(1 + rng_.index(tokens.size()));
  }
  return TestCase::from_tokens(std::move(tokens));
}

// ---------------------------------------------------------------------------
// LLM provider

LlmGenerator::LlmGenerator(Transport& transport, std::string model, double temperature,
                           int retries)
    : transport_(transport), model_(std::move(model)), temperature_(temperature),
      retries_(retries) {}

TestCase LlmGenerator::generate(const GenerationRequest& request) {
  std::string prompt = request.mode == GenerationMode::coverage_seeking
                           ? build_coverage_prompt(request)
                           : build_error_prompt(request);
  ChatRequest chat;
  chat.model = model_;
  chat.user = prompt;
  chat.temperature = temperature_;

  std::string last_error;
  for (int attempt = 0; attempt < retries_; ++attempt) {
    std::string response = transport_.complete(chat);
    try {
      return parse_generation(response);
    } catch (const GenerationParseError& e) {
      last_error = e.what();
    }
  }
  throw GenerationExhausted("no parseable test case after " + std::to_string(retries_) +
                            " completions: " + last_error);
}

}  // namespace seedsmith
