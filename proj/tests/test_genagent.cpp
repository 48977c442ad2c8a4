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

#include <doctest.h>

#include "core/errors.hpp"
#include "core/genagent.hpp"
#include "support/test_util.hpp"

using namespace seedsmith;

namespace {

minilang::MiniProgram fixture() { return testutil::load_fixture_program("branchy.ml"); }

GenerationRequest coverage_request(const minilang::MiniProgram& p, const CoverageMap& cov) {
  GenerationRequest request;
  request.program = &p.view;
  request.mode = GenerationMode::coverage_seeking;
  request.annotated = render_annotated(p.view, cov);
  request.format_spec = minilang::describe_input_format(minilang::derive_input_spec(p));
  return request;
}

}  // namespace

TEST_CASE("test cases canonicalize to newline-joined tokens") {
  TestCase tc = TestCase::from_text("  5\n 3 1 \t4 ");
  CHECK(tc.tokens == std::vector<std::string>{"5", "3", "1", "4"});
  CHECK(tc.canonical_text == "5\n3\n1\n4");
  CHECK(tc == TestCase::from_tokens({"5", "3", "1", "4"}));
  CHECK(TestCase::from_text("").empty());
  CHECK(TestCase::from_tokens({"  ", ""}).empty());
}

TEST_CASE("parse_generation extracts the block after the last marker") {
  TestCase tc = parse_generation("Test Case Input:\n5\n3 1 4 1 5");
  CHECK(tc.tokens == std::vector<std::string>{"5", "3", "1", "4", "1", "5"});

  // Prose before the marker is ignored; the *last* marker wins.
  TestCase with_prose = parse_generation(
      "Sure! Here is a test case.\nTest Case Input:\n<input 1>\n"
      "The real one follows.\nTest Case Input:\n7\n8\n\nThis covers the loop.");
  CHECK(with_prose.canonical_text == "7\n8");

  // Code fences and placeholder echoes are stripped.
  TestCase fenced = parse_generation("Test Case Input:\n```\n42\n-1\n```\n");
  CHECK(fenced.canonical_text == "42\n-1");

  // No marker: bare token lines are accepted.
  CHECK(parse_generation("3 9\n-5").canonical_text == "3\n9\n-5");

  CHECK_THROWS_AS(parse_generation(""), GenerationParseError);
  CHECK_THROWS_AS(parse_generation("Test Case Input:\n"), GenerationParseError);
  CHECK_THROWS_AS(parse_generation("Test Case Input:\n```\n```\n"), GenerationParseError);
}

TEST_CASE("parse_generation inverts format_generation_response") {
  Rng rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    TestCase tc = testutil::random_input(rng);
    if (tc.empty()) continue;
    CHECK(parse_generation(format_generation_response(tc)) == tc);
  }
}

TEST_CASE("coverage prompt carries instruction, format block and listing in order") {
  auto p = fixture();
  auto request = coverage_request(p, CoverageMap::empty_for(p.view));
  std::string prompt = build_coverage_prompt(request);

  size_t instruction = prompt.find("cover uncovered lines of code denoted by '!'");
  size_t explain = prompt.find("Provide only the test input without explanations");
  size_t format = prompt.find("Test Case Input:");
  size_t listing = prompt.find("Code Coverage of Current Corpus:");
  CHECK(instruction != std::string::npos);
  CHECK(explain != std::string::npos);
  CHECK(format != std::string::npos);
  CHECK(listing != std::string::npos);
  CHECK(instruction < format);
  CHECK(format < listing);

  // Empty cumulative coverage renders every executable line with '!'.
  for (int line : p.view.executable) {
    std::string marked = "! " + p.view.source_lines[static_cast<size_t>(line - 1)];
    CHECK(prompt.find(marked) != std::string::npos);
  }

  // Rejected history is appended verbatim, one case per line.
  request.rejected_history = {"5\n4", "0\n0"};
  std::string with_history = build_coverage_prompt(request);
  CHECK(with_history.find("Do not repeat these inputs:\n5 4\n0 0\n") != std::string::npos);

  // Full coverage violates the precondition: the caller must have switched
  // to error-seeking already.
  std::set<int> all = p.view.executable;
  auto saturated = coverage_request(p, CoverageMap::for_program(p.view, all));
  CHECK_THROWS_AS(build_coverage_prompt(saturated), Error);

  // The builder refuses requests in the wrong mode.
  request.mode = GenerationMode::error_seeking;
  request.annotated.reset();
  CHECK_THROWS_AS(build_coverage_prompt(request), Error);
}

TEST_CASE("error prompt lists the scenario taxonomy and the source verbatim") {
  auto p = fixture();
  GenerationRequest request;
  request.program = &p.view;
  request.mode = GenerationMode::error_seeking;
  std::string prompt = build_error_prompt(request);

  for (const char* label : {"InputMismatchException", "ArithmeticException",
                            "NullPointerException", "NumberFormatException",
                            "ArrayIndexOutOfBoundsException or IndexOutOfBoundsException",
                            "(Other types of runtime errors and exceptions)"}) {
    CHECK(prompt.find(label) != std::string::npos);
  }
  CHECK(prompt.find(p.view.source_text()) != std::string::npos);
  CHECK(prompt.find("Test Case Input:") != std::string::npos);
}

TEST_CASE("prompts are golden-file stable") {
  auto p = fixture();

  auto empty_request = coverage_request(p, CoverageMap::empty_for(p.view));
  CHECK(build_coverage_prompt(empty_request) ==
        testutil::read_file(testutil::fixtures_dir() / "prompts" / "coverage_empty.txt"));

  auto partial = coverage_request(
      p, CoverageMap::for_program(p.view, {2, 3, 4, 5, 13, 14, 18, 19}));
  partial.rejected_history = {"5\n4"};
  CHECK(build_coverage_prompt(partial) ==
        testutil::read_file(testutil::fixtures_dir() / "prompts" / "coverage_partial.txt"));

  GenerationRequest error_request;
  error_request.program = &p.view;
  error_request.mode = GenerationMode::error_seeking;
  error_request.format_spec =
      minilang::describe_input_format(minilang::derive_input_spec(p));
  CHECK(build_error_prompt(error_request) ==
        testutil::read_file(testutil::fixtures_dir() / "prompts" / "error_prompt.txt"));
}

TEST_CASE("mock generator is deterministic per seed") {
  auto p = fixture();
  auto spec = minilang::derive_input_spec(p);
  GenerationRequest request;
  request.program = &p.view;
  request.mode = GenerationMode::error_seeking;

  MockGenerator first(42, spec);
  MockGenerator second(42, spec);
  for (int i = 0; i < 10; ++i) {
    CHECK(first.generate(request) == second.generate(request));
  }

  MockGenerator other(43, spec);
  MockGenerator fresh(42, spec);
  bool any_difference = false;
  for (int i = 0; i < 10; ++i) {
    if (!(other.generate(request) == fresh.generate(request))) any_difference = true;
  }
  CHECK(any_difference);
}

TEST_CASE("mock generator charges its simulated cost") {
  auto p = fixture();
  SimClock clock;
  MockGenerator generator(1, minilang::derive_input_spec(p), &clock, 700);
  GenerationRequest request;
  request.program = &p.view;
  request.mode = GenerationMode::error_seeking;
  generator.generate(request);
  generator.generate(request);
  CHECK(clock.now_ms() == 1400);
}

TEST_CASE("llm generator retries unparseable responses, then gives up") {
  auto p = fixture();
  GenerationRequest request = coverage_request(p, CoverageMap::empty_for(p.view));

  TransportConfig config;
  config.mode = TransportMode::live;
  config.endpoint = "http://unused.invalid/v1";

  SUBCASE("second completion parses") {
    Transport transport(config);
    int calls = 0;
    transport.set_backend([&](const std::string&) {
      ++calls;
      std::string content =
          calls == 1 ? "I cannot produce an input here, sorry." : "Test Case Input:\\n5 6";
      return std::string("{\"choices\":[{\"message\":{\"content\":\"") + content + "\"}}]}";
    });
    LlmGenerator generator(transport, "test-model");
    TestCase tc = generator.generate(request);
    CHECK(tc.canonical_text == "5\n6");
    CHECK(calls == 2);
  }

  SUBCASE("exhaustion after three bad completions") {
    Transport transport(config);
    int calls = 0;
    transport.set_backend([&](const std::string&) {
      ++calls;
      return std::string("{\"choices\":[{\"message\":{\"content\":\"\"}}]}");
    });
    LlmGenerator generator(transport, "test-model");
    CHECK_THROWS_AS(generator.generate(request), GenerationExhausted);
    CHECK(calls == 3);
  }
}
