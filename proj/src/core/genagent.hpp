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
//
// The test-case generation agent: prompt builders for the two generation
// goals (growing coverage, provoking runtime errors), the response parser,
// and the provider abstraction with a deterministic offline mock.

#ifndef SEEDSMITH_CORE_GENAGENT_HPP
#define SEEDSMITH_CORE_GENAGENT_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "core/clock.hpp"
#include "core/coverage.hpp"
#include "core/minilang.hpp"
#include "core/rng.hpp"
#include "core/testcase.hpp"
#include "core/transport.hpp"

namespace seedsmith {

enum class GenerationMode { coverage_seeking, error_seeking };

const char* mode_name(GenerationMode mode);

struct GenerationRequest {
  const Program* program = nullptr;
  GenerationMode mode = GenerationMode::coverage_seeking;
  /// Present exactly when mode == coverage_seeking.
  std::optional<AnnotatedListing> annotated;
  std::string format_spec;
  /// Canonical texts of recently rejected cases, oldest first, at most 5.
  std::vector<std::string> rejected_history;
};

/// Coverage-seeking prompt: instruction paragraph, the input-format block,
/// then the annotated listing under "Code Coverage of Current Corpus:".
/// Pure function of the request; golden-file stable.
std::string build_coverage_prompt(const GenerationRequest& request);

/// Error-seeking prompt: the runtime-error scenario list, the input-format
/// block, then the program source verbatim.
std::string build_error_prompt(const GenerationRequest& request);

/// Extracts the input block after the last "Test Case Input:" marker (or
/// falls back to bare token lines), strips code fences and placeholder
/// echoes, splits on whitespace, canonicalizes. Throws GenerationParseError
/// when no tokens can be recovered.
TestCase parse_generation(std::string_view response);

/// Serializes a test case the way we ask providers to answer; the inverse
/// of parse_generation.
std::string format_generation_response(const TestCase& test_case);

class Generator {
 public:
  virtual ~Generator() = default;
  virtual TestCase generate(const GenerationRequest& request) = 0;
  virtual std::string name() const = 0;
};

/// Deterministic offline enumerator: seeded token sequences biased toward
/// boundary values (0, +/-1, small loop counts, large magnitudes) and the
/// occasional type-mismatched token. Two generators built with the same seed
/// produce the same sequence of test cases.
class MockGenerator final : public Generator {
 public:
  MockGenerator(uint64_t seed, minilang::InputSpec spec, SimClock* clock = nullptr,
                int64_t cost_ms = 0);
  TestCase generate(const GenerationRequest& request) override;
  std::string name() const override { return "mock"; }

 private:
  Rng rng_;
  minilang::InputSpec spec_;
  SimClock* clock_;
  int64_t cost_ms_;
};

/// Prompt -> transport -> parse, with up to `retries` fresh completions when
/// a response cannot be parsed. Throws GenerationExhausted after the budget,
/// ProviderUnavailable if the transport gives up.
class LlmGenerator final : public Generator {
 public:
  LlmGenerator(Transport& transport, std::string model, double temperature = 0.7,
               int retries = 3);
  TestCase generate(const GenerationRequest& request) override;
  std::string name() const override { return "llm"; }

 private:
  Transport& transport_;
  std::string model_;
  double temperature_;
  int retries_;
};

}  // namespace seedsmith

#endif  // SEEDSMITH_CORE_GENAGENT_HPP
