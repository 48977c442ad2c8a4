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
// A stand-in chat provider for offline tests and cassette recording. It
// behaves like a competent model: generation prompts are answered with a
// seeded test input, prediction prompts are answered by running the real
// interpreter and rendering the annotated listing (plus an ERROR line when
// the run faulted). Campaigns recorded against it are realistic enough to
// exercise the whole replay path.

#ifndef SEEDSMITH_TESTS_SUPPORT_SCRIPTED_BACKEND_HPP
#define SEEDSMITH_TESTS_SUPPORT_SCRIPTED_BACKEND_HPP

#include <string>

#include <json.hpp>

#include "core/coverage.hpp"
#include "core/genagent.hpp"
#include "core/minilang.hpp"
#include "core/rng.hpp"
#include "core/testcase.hpp"
#include "core/transport.hpp"

namespace testutil {

class ScriptedLlm {
 public:
  ScriptedLlm(const seedsmith::minilang::MiniProgram& program, uint64_t seed)
      : program_(program),
        mock_(seed, seedsmith::minilang::derive_input_spec(program)) {}

  /// Transport::Backend-compatible callable.
  std::string operator()(const std::string& request_body) {
    nlohmann::json request = nlohmann::json::parse(request_body);
    std::string prompt;
    for (const auto& message : request["messages"]) {
      if (message["role"] == "user") prompt = message["content"].get<std::string>();
    }

    std::string content;
    if (prompt.find("Predict the statement coverage") != std::string::npos) {
      content = predict(prompt);
    } else {
      content = generate(prompt);
    }
    nlohmann::json response = {
        {"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}}};
    return response.dump();
  }

 private:
  std::string generate(const std::string& prompt) {
    seedsmith::GenerationRequest request;
    request.program = &program_.view;
    request.mode = prompt.find("raise the following scenarios") != std::string::npos
                       ? seedsmith::GenerationMode::error_seeking
                       : seedsmith::GenerationMode::coverage_seeking;
    seedsmith::TestCase tc = mock_.generate(request);
    return seedsmith::format_generation_response(tc);
  }

  std::string predict(const std::string& prompt) {
    // The input block sits between "Test Case Input:" and the next blank line.
    constexpr std::string_view kMarker = "Test Case Input:\n";
    size_t begin = prompt.find(kMarker);
    if (begin == std::string::npos) return "garbage";
    begin += kMarker.size();
    size_t end = prompt.find("\n\n", begin);
    std::string input_text =
        end == std::string::npos ? prompt.substr(begin) : prompt.substr(begin, end - begin);

    auto outcome = seedsmith::minilang::execute(
        program_, seedsmith::TestCase::from_text(input_text));
    std::string listing =
        seedsmith::render_annotated(program_.view, outcome.covered).to_text();
    if (outcome.status == seedsmith::minilang::ExecutionOutcome::Status::runtime_error) {
      listing += "ERROR: ";
      listing += seedsmith::minilang::error_kind_name(outcome.error->kind);
      listing += " line " + std::to_string(outcome.error->line) + "\n";
    }
    return listing;
  }

  const seedsmith::minilang::MiniProgram& program_;
  seedsmith::MockGenerator mock_;
};

}  // namespace testutil

#endif  // SEEDSMITH_TESTS_SUPPORT_SCRIPTED_BACKEND_HPP
