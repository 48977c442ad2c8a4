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
// Coverage prediction: given (program, test case), estimate which lines
// would execute, without necessarily running anything. The model-backed
// provider asks for an annotated listing; the oracle provider runs the
// interpreter and is exact by construction.

#ifndef SEEDSMITH_CORE_PREDICTOR_HPP
#define SEEDSMITH_CORE_PREDICTOR_HPP

#include <optional>
#include <string>

#include "core/coverage.hpp"
#include "core/minilang.hpp"
#include "core/rational.hpp"
#include "core/testcase.hpp"
#include "core/transport.hpp"

namespace seedsmith {

struct Prediction {
  enum class Provider { llm, oracle, replay };

  CoverageMap coverage;
  std::optional<minilang::RuntimeError> predicted_error;
  Provider provider_tag = Provider::oracle;
};

const char* provider_tag_name(Prediction::Provider tag);

/// Prompt asking for the annotated '>'/'!' listing (plus an optional final
/// "ERROR: <kind> line <n>" line), so parse_annotated can recover the map.
std::string build_predictor_prompt(const Program& p, const TestCase& input);

/// Splits an optional trailing ERROR line off a prediction response and
/// parses the rest as an annotated listing. Throws PredictionParseError.
Prediction parse_prediction_response(std::string_view response, const Program& p);

class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual Prediction predict(const Program& p, const TestCase& input) = 0;
  virtual std::string name() const = 0;
};

/// Ground truth by execution: coverage and error mirror the interpreter
/// outcome exactly.
class OraclePredictor final : public Predictor {
 public:
  explicit OraclePredictor(const minilang::MiniProgram& program,
                           uint64_t step_limit = minilang::kDefaultStepLimit,
                           SimClock* clock = nullptr, int64_t cost_ms = 0);
  Prediction predict(const Program& p, const TestCase& input) override;
  std::string name() const override { return "oracle"; }

 private:
  const minilang::MiniProgram& program_;
  uint64_t step_limit_;
  SimClock* clock_;
  int64_t cost_ms_;
};

/// Prompt -> transport -> parse_annotated, with up to `retries` fresh
/// completions on malformed listings, then PredictionExhausted.
class LlmPredictor final : public Predictor {
 public:
  LlmPredictor(Transport& transport, std::string model, double temperature = 0.0,
               int retries = 3);
  Prediction predict(const Program& p, const TestCase& input) override;
  std::string name() const override { return "llm"; }

 private:
  Transport& transport_;
  std::string model_;
  double temperature_;
  int retries_;
};

struct AccuracyReport {
  Rational precision;
  Rational recall;
  bool exact_match = false;
};

/// Per-line precision/recall of a prediction against an actual execution.
/// Empty-set conventions: an empty prediction has precision 1; an empty
/// actual set has recall 1.
AccuracyReport prediction_accuracy(const Prediction& pred,
                                   const minilang::ExecutionOutcome& actual);

}  // namespace seedsmith

#endif  // SEEDSMITH_CORE_PREDICTOR_HPP
