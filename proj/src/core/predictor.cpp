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

#include "core/predictor.hpp"

#include <algorithm>
#include <cstdio>

#include "core/errors.hpp"

namespace seedsmith {

const char* provider_tag_name(Prediction::Provider tag) {
  switch (tag) {
    case Prediction::Provider::llm: return "llm";
    case Prediction::Provider::oracle: return "oracle";
    case Prediction::Provider::replay: return "replay";
  }
  return "unknown";
}

std::string build_predictor_prompt(const Program& p, const TestCase& input) {
  std::string prompt;
  prompt += "Predict the statement coverage of the following ";
  prompt += p.language_tag == LanguageTag::minilang ? "MiniLang" : "target";
  prompt += " program for the given test input, without executing it.\n\nProgram:\n";
  for (int line = 1; line <= p.line_count(); ++line) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%4d | ", line);
    prompt += buf;
    prompt += p.source_lines[static_cast<size_t>(line - 1)];
    prompt += '\n';
  }
  prompt += "\nTest Case Input:\n";
  prompt += input.canonical_text;
  prompt += '\n';
  prompt +=
      "\nRespond with the complete program listing, one output line per "
      "source line, where each line starts with exactly two characters: '>' "
      "and a space if the line would execute, '!' and a space if the line is "
      "executable but would not execute, or two spaces if the line is not "
      "executable. After that prefix, repeat the line's original text. Output "
      "exactly " +
      std::to_string(p.line_count()) +
      " lines and nothing else. If running this input would raise a runtime "
      "error, append one final line: ERROR: <kind> line <number>.\n";
  return prompt;
}

Prediction parse_prediction_response(std::string_view response, const Program& p) {
  // Peel code fences if the provider wrapped the listing.
  std::string text(response);
  {
    std::string cleaned;
    size_t start = 0;
    while (start <= text.size()) {
      size_t nl = text.find('\n', start);
      std::string line = nl == std::string::npos ? text.substr(start)
                                                 : text.substr(start, nl - start);
      if (line.rfind("```", 0) != 0) {
        cleaned += line;
        cleaned += '\n';
      }
      if (nl == std::string::npos) break;
      start = nl + 1;
    }
    while (!cleaned.empty() && cleaned.back() == '\n') cleaned.pop_back();
    text = cleaned;
  }

  Prediction prediction;
  prediction.provider_tag = Prediction::Provider::llm;

  // Optional trailing "ERROR: <kind> line <n>".
  size_t last_nl = text.find_last_of('\n');
  std::string last_line = last_nl == std::string::npos ? text : text.substr(last_nl + 1);
  if (last_line.rfind("ERROR:", 0) == 0) {
    std::string rest = last_line.substr(6);
    size_t kind_begin = rest.find_first_not_of(' ');
    size_t kind_end = rest.find(' ', kind_begin);
    if (kind_begin == std::string::npos || kind_end == std::string::npos) {
      throw PredictionParseError("malformed ERROR line: '" + last_line + "'");
    }
    std::string kind_name = rest.substr(kind_begin, kind_end - kind_begin);
    auto kind = minilang::error_kind_from_name(kind_name);
    if (!kind) throw PredictionParseError("unknown error kind '" + kind_name + "'");
    size_t line_pos = rest.find("line", kind_end);
    if (line_pos == std::string::npos) {
      throw PredictionParseError("ERROR line misses a line number: '" + last_line + "'");
    }
    int line_no = 0;
    if (std::sscanf(rest.c_str() + line_pos, "line %d", &line_no) != 1 || line_no < 1) {
      throw PredictionParseError("ERROR line misses a line number: '" + last_line + "'");
    }
    prediction.predicted_error = minilang::RuntimeError{*kind, line_no};
    text = last_nl == std::string::npos ? std::string() : text.substr(0, last_nl);
  }

  prediction.coverage = parse_annotated(text, p);
  return prediction;
}

OraclePredictor::OraclePredictor(const minilang::MiniProgram& program, uint64_t step_limit,
                                 SimClock* clock, int64_t cost_ms)
    : program_(program), step_limit_(step_limit), clock_(clock), cost_ms_(cost_ms) {}

Prediction OraclePredictor::predict(const Program& p, const TestCase& input) {
  if (p.program_id != program_.view.program_id) {
    throw ProgramMismatch("oracle predictor bound to '" + program_.view.program_id +
                          "', asked about '" + p.program_id + "'");
  }
  if (clock_ != nullptr) clock_->advance_ms(cost_ms_);
  minilang::ExecutionOutcome outcome = minilang::execute(program_, input, step_limit_);
  Prediction prediction;
  prediction.coverage = outcome.covered;
  prediction.provider_tag = Prediction::Provider::oracle;
  if (outcome.status == minilang::ExecutionOutcome::Status::runtime_error) {
    prediction.predicted_error = outcome.error;
  }
  return prediction;
}

LlmPredictor::LlmPredictor(Transport& transport, std::string model, double temperature,
                           int retries)
    : transport_(transport), model_(std::move(model)), temperature_(temperature),
      retries_(retries) {}

Prediction LlmPredictor::predict(const Program& p, const TestCase& input) {
  ChatRequest chat;
  chat.model = model_;
  chat.user = build_predictor_prompt(p, input);
  chat.temperature = temperature_;

  std::string last_error;
  for (int attempt = 0; attempt < retries_; ++attempt) {
    std::string response = transport_.complete(chat);
    try {
      return parse_prediction_response(response, p);
    } catch (const PredictionParseError& e) {
      last_error = e.what();
    }
  }
  throw PredictionExhausted("no parseable coverage listing after " + std::to_string(retries_) +
                            " completions: " + last_error);
}

AccuracyReport prediction_accuracy(const Prediction& pred,
                                   const minilang::ExecutionOutcome& actual) {
  const CoverageMap& p = pred.coverage;
  const CoverageMap& a = actual.covered;
  if (p.program_id() != a.program_id() || p.denominator() != a.denominator()) {
    throw ProgramMismatch("accuracy: prediction for '" + p.program_id() +
                          "' against execution of '" + a.program_id() + "'");
  }
  int64_t overlap = static_cast<int64_t>(std::count_if(
      p.covered().begin(), p.covered().end(), [&](int line) { return a.contains(line); }));

  AccuracyReport report;
  report.precision = p.count() == 0 ? Rational(1)
                                    : Rational(overlap, static_cast<int64_t>(p.count()));
  report.recall = a.count() == 0 ? Rational(1)
                                 : Rational(overlap, static_cast<int64_t>(a.count()));
  report.exact_match = p.covered() == a.covered();
  return report;
}

}  // namespace seedsmith
