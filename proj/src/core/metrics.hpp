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
// ICS efficiency metrics — errors per seed (EPS), per coverage percentage
// point (EPC), per second (EPT) — plus unique-error counting and the
// comparison report emitted after campaigns. All values are exact rationals;
// rendering rounds half-even at three decimals.

#ifndef SEEDSMITH_CORE_METRICS_HPP
#define SEEDSMITH_CORE_METRICS_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "core/minilang.hpp"
#include "core/orchestrator.hpp"
#include "core/rational.hpp"

namespace seedsmith {

struct MetricValue {
  Rational value;
  bool degenerate = false;  // a zero denominator was defined away as 0
};

/// errors / seeds; zero seeds yields 0 with the degenerate flag.
MetricValue eps(int64_t errors, int64_t seeds);

/// errors / coverage_percent; zero coverage yields 0 with the degenerate flag.
MetricValue epc(int64_t errors, const Rational& coverage_percent);

/// errors / seconds; throws DegenerateInterval when seconds <= 0.
MetricValue ept(int64_t errors, const Rational& seconds);

/// Distinct (error kind, line) pairs among runtime-error outcomes.
size_t unique_errors(const std::vector<minilang::ExecutionOutcome>& outcomes);

struct ArmResult {
  std::string arm;
  std::string program_id;
  int64_t seeds = 0;
  int64_t unique_errors = 0;
  Rational coverage_percent;
  Rational elapsed_seconds;
};

/// "2/12 = 0.167"-style cell: the exact fraction followed by the rounded
/// value.
std::string render_cell(int64_t errors, const Rational& denominator, const MetricValue& value);

std::string emit_report_markdown(const std::vector<ArmResult>& results);
nlohmann::json emit_report_json(const std::vector<ArmResult>& results);

/// Rebuilds the markdown table from the JSON document; emit_report_markdown
/// composed with emit_report_json is the identity on the rendering.
std::string markdown_from_json(const nlohmann::json& report);

/// Extracts one ArmResult per campaign_end event found in the given
/// line-delimited campaign logs.
std::vector<ArmResult> arm_results_from_logs(const std::vector<std::string>& jsonl_texts);

}  // namespace seedsmith

#endif  // SEEDSMITH_CORE_METRICS_HPP
