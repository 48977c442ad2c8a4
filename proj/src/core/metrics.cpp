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

#include "core/metrics.hpp"

#include <map>
#include <set>

#include "core/errors.hpp"

namespace seedsmith {

using nlohmann::json;

MetricValue eps(int64_t errors, int64_t seeds) {
  if (seeds < 0) throw Error("eps: negative seed count");
  if (seeds == 0) return {Rational(0), true};
  return {Rational(errors, seeds), false};
}

MetricValue epc(int64_t errors, const Rational& coverage_percent) {
  if (coverage_percent.negative()) throw Error("epc: negative coverage");
  if (coverage_percent.is_zero()) return {Rational(0), true};
  return {Rational(errors) / coverage_percent, false};
}

MetricValue ept(int64_t errors, const Rational& seconds) {
  if (seconds.is_zero() || seconds.negative()) {
    throw DegenerateInterval("ept over a non-positive interval");
  }
  return {Rational(errors) / seconds, false};
}

size_t unique_errors(const std::vector<minilang::ExecutionOutcome>& outcomes) {
  std::set<std::pair<int, int>> unique;
  for (const auto& outcome : outcomes) {
    if (outcome.status == minilang::ExecutionOutcome::Status::runtime_error && outcome.error) {
      unique.insert({static_cast<int>(outcome.error->kind), outcome.error->line});
    }
  }
  return unique.size();
}

std::string render_cell(int64_t errors, const Rational& denominator, const MetricValue& value) {
  return std::to_string(errors) + "/" + denominator.to_plain_string() + " = " +
         render_rounded(value.value);
}

namespace {

json rational_json(const Rational& r) {
  return json{{"num", r.num()}, {"den", r.den()}, {"text", r.to_plain_string()}};
}

json metric_json(const MetricValue& m) {
  return json{{"num", m.value.num()},
              {"den", m.value.den()},
              {"text", render_rounded(m.value)},
              {"degenerate", m.degenerate}};
}

MetricValue ept_or_degenerate(int64_t errors, const Rational& seconds) {
  if (seconds.is_zero() || seconds.negative()) return {Rational(0), true};
  return ept(errors, seconds);
}

struct RowMetrics {
  MetricValue eps_v, epc_v, ept_v;
};

RowMetrics row_metrics(const ArmResult& row) {
  return {eps(row.unique_errors, row.seeds), epc(row.unique_errors, row.coverage_percent),
          ept_or_degenerate(row.unique_errors, row.elapsed_seconds)};
}

}  // namespace

json emit_report_json(const std::vector<ArmResult>& results) {
  if (results.empty()) throw Error("report needs at least one arm result");
  json arms = json::array();
  for (const auto& row : results) {
    RowMetrics m = row_metrics(row);
    arms.push_back({{"arm", row.arm},
                    {"program_id", row.program_id},
                    {"seeds", row.seeds},
                    {"unique_errors", row.unique_errors},
                    {"coverage_percent", rational_json(row.coverage_percent)},
                    {"elapsed_seconds", rational_json(row.elapsed_seconds)},
                    {"eps", metric_json(m.eps_v)},
                    {"epc", metric_json(m.epc_v)},
                    {"ept", metric_json(m.ept_v)}});
  }
  return json{{"schema", "seedsmith-report/1"}, {"arms", arms}};
}

std::string markdown_from_json(const json& report) {
  if (!report.contains("arms") || report["arms"].empty()) {
    throw Error("report document carries no arms");
  }

  std::vector<ArmResult> rows;
  for (const auto& arm : report["arms"]) {
    ArmResult row;
    row.arm = arm.value("arm", "");
    row.program_id = arm.value("program_id", "");
    row.seeds = arm.value("seeds", int64_t{0});
    row.unique_errors = arm.value("unique_errors", int64_t{0});
    row.coverage_percent = Rational(arm["coverage_percent"]["num"].get<int64_t>(),
                                    arm["coverage_percent"]["den"].get<int64_t>());
    row.elapsed_seconds = Rational(arm["elapsed_seconds"]["num"].get<int64_t>(),
                                   arm["elapsed_seconds"]["den"].get<int64_t>());
    rows.push_back(std::move(row));
  }

  bool with_program = false;
  for (const auto& row : rows) {
    if (!row.program_id.empty()) with_program = true;
  }

  std::string out;
  out += "| Arm |";
  if (with_program) out += " Program |";
  out += " Errors per Seed (EPS) | Errors per Coverage (EPC) | Errors per Time (EPT) |\n";
  out += "| --- |";
  if (with_program) out += " --- |";
  out += " --- | --- | --- |\n";

  for (const auto& row : rows) {
    RowMetrics m = row_metrics(row);
    out += "| " + row.arm + " |";
    if (with_program) out += " " + row.program_id + " |";
    out += " " + render_cell(row.unique_errors, Rational(row.seeds), m.eps_v);
    out += " | " + render_cell(row.unique_errors, row.coverage_percent, m.epc_v);
    out += " | " + render_cell(row.unique_errors, row.elapsed_seconds, m.ept_v);
    out += " |\n";
  }

  // When an arm spans several programs, summarize it both ways: the mean of
  // the per-program ratios and the ratio of the summed numerators and
  // denominators. The two disagree in general, so both are labeled.
  std::map<std::string, std::vector<const ArmResult*>> by_arm;
  std::vector<std::string> arm_order;
  for (const auto& row : rows) {
    if (by_arm.find(row.arm) == by_arm.end()) arm_order.push_back(row.arm);
    by_arm[row.arm].push_back(&row);
  }
  bool any_multi = false;
  for (const auto& [arm, group] : by_arm) {
    if (group.size() > 1) any_multi = true;
  }
  if (any_multi) {
    out += "\nAggregates per arm (programs = n):\n\n";
    out += "| Arm | n | EPS mean-of-ratios | EPS ratio-of-means | EPC mean-of-ratios | "
           "EPC ratio-of-means | EPT mean-of-ratios | EPT ratio-of-means |\n";
    out += "| --- | --- | --- | --- | --- | --- | --- | --- |\n";
    for (const auto& arm : arm_order) {
      const auto& group = by_arm[arm];
      int64_t n = static_cast<int64_t>(group.size());
      Rational eps_mean(0), epc_mean(0), ept_mean(0);
      int64_t sum_errors = 0, sum_seeds = 0;
      Rational sum_cov(0), sum_sec(0);
      for (const ArmResult* row : group) {
        RowMetrics m = row_metrics(*row);
        eps_mean = eps_mean + m.eps_v.value;
        epc_mean = epc_mean + m.epc_v.value;
        ept_mean = ept_mean + m.ept_v.value;
        sum_errors += row->unique_errors;
        sum_seeds += row->seeds;
        sum_cov = sum_cov + row->coverage_percent;
        sum_sec = sum_sec + row->elapsed_seconds;
      }
      eps_mean = eps_mean / Rational(n);
      epc_mean = epc_mean / Rational(n);
      ept_mean = ept_mean / Rational(n);
      MetricValue eps_ratio = eps(sum_errors, sum_seeds);
      MetricValue epc_ratio = epc(sum_errors, sum_cov);
      MetricValue ept_ratio = ept_or_degenerate(sum_errors, sum_sec);
      out += "| " + arm + " | " + std::to_string(n) + " | " + render_rounded(eps_mean) + " | " +
             render_rounded(eps_ratio.value) + " | " + render_rounded(epc_mean) + " | " +
             render_rounded(epc_ratio.value) + " | " + render_rounded(ept_mean) + " | " +
             render_rounded(ept_ratio.value) + " |\n";
    }
  }
  return out;
}

std::string emit_report_markdown(const std::vector<ArmResult>& results) {
  return markdown_from_json(emit_report_json(results));
}

std::vector<ArmResult> arm_results_from_logs(const std::vector<std::string>& jsonl_texts) {
  std::vector<ArmResult> results;
  for (const auto& text : jsonl_texts) {
    CampaignLog log = CampaignLog::from_jsonl(text);
    for (const auto& event : log.events) {
      if (event.type != "campaign_end") continue;
      ArmResult row;
      row.arm = event.fields.value("arm", "");
      row.program_id = event.fields.value("program_id", "");
      row.seeds = event.fields.value("seeds", int64_t{0});
      row.unique_errors = event.fields.value("unique_errors", int64_t{0});
      row.coverage_percent = Rational::from_decimal(event.fields.value("coverage_percent", "0"));
      row.elapsed_seconds = Rational(event.fields.value("elapsed_ms", int64_t{0}), 1000);
      results.push_back(std::move(row));
    }
  }
  return results;
}

}  // namespace seedsmith
