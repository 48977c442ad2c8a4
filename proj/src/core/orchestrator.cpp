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

#include "core/orchestrator.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "core/errors.hpp"

namespace seedsmith {

using nlohmann::json;

const char* reason_name(SeedRecord::Reason reason) {
  return reason == SeedRecord::Reason::coverage_gain ? "coverage_gain" : "error_trigger";
}

const char* decision_reason_name(AdmitDecision::Reason reason) {
  switch (reason) {
    case AdmitDecision::Reason::coverage_gain: return "coverage_gain";
    case AdmitDecision::Reason::error_trigger: return "error_trigger";
    case AdmitDecision::Reason::duplicate: return "duplicate";
    case AdmitDecision::Reason::no_gain: return "no_gain";
    case AdmitDecision::Reason::no_error: return "no_error";
    case AdmitDecision::Reason::duplicate_error_kind: return "duplicate_error_kind";
    case AdmitDecision::Reason::error_cap_reached: return "error_cap_reached";
  }
  return "unknown";
}

Corpus::Corpus(const Program& program)
    : program_id_(program.program_id), cumulative_(CoverageMap::empty_for(program)) {
  if (program.executable.empty()) {
    throw DegenerateProgram("program '" + program.program_id + "' has no executable lines");
  }
}

Corpus::Corpus(std::string program_id, CoverageMap cumulative)
    : program_id_(std::move(program_id)), cumulative_(std::move(cumulative)) {}

bool Corpus::contains_duplicate(const TestCase& tc) const {
  for (const auto& seed : seeds_) {
    if (seed.test_case == tc) return true;
  }
  return false;
}

std::set<minilang::RuntimeErrorKind> Corpus::admitted_error_kinds() const {
  std::set<minilang::RuntimeErrorKind> kinds;
  for (const auto& seed : seeds_) {
    if (seed.admission_reason == SeedRecord::Reason::error_trigger && seed.predicted.predicted_error) {
      kinds.insert(seed.predicted.predicted_error->kind);
    }
  }
  return kinds;
}

size_t Corpus::error_trigger_count() const {
  size_t n = 0;
  for (const auto& seed : seeds_) {
    if (seed.admission_reason == SeedRecord::Reason::error_trigger) ++n;
  }
  return n;
}

void Corpus::admit_seed(SeedRecord record) {
  cumulative_ = union_of(cumulative_, record.predicted.coverage);
  seeds_.push_back(std::move(record));
}

size_t Corpus::remove_duplicates() {
  std::unordered_set<std::string> seen;
  std::vector<SeedRecord> kept;
  kept.reserve(seeds_.size());
  for (auto& seed : seeds_) {
    if (seen.insert(seed.test_case.canonical_text).second) {
      kept.push_back(std::move(seed));
    }
  }
  size_t removed = seeds_.size() - kept.size();
  seeds_ = std::move(kept);
  CoverageMap rebuilt(cumulative_.program_id(), cumulative_.denominator());
  for (const auto& seed : seeds_) rebuilt = union_of(rebuilt, seed.predicted.coverage);
  cumulative_ = std::move(rebuilt);
  return removed;
}

AdmitDecision admit_rule(const Prediction& pred, const CoverageMap& cumulative,
                         bool is_duplicate, const std::set<minilang::RuntimeErrorKind>& have,
                         size_t error_trigger_count, GenerationMode mode, size_t error_cap) {
  if (pred.coverage.program_id() != cumulative.program_id() ||
      pred.coverage.denominator() != cumulative.denominator()) {
    throw ProgramMismatch("admit: prediction for '" + pred.coverage.program_id() +
                          "' against corpus of '" + cumulative.program_id() + "'");
  }
  if (is_duplicate) return {false, AdmitDecision::Reason::duplicate};

  if (mode == GenerationMode::coverage_seeking) {
    if (strictly_extends(pred.coverage, cumulative)) {
      return {true, AdmitDecision::Reason::coverage_gain};
    }
    return {false, AdmitDecision::Reason::no_gain};
  }

  if (!pred.predicted_error.has_value()) return {false, AdmitDecision::Reason::no_error};
  if (error_trigger_count >= error_cap) return {false, AdmitDecision::Reason::error_cap_reached};
  if (have.count(pred.predicted_error->kind) > 0) {
    return {false, AdmitDecision::Reason::duplicate_error_kind};
  }
  return {true, AdmitDecision::Reason::error_trigger};
}

AdmitDecision admit(const Prediction& pred, const Corpus& corpus, GenerationMode mode,
                    const TestCase& tc, size_t error_cap) {
  return admit_rule(pred, corpus.cumulative(), corpus.contains_duplicate(tc),
                    corpus.admitted_error_kinds(), corpus.error_trigger_count(), mode, error_cap);
}

CoverageMap update_cumulative(const CoverageMap& cumulative, const Prediction& pred) {
  return union_of(cumulative, pred.coverage);
}

json CampaignConfig::to_json() const {
  return json{{"time_limit_s", time_limit_s},
              {"error_mode_seed_cap", error_mode_seed_cap},
              {"generation_retries", generation_retries},
              {"prediction_retries", prediction_retries},
              {"rng_seed", rng_seed},
              {"max_iterations", max_iterations},
              {"step_limit", step_limit},
              {"force_error_tail", force_error_tail},
              {"error_tail_fraction", error_tail_fraction},
              {"generation_provider", generation_provider},
              {"prediction_provider", prediction_provider},
              {"arm", arm}};
}

void CampaignLog::append(int64_t t_ms, std::string type, json fields) {
  events.push_back({t_ms, std::move(type), std::move(fields)});
}

std::string CampaignLog::to_jsonl() const {
  std::string out;
  for (const auto& event : events) {
    json record = event.fields;
    record["t_ms"] = event.t_ms;
    record["type"] = event.type;
    out += record.dump();
    out += '\n';
  }
  return out;
}

CampaignLog CampaignLog::from_jsonl(const std::string& text) {
  CampaignLog log;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json record = json::parse(line, nullptr, false);
    if (record.is_discarded()) throw IoError("campaign log: malformed JSON line");
    CampaignEvent event;
    event.t_ms = record.value("t_ms", int64_t{0});
    event.type = record.value("type", "");
    record.erase("t_ms");
    record.erase("type");
    event.fields = std::move(record);
    log.events.push_back(std::move(event));
  }
  return log;
}

const CampaignEvent* CampaignLog::last_of(const std::string& type) const {
  for (auto it = events.rbegin(); it != events.rend(); ++it) {
    if (it->type == type) return &*it;
  }
  return nullptr;
}

namespace {

json error_to_json(const std::optional<minilang::RuntimeError>& error) {
  if (!error) return nullptr;
  return json{{"kind", minilang::error_kind_name(error->kind)}, {"line", error->line}};
}

}  // namespace

CampaignResult run_campaign(const Program& program, Generator& generator, Predictor& predictor,
                            const CampaignConfig& config, Clock& clock,
                            const minilang::MiniProgram* ground_truth) {
  program.validate();
  if (program.executable.empty()) {
    throw DegenerateProgram("program '" + program.program_id + "' has no executable lines");
  }
  if (config.time_limit_s <= 0) throw Error("campaign time limit must be positive");

  CampaignResult result{Corpus(program), CampaignLog{}, "time_limit"};
  const int64_t start_ms = clock.now_ms();
  const int64_t limit_ms = static_cast<int64_t>(config.time_limit_s * 1000.0);
  const int64_t tail_start_ms =
      static_cast<int64_t>((1.0 - config.error_tail_fraction) * static_cast<double>(limit_ms));
  const size_t denominator = program.executable.size();

  std::string format_spec;
  if (ground_truth != nullptr) {
    format_spec = minilang::describe_input_format(minilang::derive_input_spec(*ground_truth));
  }

  auto elapsed = [&]() { return clock.now_ms() - start_ms; };
  auto log = [&](std::string type, json fields) {
    result.log.append(elapsed(), std::move(type), std::move(fields));
  };

  log("campaign_start", {{"program_id", program.program_id},
                         {"arm", config.arm},
                         {"executable_lines", denominator},
                         {"config", config.to_json()}});

  std::vector<std::string> rejected_history;
  GenerationMode previous_mode = GenerationMode::coverage_seeking;

  for (;;) {
    if (config.max_iterations != 0 && result.iterations >= config.max_iterations) {
      result.termination = "iteration_limit";
      break;
    }
    if (elapsed() >= limit_ms) {
      result.termination = "time_limit";
      break;
    }

    const bool coverage_full = result.corpus.cumulative().count() == denominator;
    GenerationMode mode =
        coverage_full ? GenerationMode::error_seeking : GenerationMode::coverage_seeking;
    bool forced = false;
    if (!coverage_full && config.force_error_tail && elapsed() >= tail_start_ms) {
      mode = GenerationMode::error_seeking;
      forced = true;
    }
    if (mode != previous_mode) {
      log("mode_switch", {{"from", mode_name(previous_mode)},
                          {"to", mode_name(mode)},
                          {"coverage_percent", percent_text(result.corpus.cumulative())},
                          {"forced", forced}});
      previous_mode = mode;
    }

    GenerationRequest request;
    request.program = &program;
    request.mode = mode;
    if (mode == GenerationMode::coverage_seeking) {
      request.annotated = render_annotated(program, result.corpus.cumulative());
    }
    request.format_spec = format_spec;
    request.rejected_history = rejected_history;

    ++result.iterations;

    TestCase candidate;
    try {
      candidate = generator.generate(request);
    } catch (const GenerationExhausted& e) {
      log("generation_failed", {{"error", e.what()}, {"mode", mode_name(mode)}});
      continue;
    } catch (const ProviderUnavailable& e) {
      log("provider_unavailable", {{"stage", "generation"}, {"error", e.what()}});
      result.termination = "provider_unavailable";
      result.provider_failed = true;
      break;
    } catch (const CassetteDrift& e) {
      log("cassette_drift", {{"stage", "generation"}, {"error", e.what()}});
      result.termination = "cassette_drift";
      result.provider_failed = true;
      break;
    }
    log("generation",
        {{"mode", mode_name(mode)}, {"canonical", candidate.canonical_text}});

    Prediction prediction;
    try {
      prediction = predictor.predict(program, candidate);
    } catch (const PredictionExhausted& e) {
      log("prediction_failed", {{"error", e.what()}, {"canonical", candidate.canonical_text}});
      rejected_history.push_back(candidate.canonical_text);
      if (rejected_history.size() > 5) rejected_history.erase(rejected_history.begin());
      continue;
    } catch (const ProviderUnavailable& e) {
      log("provider_unavailable", {{"stage", "prediction"}, {"error", e.what()}});
      result.termination = "provider_unavailable";
      result.provider_failed = true;
      break;
    } catch (const CassetteDrift& e) {
      log("cassette_drift", {{"stage", "prediction"}, {"error", e.what()}});
      result.termination = "cassette_drift";
      result.provider_failed = true;
      break;
    }
    log("prediction", {{"provider", provider_tag_name(prediction.provider_tag)},
                       {"covered_lines", prediction.coverage.count()},
                       {"predicted_error", error_to_json(prediction.predicted_error)}});

    AdmitDecision decision =
        admit(prediction, result.corpus, mode, candidate, config.error_mode_seed_cap);
    if (decision.admitted) {
      SeedRecord record{candidate, prediction,
                        decision.reason == AdmitDecision::Reason::coverage_gain
                            ? SeedRecord::Reason::coverage_gain
                            : SeedRecord::Reason::error_trigger,
                        elapsed(), mode};
      result.corpus.admit_seed(std::move(record));
      log("admitted", {{"reason", decision_reason_name(decision.reason)},
                       {"seed_index", result.corpus.seeds().size() - 1},
                       {"canonical", candidate.canonical_text},
                       {"cumulative_lines", result.corpus.cumulative().count()},
                       {"coverage_percent", percent_text(result.corpus.cumulative())}});
    } else {
      rejected_history.push_back(candidate.canonical_text);
      if (rejected_history.size() > 5) rejected_history.erase(rejected_history.begin());
      log("rejected", {{"reason", decision_reason_name(decision.reason)},
                       {"canonical", candidate.canonical_text}});
    }
  }

  result.duplicates_removed = result.corpus.remove_duplicates();
  result.elapsed_ms = elapsed();

  json end_fields = {{"termination", result.termination},
                     {"iterations", result.iterations},
                     {"seeds", result.corpus.seeds().size()},
                     {"cumulative_lines", result.corpus.cumulative().count()},
                     {"coverage_percent", percent_text(result.corpus.cumulative())},
                     {"elapsed_ms", result.elapsed_ms},
                     {"duplicates_removed", result.duplicates_removed},
                     {"arm", config.arm},
                     {"program_id", program.program_id}};

  if (ground_truth != nullptr) {
    std::set<std::pair<int, int>> unique;  // (kind, line)
    size_t erroring_seeds = 0;
    for (const auto& seed : result.corpus.seeds()) {
      auto outcome = minilang::execute(*ground_truth, seed.test_case, config.step_limit);
      if (outcome.status == minilang::ExecutionOutcome::Status::runtime_error) {
        ++erroring_seeds;
        unique.insert({static_cast<int>(outcome.error->kind), outcome.error->line});
      }
    }
    log("measurement",
        {{"unique_errors", unique.size()}, {"erroring_seeds", erroring_seeds}});
    end_fields["unique_errors"] = unique.size();
  }

  log("campaign_end", end_fields);
  return result;
}

// ---------------------------------------------------------------------------
// Export

IcsBundle bundle_from_campaign(const CampaignResult& result, const CampaignConfig& config) {
  IcsBundle bundle;
  bundle.program_id = result.corpus.program_id();
  bundle.arm = config.arm;
  bundle.coverage_kind = "predicted";
  bundle.cumulative = result.corpus.cumulative();
  for (const auto& seed : result.corpus.seeds()) {
    bundle.seeds.push_back({seed.test_case, reason_name(seed.admission_reason),
                            seed.predicted.coverage, seed.predicted.predicted_error,
                            seed.admitted_at_ms});
  }
  bundle.stats = {{"termination", result.termination},
                  {"iterations", result.iterations},
                  {"elapsed_ms", result.elapsed_ms},
                  {"duplicates_removed", result.duplicates_removed}};
  if (const CampaignEvent* end = result.log.last_of("campaign_end")) {
    if (end->fields.contains("unique_errors")) {
      bundle.stats["unique_errors"] = end->fields["unique_errors"];
    }
  }
  return bundle;
}

json manifest_json(const IcsBundle& bundle) {
  // A seed is flagged subsumed when the union of all *other* seeds already
  // covers everything it covers; those are candidates for a post-pass prune.
  std::vector<bool> subsumed(bundle.seeds.size(), false);
  for (size_t i = 0; i < bundle.seeds.size(); ++i) {
    CoverageMap others(bundle.cumulative.program_id(), bundle.cumulative.denominator());
    for (size_t j = 0; j < bundle.seeds.size(); ++j) {
      if (j != i) others = union_of(others, bundle.seeds[j].coverage);
    }
    subsumed[i] = !strictly_extends(bundle.seeds[i].coverage, others);
  }

  json seeds = json::array();
  for (size_t i = 0; i < bundle.seeds.size(); ++i) {
    const ExportSeed& seed = bundle.seeds[i];
    char name[16];
    std::snprintf(name, sizeof name, "id_%06zu", i);
    seeds.push_back({{"file", name},
                     {"reason", seed.reason},
                     {"size_bytes", seed.test_case.size_bytes()},
                     {"admitted_at_ms", seed.admitted_at_ms},
                     {"coverage", seed.coverage.covered()},
                     {"error", error_to_json(seed.error)},
                     {"subsumed", static_cast<bool>(subsumed[i])}});
  }

  return json{{"schema", "seedsmith-ics/1"},
              {"program_id", bundle.program_id},
              {"arm", bundle.arm},
              {"coverage_kind", bundle.coverage_kind},
              {"seeds", seeds},
              {"cumulative_coverage", bundle.cumulative.covered()},
              {"coverage_percent", percent_text(bundle.cumulative)},
              {"stats", bundle.stats}};
}

void export_ics(const IcsBundle& bundle, const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoError("cannot create " + directory.string() + ": " + ec.message());

  for (size_t i = 0; i < bundle.seeds.size(); ++i) {
    char name[16];
    std::snprintf(name, sizeof name, "id_%06zu", i);
    std::ofstream out(directory / name, std::ios::binary);
    if (!out) throw IoError("cannot write seed file " + (directory / name).string());
    out << bundle.seeds[i].test_case.canonical_text;
  }

  std::ofstream manifest(directory / "manifest.json", std::ios::binary);
  if (!manifest) throw IoError("cannot write " + (directory / "manifest.json").string());
  manifest << manifest_json(bundle).dump(2) << '\n';
}

}  // namespace seedsmith
