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
// The campaign loop: generate a candidate, predict its coverage, admit it
// when it strictly extends cumulative coverage (or, once coverage is
// complete, when it is predicted to trigger a new kind of runtime error),
// until the time budget runs out. Ends with duplicate removal and an
// AFL-style seed-directory export.

#ifndef SEEDSMITH_CORE_ORCHESTRATOR_HPP
#define SEEDSMITH_CORE_ORCHESTRATOR_HPP

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/clock.hpp"
#include "core/coverage.hpp"
#include "core/genagent.hpp"
#include "core/minilang.hpp"
#include "core/predictor.hpp"
#include "core/testcase.hpp"

namespace seedsmith {

struct SeedRecord {
  enum class Reason { coverage_gain, error_trigger };

  TestCase test_case;
  Prediction predicted;
  Reason admission_reason;
  int64_t admitted_at_ms;
  GenerationMode mode_at_creation;

  double admitted_at_s() const { return static_cast<double>(admitted_at_ms) / 1000.0; }
};

const char* reason_name(SeedRecord::Reason reason);

/// The corpus under construction. Cumulative coverage is maintained as the
/// union of every admitted seed's predicted coverage.
class Corpus {
 public:
  explicit Corpus(const Program& program);
  Corpus(std::string program_id, CoverageMap cumulative);  // for admission tests

  const std::string& program_id() const { return program_id_; }
  const std::vector<SeedRecord>& seeds() const { return seeds_; }
  const CoverageMap& cumulative() const { return cumulative_; }

  bool contains_duplicate(const TestCase& tc) const;
  std::set<minilang::RuntimeErrorKind> admitted_error_kinds() const;
  size_t error_trigger_count() const;

  /// Appends the seed and unions its predicted coverage into cumulative.
  void admit_seed(SeedRecord record);

  /// Final pass: drops byte-identical duplicates (keeping the earliest) and
  /// recomputes cumulative. Returns how many seeds were dropped.
  size_t remove_duplicates();

 private:
  std::string program_id_;
  std::vector<SeedRecord> seeds_;
  CoverageMap cumulative_;
};

struct AdmitDecision {
  enum class Reason {
    coverage_gain,
    error_trigger,
    duplicate,
    no_gain,
    no_error,
    duplicate_error_kind,
    error_cap_reached,
  };
  bool admitted;
  Reason reason;
};

const char* decision_reason_name(AdmitDecision::Reason reason);

/// The admission rule, factored free of Corpus so it can be property-tested
/// against raw coverage maps. Duplicates are rejected in every mode; coverage
/// mode admits exactly the strict extensions; error mode admits predictions
/// carrying a not-yet-represented error kind, up to `error_cap`.
AdmitDecision admit_rule(const Prediction& pred, const CoverageMap& cumulative,
                         bool is_duplicate, const std::set<minilang::RuntimeErrorKind>& have,
                         size_t error_trigger_count, GenerationMode mode, size_t error_cap);

AdmitDecision admit(const Prediction& pred, const Corpus& corpus, GenerationMode mode,
                    const TestCase& tc, size_t error_cap);

/// Listing-style cumulative update (set union); exposed for tests.
CoverageMap update_cumulative(const CoverageMap& cumulative, const Prediction& pred);

struct CampaignConfig {
  double time_limit_s = 300.0;  // five-minute default budget
  size_t error_mode_seed_cap = 10;
  int generation_retries = 3;
  int prediction_retries = 3;
  uint64_t rng_seed = 0;
  uint64_t max_iterations = 0;  // 0 = bounded by time only
  uint64_t step_limit = minilang::kDefaultStepLimit;

  // Optional forced tail: during the final fraction of the budget the mode
  // switches to error_seeking even below 100% coverage. Off by default.
  bool force_error_tail = false;
  double error_tail_fraction = 0.2;

  // Echoed into the log for provenance; providers are constructed upstream.
  std::string generation_provider = "mock";
  std::string prediction_provider = "oracle";
  std::string arm = "seedsmith";

  nlohmann::json to_json() const;
};

struct CampaignEvent {
  int64_t t_ms;
  std::string type;
  nlohmann::json fields;
};

struct CampaignLog {
  std::vector<CampaignEvent> events;

  void append(int64_t t_ms, std::string type, nlohmann::json fields);
  std::string to_jsonl() const;
  static CampaignLog from_jsonl(const std::string& text);
  const CampaignEvent* last_of(const std::string& type) const;
};

struct CampaignResult {
  Corpus corpus;
  CampaignLog log;
  std::string termination;  // time_limit | iteration_limit | provider_unavailable
  int64_t elapsed_ms = 0;
  uint64_t iterations = 0;
  size_t duplicates_removed = 0;
  bool provider_failed = false;
};

/// Runs the whole workflow. `ground_truth`, when given, is used only for the
/// post-run measurement summary (executing the final seeds to count unique
/// triggered errors); the loop itself never executes the program.
CampaignResult run_campaign(const Program& program, Generator& generator, Predictor& predictor,
                            const CampaignConfig& config, Clock& clock,
                            const minilang::MiniProgram* ground_truth = nullptr);

// ---------------------------------------------------------------------------
// ICS export (shared with the baseline arms)

struct ExportSeed {
  TestCase test_case;
  std::string reason;
  CoverageMap coverage;
  std::optional<minilang::RuntimeError> error;
  int64_t admitted_at_ms = 0;
};

struct IcsBundle {
  std::string program_id;
  std::string arm;
  std::string coverage_kind;  // "predicted" or "actual"
  std::vector<ExportSeed> seeds;
  CoverageMap cumulative;
  nlohmann::json stats;
};

IcsBundle bundle_from_campaign(const CampaignResult& result, const CampaignConfig& config);

/// Writes id_000000, id_000001, ... (canonical bytes, admission order) plus
/// manifest.json. Deterministic: re-exporting the same bundle is
/// byte-identical. Throws IoError on an unwritable directory.
void export_ics(const IcsBundle& bundle, const std::filesystem::path& directory);

nlohmann::json manifest_json(const IcsBundle& bundle);

}  // namespace seedsmith

#endif  // SEEDSMITH_CORE_ORCHESTRATOR_HPP
