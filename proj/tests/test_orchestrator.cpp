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

#include <filesystem>

#include "core/errors.hpp"
#include "core/orchestrator.hpp"
#include "support/test_util.hpp"

using namespace seedsmith;

namespace {

Prediction prediction_for(const std::string& id, int den, std::set<int> covered,
                          std::optional<minilang::RuntimeError> error = std::nullopt) {
  Prediction pred;
  pred.coverage = CoverageMap(id, den, std::move(covered));
  pred.predicted_error = error;
  pred.provider_tag = Prediction::Provider::oracle;
  return pred;
}

CampaignConfig fig1_config() {
  CampaignConfig config;
  config.time_limit_s = 300;
  config.rng_seed = 42;
  config.arm = "seedsmith";
  return config;
}

CampaignResult run_fig1(const minilang::MiniProgram& program) {
  CampaignConfig config = fig1_config();
  SimClock clock;
  MockGenerator generator(config.rng_seed, minilang::derive_input_spec(program), &clock, 700);
  OraclePredictor predictor(program, config.step_limit, &clock, 300);
  return run_campaign(program.view, generator, predictor, config, clock, &program);
}

}  // namespace

TEST_CASE("admission rule in coverage mode is exactly strict extension") {
  CoverageMap cumulative("p", 12, {1, 2, 3, 4, 5, 6, 7, 8});
  std::set<minilang::RuntimeErrorKind> none;

  auto gain = admit_rule(prediction_for("p", 12, {8, 9}), cumulative, false, none, 0,
                         GenerationMode::coverage_seeking, 10);
  CHECK(gain.admitted);
  CHECK(gain.reason == AdmitDecision::Reason::coverage_gain);

  auto subset = admit_rule(prediction_for("p", 12, {1, 2}), cumulative, false, none, 0,
                           GenerationMode::coverage_seeking, 10);
  CHECK_FALSE(subset.admitted);
  CHECK(subset.reason == AdmitDecision::Reason::no_gain);

  auto duplicate = admit_rule(prediction_for("p", 12, {9, 10}), cumulative, true, none, 0,
                              GenerationMode::coverage_seeking, 10);
  CHECK_FALSE(duplicate.admitted);
  CHECK(duplicate.reason == AdmitDecision::Reason::duplicate);

  CHECK_THROWS_AS(admit_rule(prediction_for("other", 12, {1}), cumulative, false, none, 0,
                             GenerationMode::coverage_seeking, 10),
                  ProgramMismatch);
}

TEST_CASE("admission rule in error mode dedups kinds and honors the cap") {
  CoverageMap cumulative("p", 4, {1, 2, 3, 4});
  using Kind = minilang::RuntimeErrorKind;
  std::set<Kind> have = {Kind::arithmetic};

  auto no_error = admit_rule(prediction_for("p", 4, {1, 2}), cumulative, false, have, 1,
                             GenerationMode::error_seeking, 10);
  CHECK_FALSE(no_error.admitted);
  CHECK(no_error.reason == AdmitDecision::Reason::no_error);

  auto fresh_kind =
      admit_rule(prediction_for("p", 4, {1, 2}, minilang::RuntimeError{Kind::index_out_of_bounds, 3}),
                 cumulative, false, have, 1, GenerationMode::error_seeking, 10);
  CHECK(fresh_kind.admitted);
  CHECK(fresh_kind.reason == AdmitDecision::Reason::error_trigger);

  auto known_kind =
      admit_rule(prediction_for("p", 4, {1}, minilang::RuntimeError{Kind::arithmetic, 2}),
                 cumulative, false, have, 1, GenerationMode::error_seeking, 10);
  CHECK_FALSE(known_kind.admitted);
  CHECK(known_kind.reason == AdmitDecision::Reason::duplicate_error_kind);

  auto capped =
      admit_rule(prediction_for("p", 4, {1}, minilang::RuntimeError{Kind::number_format, 2}),
                 cumulative, false, have, 10, GenerationMode::error_seeking, 10);
  CHECK_FALSE(capped.admitted);
  CHECK(capped.reason == AdmitDecision::Reason::error_cap_reached);

  // Duplicates lose in error mode too, whatever their kind.
  auto dup = admit_rule(prediction_for("p", 4, {1}, minilang::RuntimeError{Kind::number_format, 2}),
                        cumulative, true, have, 1, GenerationMode::error_seeking, 10);
  CHECK_FALSE(dup.admitted);
  CHECK(dup.reason == AdmitDecision::Reason::duplicate);
}

TEST_CASE("update_cumulative is plain union") {
  CoverageMap cumulative("p", 8, {1, 3});
  CHECK(update_cumulative(cumulative, prediction_for("p", 8, {3, 5})).covered() ==
        std::set<int>{1, 3, 5});
  CHECK(update_cumulative(CoverageMap("p", 8, {}), prediction_for("p", 8, {2})).covered() ==
        std::set<int>{2});
}

TEST_CASE("corpus keeps cumulative equal to the union of its seeds") {
  Program p = testutil::synthetic_program("c", 6);
  Corpus corpus(p);
  auto seed = [&](std::set<int> covered, const std::string& text) {
    SeedRecord record{TestCase::from_text(text), prediction_for("c", 6, std::move(covered)),
                      SeedRecord::Reason::coverage_gain, 0, GenerationMode::coverage_seeking};
    corpus.admit_seed(record);
  };
  seed({1, 2}, "a");
  seed({2, 3}, "b");
  CHECK(corpus.cumulative().covered() == std::set<int>{1, 2, 3});
  CHECK(corpus.contains_duplicate(TestCase::from_text("a")));
  CHECK_FALSE(corpus.contains_duplicate(TestCase::from_text("z")));

  seed({4}, "a");  // byte-duplicate, different coverage
  CHECK(corpus.seeds().size() == 3);
  CHECK(corpus.remove_duplicates() == 1);
  CHECK(corpus.seeds().size() == 2);
  // Cumulative is rebuilt from the survivors.
  CHECK(corpus.cumulative().covered() == std::set<int>{1, 2, 3});
}

TEST_CASE("campaign on the analog fixture reaches full coverage then hunts errors") {
  auto program = testutil::load_fixture_program("fig1_analog.ml");
  CampaignResult result = run_fig1(program);

  CHECK(result.termination == "time_limit");
  CHECK(percent(result.corpus.cumulative()) == Rational(100));

  size_t error_seeds = 0;
  for (const auto& seed : result.corpus.seeds()) {
    if (seed.admission_reason == SeedRecord::Reason::error_trigger) ++error_seeds;
  }
  CHECK(error_seeds >= 1);
  CHECK(result.corpus.seeds().size() <= 8);

  const CampaignEvent* mode_switch = result.log.last_of("mode_switch");
  REQUIRE(mode_switch != nullptr);
  CHECK(mode_switch->fields["to"] == "error_seeking");
  CHECK(mode_switch->fields["coverage_percent"] == "100.00");

  // Cumulative coverage is monotone across the log.
  size_t previous = 0;
  for (const auto& event : result.log.events) {
    if (event.type != "admitted") continue;
    size_t lines = event.fields["cumulative_lines"].get<size_t>();
    CHECK(lines >= previous);
    previous = lines;
  }

  // No byte-duplicate seeds survive.
  std::set<std::string> texts;
  for (const auto& seed : result.corpus.seeds()) {
    CHECK(texts.insert(seed.test_case.canonical_text).second);
  }

  // Every coverage_gain admission strictly grew cumulative coverage:
  // replay the log and compare line counts before/after.
  previous = 0;
  for (const auto& event : result.log.events) {
    if (event.type != "admitted") continue;
    if (event.fields["reason"] == "coverage_gain") {
      CHECK(event.fields["cumulative_lines"].get<size_t>() > previous);
    }
    previous = event.fields["cumulative_lines"].get<size_t>();
  }

  // Log timestamps never go backwards, and error-seeking generations only
  // ever happen once cumulative coverage is complete (the default policy).
  const size_t denominator = program.view.executable.size();
  int64_t last_t = 0;
  size_t cumulative_lines = 0;
  for (const auto& event : result.log.events) {
    CHECK(event.t_ms >= last_t);
    last_t = event.t_ms;
    if (event.type == "admitted") {
      cumulative_lines = event.fields["cumulative_lines"].get<size_t>();
    }
    if (event.type == "generation" && event.fields["mode"] == "error_seeking") {
      CHECK(cumulative_lines == denominator);
    }
  }
}

TEST_CASE("campaigns are deterministic under the simulated clock") {
  auto program = testutil::load_fixture_program("fig1_analog.ml");
  CampaignResult first = run_fig1(program);
  CampaignResult second = run_fig1(program);

  CHECK(first.log.to_jsonl() == second.log.to_jsonl());
  CHECK(manifest_json(bundle_from_campaign(first, fig1_config())) ==
        manifest_json(bundle_from_campaign(second, fig1_config())));
}

TEST_CASE("the branchy fixture also saturates and switches modes") {
  auto program = testutil::load_fixture_program("branchy.ml");
  CampaignConfig config;
  config.time_limit_s = 300;
  config.rng_seed = 42;
  SimClock clock;
  MockGenerator generator(config.rng_seed, minilang::derive_input_spec(program), &clock, 700);
  OraclePredictor predictor(program, config.step_limit, &clock, 300);
  CampaignResult result = run_campaign(program.view, generator, predictor, config, clock, &program);

  CHECK(percent(result.corpus.cumulative()) == Rational(100));
  size_t error_seeds = 0;
  for (const auto& seed : result.corpus.seeds()) {
    if (seed.admission_reason == SeedRecord::Reason::error_trigger) ++error_seeds;
  }
  CHECK(error_seeds >= 1);
}

TEST_CASE("the forced tail switches to error mode below full coverage") {
  auto program = testutil::load_fixture_program("branchy.ml");

  // Alternates a benign input with a division-by-zero input; both cover the
  // same lines, so cumulative coverage never reaches 100%.
  struct TwoInputs : Generator {
    int calls = 0;
    TestCase generate(const GenerationRequest&) override {
      return TestCase::from_text(++calls % 2 ? "5 4" : "1 0");
    }
    std::string name() const override { return "two"; }
  } generator;

  CampaignConfig config;
  config.time_limit_s = 10;  // ten 1s iterations under the simulated clock
  config.force_error_tail = true;
  config.error_tail_fraction = 0.5;
  SimClock clock;
  OraclePredictor predictor(program, config.step_limit, &clock, 1000);
  CampaignResult result = run_campaign(program.view, generator, predictor, config, clock);

  CHECK(percent(result.corpus.cumulative()) < Rational(100));

  const CampaignEvent* mode_switch = result.log.last_of("mode_switch");
  REQUIRE(mode_switch != nullptr);
  CHECK(mode_switch->fields["to"] == "error_seeking");
  CHECK(mode_switch->fields["forced"] == true);
  CHECK(mode_switch->t_ms >= 5000);

  size_t error_seeds = 0;
  for (const auto& seed : result.corpus.seeds()) {
    if (seed.admission_reason == SeedRecord::Reason::error_trigger) ++error_seeds;
  }
  CHECK(error_seeds == 1);  // the arithmetic kind, admitted once in the tail
}

TEST_CASE("a tiny time limit yields a near-empty corpus and a clean exit") {
  auto program = testutil::load_fixture_program("branchy.ml");
  CampaignConfig config;
  config.time_limit_s = 0.01;
  SimClock clock;
  MockGenerator generator(1, minilang::derive_input_spec(program), &clock, 700);
  OraclePredictor predictor(program, config.step_limit, &clock, 300);
  CampaignResult result = run_campaign(program.view, generator, predictor, config, clock);

  CHECK(result.termination == "time_limit");
  CHECK(result.corpus.seeds().size() <= 1);
  CHECK(result.iterations <= 1);
}

TEST_CASE("iteration caps terminate deterministically") {
  auto program = testutil::load_fixture_program("branchy.ml");
  CampaignConfig config;
  config.max_iterations = 5;
  SimClock clock;
  MockGenerator generator(7, minilang::derive_input_spec(program), &clock, 700);
  OraclePredictor predictor(program, config.step_limit, &clock, 300);
  CampaignResult result = run_campaign(program.view, generator, predictor, config, clock);
  CHECK(result.termination == "iteration_limit");
  CHECK(result.iterations == 5);
}

TEST_CASE("provider failure aborts with a partial corpus") {
  auto program = testutil::load_fixture_program("branchy.ml");

  struct FlakyGenerator : Generator {
    minilang::InputSpec spec;
    MockGenerator inner{3, {}};
    int calls = 0;
    TestCase generate(const GenerationRequest& request) override {
      if (++calls > 2) throw ProviderUnavailable("socket closed");
      return inner.generate(request);
    }
    std::string name() const override { return "flaky"; }
  } generator;

  CampaignConfig config;
  SimClock clock;
  OraclePredictor predictor(program, config.step_limit, &clock, 300);
  CampaignResult result = run_campaign(program.view, generator, predictor, config, clock);

  CHECK(result.termination == "provider_unavailable");
  CHECK(result.provider_failed);
  CHECK(result.log.last_of("provider_unavailable") != nullptr);
}

TEST_CASE("degenerate programs are rejected up front") {
  Program p;
  p.program_id = "comments-only";
  p.source_lines = {"# nothing", "# here"};

  struct NeverGenerator : Generator {
    TestCase generate(const GenerationRequest&) override { throw Error("unreachable"); }
    std::string name() const override { return "never"; }
  } generator;
  struct NeverPredictor : Predictor {
    Prediction predict(const Program&, const TestCase&) override { throw Error("unreachable"); }
    std::string name() const override { return "never"; }
  } predictor;

  CampaignConfig config;
  RealClock clock;
  CHECK_THROWS_AS(run_campaign(p, generator, predictor, config, clock), DegenerateProgram);
}

TEST_CASE("export writes admission-ordered seed files plus a manifest") {
  Program p = testutil::synthetic_program("exp", 5);
  IcsBundle bundle;
  bundle.program_id = "exp";
  bundle.arm = "seedsmith";
  bundle.coverage_kind = "predicted";
  bundle.cumulative = CoverageMap("exp", 5, {1, 2, 3});
  bundle.seeds = {
      {TestCase::from_text("10 20"), "coverage_gain", CoverageMap("exp", 5, {1, 2}), std::nullopt, 1000},
      {TestCase::from_text("7"), "coverage_gain", CoverageMap("exp", 5, {1, 2, 3}), std::nullopt, 2000},
      {TestCase::from_text("x"), "error_trigger", CoverageMap("exp", 5, {1}),
       minilang::RuntimeError{minilang::RuntimeErrorKind::input_mismatch, 2}, 3000},
  };
  bundle.stats = {{"termination", "time_limit"}};

  auto dir = std::filesystem::temp_directory_path() / "seedsmith_export_test";
  std::filesystem::remove_all(dir);
  export_ics(bundle, dir);

  CHECK(testutil::read_file(dir / "id_000000") == "10\n20");
  CHECK(testutil::read_file(dir / "id_000001") == "7");
  CHECK(testutil::read_file(dir / "id_000002") == "x");

  auto manifest = nlohmann::json::parse(testutil::read_file(dir / "manifest.json"));
  CHECK(manifest["schema"] == "seedsmith-ics/1");
  CHECK(manifest["seeds"].size() == 3);
  CHECK(manifest["seeds"][0]["file"] == "id_000000");
  CHECK(manifest["seeds"][0]["subsumed"] == true);   // {1,2} is inside {1,2,3}
  CHECK(manifest["seeds"][1]["subsumed"] == false);  // line 3 is unique to it
  CHECK(manifest["seeds"][2]["error"]["kind"] == "input_mismatch");

  // Re-export is byte-identical.
  std::string before = testutil::read_file(dir / "manifest.json");
  export_ics(bundle, dir);
  CHECK(testutil::read_file(dir / "manifest.json") == before);

  // Empty corpus: manifest only.
  IcsBundle empty;
  empty.program_id = "exp";
  empty.arm = "seedsmith";
  empty.coverage_kind = "predicted";
  empty.cumulative = CoverageMap("exp", 5, {});
  empty.stats = {{"termination", "time_limit"}};
  auto empty_dir = std::filesystem::temp_directory_path() / "seedsmith_export_empty";
  std::filesystem::remove_all(empty_dir);
  export_ics(empty, empty_dir);
  CHECK(std::filesystem::exists(empty_dir / "manifest.json"));
  CHECK_FALSE(std::filesystem::exists(empty_dir / "id_000000"));

  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(empty_dir);
}

TEST_CASE("campaign logs survive a jsonl round trip") {
  CampaignLog log;
  log.append(0, "campaign_start", {{"program_id", "p"}});
  log.append(5, "admitted", {{"reason", "coverage_gain"}, {"cumulative_lines", 3}});
  log.append(9, "campaign_end", {{"termination", "time_limit"}});

  CampaignLog reloaded = CampaignLog::from_jsonl(log.to_jsonl());
  REQUIRE(reloaded.events.size() == 3);
  CHECK(reloaded.events[1].t_ms == 5);
  CHECK(reloaded.events[1].type == "admitted");
  CHECK(reloaded.events[1].fields["cumulative_lines"] == 3);
  CHECK(reloaded.to_jsonl() == log.to_jsonl());
  CHECK(reloaded.last_of("campaign_end")->t_ms == 9);
}
