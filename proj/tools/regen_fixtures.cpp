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
// Maintainer tool: regenerates the committed golden fixtures (prompt files,
// the reference report table, and the record/replay cassette with its
// recorded manifest). Outputs are deterministic; run it only when a prompt
// or format intentionally changes, and review the diff.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "core/genagent.hpp"
#include "core/metrics.hpp"
#include "core/minilang.hpp"
#include "core/orchestrator.hpp"
#include "core/predictor.hpp"
#include "core/transport.hpp"
#include "../tests/support/scripted_backend.hpp"
#include "../tests/support/test_util.hpp"

namespace fs = std::filesystem;
using namespace seedsmith;

namespace {

void write(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  std::cout << "wrote " << path.string() << " (" << content.size() << " bytes)\n";
}

void regen_prompts(const fs::path& dir) {
  auto program = testutil::load_fixture_program("branchy.ml");
  std::string format_spec =
      minilang::describe_input_format(minilang::derive_input_spec(program));

  GenerationRequest empty;
  empty.program = &program.view;
  empty.mode = GenerationMode::coverage_seeking;
  empty.annotated = render_annotated(program.view, CoverageMap::empty_for(program.view));
  empty.format_spec = format_spec;
  write(dir / "coverage_empty.txt", build_coverage_prompt(empty));

  GenerationRequest partial = empty;
  partial.annotated = render_annotated(
      program.view, CoverageMap::for_program(program.view, {2, 3, 4, 5, 13, 14, 18, 19}));
  partial.rejected_history = {"5\n4"};
  write(dir / "coverage_partial.txt", build_coverage_prompt(partial));

  GenerationRequest error_request;
  error_request.program = &program.view;
  error_request.mode = GenerationMode::error_seeking;
  error_request.format_spec = format_spec;
  write(dir / "error_prompt.txt", build_error_prompt(error_request));

  auto lookup = testutil::load_fixture_program("lookup.ml");
  write(dir / "predictor_prompt.txt", build_predictor_prompt(lookup.view, TestCase::from_text("2")));
}

void regen_reference_report(const fs::path& dir) {
  std::vector<ArmResult> rows = {
      {"Baseline 1", "", 5, 0, Rational::from_decimal("79.99"), Rational(300)},
      {"Baseline 2", "", 1, 0, Rational::from_decimal("78.06"), Rational(300)},
      {"Baseline 3", "", 19, 1, Rational::from_decimal("80.04"), Rational(293)},
      {"Seedsmith", "", 12, 2, Rational::from_decimal("78.08"), Rational(227)},
  };
  write(dir / "rq2_reference.md", emit_report_markdown(rows));
}

// Records a full campaign against the scripted provider and commits both the
// cassette and the manifest the recorded run produced. The replay acceptance
// check re-runs the campaign from the cassette and must get the identical
// corpus.
void regen_cassette(const fs::path& dir) {
  auto program = testutil::load_fixture_program("fig1_analog.ml");

  CampaignConfig config;
  config.time_limit_s = 120;  // enough iterations for full coverage plus error hunting
  config.rng_seed = 2026;
  config.arm = "seedsmith";
  config.generation_provider = "llm";
  config.prediction_provider = "llm";

  SimClock clock;
  TransportConfig tc;
  tc.mode = TransportMode::record;
  tc.endpoint = "http://recording.local/v1/chat/completions";
  tc.scripted_latency_ms = 400;
  tc.sim_clock = &clock;
  Transport transport(tc);
  transport.set_backend(testutil::ScriptedLlm(program, config.rng_seed));

  LlmGenerator generator(transport, "gpt-4", 0.7, config.generation_retries);
  LlmPredictor predictor(transport, "gpt-4", 0.0, config.prediction_retries);

  CampaignResult result =
      run_campaign(program.view, generator, predictor, config, clock, &program);

  Cassette cassette = redact(transport.cassette());
  cassette.header.recorded_at = "2026-08-08T00:00:00Z";
  write(dir / "campaign_fig1.jsonl", cassette.to_jsonl());

  IcsBundle bundle = bundle_from_campaign(result, config);
  write(dir / "campaign_fig1_manifest.json", manifest_json(bundle).dump(2) + "\n");
  write(dir / "campaign_fig1_log.jsonl", result.log.to_jsonl());

  std::cout << "recorded campaign: " << result.corpus.seeds().size() << " seeds, "
            << percent_text(result.corpus.cumulative()) << "% coverage, "
            << transport.cassette().entries.size() << " cassette entries\n";
}

}  // namespace

int main() {
  fs::path fixtures = SEEDSMITH_FIXTURES_DIR;
  try {
    regen_prompts(fixtures / "prompts");
    regen_reference_report(fixtures / "reports");
    regen_cassette(fixtures / "cassettes");
  } catch (const std::exception& e) {
    std::cerr << "regen failed: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
