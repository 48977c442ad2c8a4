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

#include "seedsmith.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "core/baselines.hpp"
#include "core/errors.hpp"
#include "core/genagent.hpp"
#include "core/metrics.hpp"
#include "core/minilang.hpp"
#include "core/orchestrator.hpp"
#include "core/predictor.hpp"
#include "core/transport.hpp"

using nlohmann::json;
using namespace seedsmith;

struct sw_program {
  minilang::MiniProgram program;
};

struct sw_result {
  IcsBundle bundle;
  CampaignLog log;
  json summary;
};

namespace {

void fill_errbuf(char* errbuf, size_t errbuf_len, const std::string& message) {
  if (errbuf == nullptr || errbuf_len == 0) return;
  size_t n = std::min(message.size(), errbuf_len - 1);
  std::memcpy(errbuf, message.data(), n);
  errbuf[n] = '\0';
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) return nullptr;
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

/// Runs `body`, translating exceptions into status codes.
template <typename Fn>
sw_status guarded(char* errbuf, size_t errbuf_len, Fn&& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    fill_errbuf(errbuf, errbuf_len, e.what());
    return SW_ERR_PARSE;
  } catch (const IoError& e) {
    fill_errbuf(errbuf, errbuf_len, e.what());
    return SW_ERR_IO;
  } catch (const ProviderUnavailable& e) {
    fill_errbuf(errbuf, errbuf_len, e.what());
    return SW_ERR_PROVIDER;
  } catch (const CassetteDrift& e) {
    fill_errbuf(errbuf, errbuf_len, e.what());
    return SW_ERR_PROVIDER;
  } catch (const DegenerateProgram& e) {
    fill_errbuf(errbuf, errbuf_len, e.what());
    return SW_ERR_USAGE;
  } catch (const Error& e) {
    fill_errbuf(errbuf, errbuf_len, e.what());
    return SW_ERR_USAGE;
  } catch (const std::exception& e) {
    fill_errbuf(errbuf, errbuf_len, e.what());
    return SW_ERR_INTERNAL;
  }
}

struct RunConfig {
  CampaignConfig campaign;
  std::string generation_provider = "mock";
  std::string prediction_provider = "oracle";
  std::string clock = "";  // "sim" | "real" | "" (auto)
  std::string cassette;
  std::string record_cassette;
  std::string model = "gpt-4";
  int64_t sim_gen_cost_ms = 700;
  int64_t sim_predict_cost_ms = 300;
  int64_t sim_exec_cost_ms = 50;
  bool measure = true;
};

RunConfig parse_run_config(const char* config_json) {
  RunConfig rc;
  if (const char* model = std::getenv("SEEDSMITH_MODEL")) rc.model = model;
  if (config_json == nullptr || *config_json == '\0') return rc;
  json cfg = json::parse(config_json, nullptr, false);
  if (cfg.is_discarded() || !cfg.is_object()) throw Error("config must be a JSON object");

  rc.campaign.time_limit_s = cfg.value("time_limit_s", rc.campaign.time_limit_s);
  rc.campaign.rng_seed = cfg.value("seed", rc.campaign.rng_seed);
  rc.campaign.error_mode_seed_cap = cfg.value("error_cap", rc.campaign.error_mode_seed_cap);
  rc.campaign.max_iterations = cfg.value("max_iterations", rc.campaign.max_iterations);
  rc.campaign.step_limit = cfg.value("step_limit", rc.campaign.step_limit);
  rc.campaign.force_error_tail = cfg.value("force_error_tail", rc.campaign.force_error_tail);
  rc.campaign.error_tail_fraction = cfg.value("tail_fraction", rc.campaign.error_tail_fraction);
  rc.campaign.arm = cfg.value("arm", rc.campaign.arm);
  rc.generation_provider = cfg.value("generation_provider", rc.generation_provider);
  rc.prediction_provider = cfg.value("prediction_provider", rc.prediction_provider);
  rc.clock = cfg.value("clock", rc.clock);
  rc.cassette = cfg.value("cassette", rc.cassette);
  rc.record_cassette = cfg.value("record_cassette", rc.record_cassette);
  rc.model = cfg.value("model", rc.model);
  rc.sim_gen_cost_ms = cfg.value("sim_gen_cost_ms", rc.sim_gen_cost_ms);
  rc.sim_predict_cost_ms = cfg.value("sim_predict_cost_ms", rc.sim_predict_cost_ms);
  rc.sim_exec_cost_ms = cfg.value("sim_exec_cost_ms", rc.sim_exec_cost_ms);
  rc.measure = cfg.value("measure", rc.measure);
  rc.campaign.generation_provider = rc.generation_provider;
  rc.campaign.prediction_provider = rc.prediction_provider;
  return rc;
}

bool wants_live(const RunConfig& rc) {
  return rc.generation_provider == "llm" || rc.prediction_provider == "llm";
}

json result_summary(const IcsBundle& bundle, const CampaignLog& log) {
  json summary = {{"arm", bundle.arm},
                  {"program_id", bundle.program_id},
                  {"seeds", bundle.seeds.size()},
                  {"coverage_percent", percent_text(bundle.cumulative)},
                  {"stats", bundle.stats}};
  if (const CampaignEvent* end = log.last_of("campaign_end")) {
    summary["campaign_end"] = end->fields;
  }
  return summary;
}

}  // namespace

extern "C" {

const char* sw_version(void) { return "0.1.0"; }

const char* sw_status_name(sw_status status) {
  switch (status) {
    case SW_OK: return "ok";
    case SW_ERR_USAGE: return "usage";
    case SW_ERR_PROVIDER: return "provider";
    case SW_ERR_INTERNAL: return "internal";
    case SW_ERR_PARSE: return "parse";
    case SW_ERR_IO: return "io";
  }
  return "unknown";
}

sw_status sw_program_parse(const char* source, const char* program_id, sw_program** out,
                           char* errbuf, size_t errbuf_len) {
  if (source == nullptr || out == nullptr) {
    fill_errbuf(errbuf, errbuf_len, "source and out must be non-null");
    return SW_ERR_USAGE;
  }
  *out = nullptr;
  return guarded(errbuf, errbuf_len, [&]() {
    auto handle = std::make_unique<sw_program>();
    handle->program = minilang::parse_program(
        source, program_id == nullptr ? "program" : program_id);
    *out = handle.release();
    return SW_OK;
  });
}

void sw_program_free(sw_program* program) { delete program; }

int sw_program_line_count(const sw_program* program) {
  return program == nullptr ? 0 : program->program.view.line_count();
}

int sw_program_executable_lines(const sw_program* program) {
  return program == nullptr ? 0 : static_cast<int>(program->program.view.executable.size());
}

sw_status sw_trace(const sw_program* program, const char* input_text, uint64_t step_limit,
                   char** out_text, char* errbuf, size_t errbuf_len) {
  if (program == nullptr || input_text == nullptr || out_text == nullptr) {
    fill_errbuf(errbuf, errbuf_len, "program, input_text and out_text must be non-null");
    return SW_ERR_USAGE;
  }
  *out_text = nullptr;
  return guarded(errbuf, errbuf_len, [&]() {
    TestCase tc = TestCase::from_text(input_text);
    auto outcome = minilang::execute(program->program, tc,
                                     step_limit == 0 ? minilang::kDefaultStepLimit : step_limit);
    std::string text = render_annotated(program->program.view, outcome.covered).to_text();
    text += "--\n";
    text += "status: ";
    text += minilang::status_name(outcome.status);
    if (outcome.error) {
      text += " kind=";
      text += minilang::error_kind_name(outcome.error->kind);
      text += " line=" + std::to_string(outcome.error->line);
    }
    text += "\ncoverage: " + std::to_string(outcome.covered.count()) + "/" +
            std::to_string(outcome.covered.denominator()) + " (" +
            percent_text(outcome.covered) + "%)";
    text += "\nsteps: " + std::to_string(outcome.steps);
    text += "\ntokens consumed: " + std::to_string(outcome.tokens_consumed);
    text += "\noutput:\n";
    text += outcome.output;
    *out_text = dup_string(text);
    return SW_OK;
  });
}

sw_status sw_campaign_run(const sw_program* program, const char* config_json, sw_result** out,
                          char* errbuf, size_t errbuf_len) {
  if (program == nullptr || out == nullptr) {
    fill_errbuf(errbuf, errbuf_len, "program and out must be non-null");
    return SW_ERR_USAGE;
  }
  *out = nullptr;
  return guarded(errbuf, errbuf_len, [&]() {
    RunConfig rc = parse_run_config(config_json);
    const minilang::MiniProgram& mini = program->program;

    bool use_sim = rc.clock.empty() ? !wants_live(rc) : rc.clock == "sim";
    SimClock sim_clock;
    RealClock real_clock;
    Clock& clock = use_sim ? static_cast<Clock&>(sim_clock) : static_cast<Clock&>(real_clock);
    SimClock* sim = use_sim ? &sim_clock : nullptr;

    // Generation and prediction share one transport (and one cassette):
    // within a campaign the calls interleave on a single logical thread.
    std::unique_ptr<Transport> transport;
    auto ensure_transport = [&]() -> Transport& {
      if (!transport) {
        TransportConfig tc;
        if (rc.generation_provider == "replay" || rc.prediction_provider == "replay") {
          tc = TransportConfig::from_env(TransportMode::replay);
          tc.cassette_path = rc.cassette;
          tc.simulate_latency = use_sim;
        } else {
          tc = TransportConfig::from_env(rc.record_cassette.empty() ? TransportMode::live
                                                                    : TransportMode::record);
          tc.cassette_path = rc.record_cassette;
          if (use_sim) tc.scripted_latency_ms = rc.sim_gen_cost_ms;
        }
        tc.sim_clock = sim;
        transport = std::make_unique<Transport>(std::move(tc));
      }
      return *transport;
    };

    std::unique_ptr<Generator> generator;
    if (rc.generation_provider == "mock") {
      generator = std::make_unique<MockGenerator>(rc.campaign.rng_seed,
                                                  minilang::derive_input_spec(mini), sim,
                                                  rc.sim_gen_cost_ms);
    } else if (rc.generation_provider == "llm" || rc.generation_provider == "replay") {
      generator = std::make_unique<LlmGenerator>(ensure_transport(), rc.model, 0.7,
                                                 rc.campaign.generation_retries);
    } else {
      throw Error("unknown generation provider '" + rc.generation_provider + "'");
    }

    std::unique_ptr<Predictor> predictor;
    if (rc.prediction_provider == "oracle") {
      predictor = std::make_unique<OraclePredictor>(mini, rc.campaign.step_limit, sim,
                                                    rc.sim_predict_cost_ms);
    } else if (rc.prediction_provider == "llm" || rc.prediction_provider == "replay") {
      predictor = std::make_unique<LlmPredictor>(ensure_transport(), rc.model, 0.0,
                                                 rc.campaign.prediction_retries);
    } else {
      throw Error("unknown prediction provider '" + rc.prediction_provider + "'");
    }

    CampaignResult campaign = run_campaign(mini.view, *generator, *predictor, rc.campaign, clock,
                                           rc.measure ? &mini : nullptr);

    if (transport && !rc.record_cassette.empty()) transport->save_cassette();

    auto handle = std::make_unique<sw_result>();
    handle->bundle = bundle_from_campaign(campaign, rc.campaign);
    handle->log = std::move(campaign.log);
    handle->summary = result_summary(handle->bundle, handle->log);
    handle->summary["provider_failed"] = campaign.provider_failed;
    bool failed = campaign.provider_failed;
    *out = handle.release();
    if (failed) {
      fill_errbuf(errbuf, errbuf_len, "provider gave up; partial corpus returned");
      return SW_ERR_PROVIDER;
    }
    return SW_OK;
  });
}

sw_status sw_baseline_run(const sw_program* program, const char* kind, const char* config_json,
                          sw_result** out, char* errbuf, size_t errbuf_len) {
  if (program == nullptr || kind == nullptr || out == nullptr) {
    fill_errbuf(errbuf, errbuf_len, "program, kind and out must be non-null");
    return SW_ERR_USAGE;
  }
  *out = nullptr;
  return guarded(errbuf, errbuf_len, [&]() {
    auto baseline_kind = baseline_from_name(kind);
    if (!baseline_kind) throw Error(std::string("unknown baseline '") + kind + "'");
    RunConfig rc = parse_run_config(config_json);
    rc.campaign.arm = baseline_name(*baseline_kind);

    bool use_sim = rc.clock.empty() ? true : rc.clock == "sim";
    SimClock sim_clock;
    RealClock real_clock;
    Clock& clock = use_sim ? static_cast<Clock&>(sim_clock) : static_cast<Clock&>(real_clock);

    BaselineParams params;
    params.exec_cost_ms = rc.sim_exec_cost_ms;

    BaselineResult baseline =
        run_baseline(*baseline_kind, program->program, rc.campaign, clock, params);

    auto handle = std::make_unique<sw_result>();
    handle->bundle = bundle_from_baseline(*baseline_kind, baseline, program->program);
    handle->log = std::move(baseline.log);
    handle->summary = result_summary(handle->bundle, handle->log);
    *out = handle.release();
    return SW_OK;
  });
}

void sw_result_free(sw_result* result) { delete result; }

sw_status sw_result_export(const sw_result* result, const char* directory, char* errbuf,
                           size_t errbuf_len) {
  if (result == nullptr || directory == nullptr) {
    fill_errbuf(errbuf, errbuf_len, "result and directory must be non-null");
    return SW_ERR_USAGE;
  }
  return guarded(errbuf, errbuf_len, [&]() {
    export_ics(result->bundle, directory);
    return SW_OK;
  });
}

sw_status sw_result_manifest(const sw_result* result, char** out_json) {
  if (result == nullptr || out_json == nullptr) return SW_ERR_USAGE;
  *out_json = dup_string(manifest_json(result->bundle).dump(2) + "\n");
  return SW_OK;
}

sw_status sw_result_log(const sw_result* result, char** out_jsonl) {
  if (result == nullptr || out_jsonl == nullptr) return SW_ERR_USAGE;
  *out_jsonl = dup_string(result->log.to_jsonl());
  return SW_OK;
}

sw_status sw_result_summary(const sw_result* result, char** out_json) {
  if (result == nullptr || out_json == nullptr) return SW_ERR_USAGE;
  *out_json = dup_string(result->summary.dump(2) + "\n");
  return SW_OK;
}

sw_status sw_minimize(const sw_program* program, const char* seed_dir, const char* out_dir,
                      const char* config_json, char** out_summary_json, char* errbuf,
                      size_t errbuf_len) {
  if (program == nullptr || seed_dir == nullptr || out_dir == nullptr) {
    fill_errbuf(errbuf, errbuf_len, "program, seed_dir and out_dir must be non-null");
    return SW_ERR_USAGE;
  }
  return guarded(errbuf, errbuf_len, [&]() {
    RunConfig rc = parse_run_config(config_json);

    std::vector<std::filesystem::path> files;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(seed_dir, ec)) {
      if (entry.is_regular_file() && entry.path().filename() != "manifest.json") {
        files.push_back(entry.path());
      }
    }
    if (ec) throw IoError("cannot read seed directory " + std::string(seed_dir));
    std::sort(files.begin(), files.end());

    std::vector<MeasuredSeed> pool;
    for (const auto& path : files) {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw IoError("cannot read seed " + path.string());
      std::ostringstream buf;
      buf << in.rdbuf();
      pool.push_back(measure_seed(program->program, TestCase::from_text(buf.str()),
                                  rc.campaign.step_limit));
      pool.back().origin = "imported";
    }

    std::vector<MeasuredSeed> minimized = cmin_greedy(pool);

    IcsBundle bundle;
    bundle.program_id = program->program.view.program_id;
    bundle.arm = "minimized";
    bundle.coverage_kind = "actual";
    bundle.cumulative = CoverageMap(program->program.view.program_id,
                                    static_cast<int>(program->program.view.executable.size()));
    for (const auto& seed : minimized) {
      bundle.cumulative = union_of(bundle.cumulative, seed.actual);
      bundle.seeds.push_back({seed.test_case, seed.origin, seed.actual, seed.error, 0});
    }

    CoverageMap input_union(bundle.cumulative.program_id(), bundle.cumulative.denominator());
    for (const auto& seed : pool) input_union = union_of(input_union, seed.actual);

    bundle.stats = {{"input_seeds", pool.size()},
                    {"output_seeds", minimized.size()},
                    {"input_coverage_percent",
                     pool.empty() ? "0.00" : percent_text(input_union)},
                    {"coverage_preserved", input_union.covered() == bundle.cumulative.covered()}};
    export_ics(bundle, out_dir);

    if (out_summary_json != nullptr) {
      json summary = bundle.stats;
      summary["program_id"] = bundle.program_id;
      summary["coverage_percent"] = percent_text(bundle.cumulative);
      *out_summary_json = dup_string(summary.dump(2) + "\n");
    }
    return SW_OK;
  });
}

sw_status sw_report(const char* const* log_paths, size_t count, const char* format,
                    char** out_document, char* errbuf, size_t errbuf_len) {
  if (log_paths == nullptr || count == 0 || out_document == nullptr) {
    fill_errbuf(errbuf, errbuf_len, "log_paths and out_document must be non-null, count > 0");
    return SW_ERR_USAGE;
  }
  *out_document = nullptr;
  return guarded(errbuf, errbuf_len, [&]() {
    std::vector<std::string> texts;
    for (size_t i = 0; i < count; ++i) {
      std::ifstream in(log_paths[i], std::ios::binary);
      if (!in) throw IoError(std::string("cannot read log ") + log_paths[i]);
      std::ostringstream buf;
      buf << in.rdbuf();
      texts.push_back(buf.str());
    }
    std::vector<ArmResult> results = arm_results_from_logs(texts);
    if (results.empty()) throw Error("no campaign_end events found in the given logs");

    std::string fmt = format == nullptr ? "markdown" : format;
    std::string document;
    if (fmt == "markdown") {
      document = emit_report_markdown(results);
    } else if (fmt == "json") {
      document = emit_report_json(results).dump(2) + "\n";
    } else {
      throw Error("unknown report format '" + fmt + "'");
    }
    *out_document = dup_string(document);
    return SW_OK;
  });
}

void sw_string_free(char* text) { std::free(text); }

}  // extern "C"
