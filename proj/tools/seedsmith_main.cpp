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
// Command-line front end. Talks to the library exclusively through the
// public C API, so it doubles as a living example of embedding it.

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "seedsmith.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Exit codes: 0 ok, 1 usage/input error, 2 provider failure (partial output
// written), 3 internal invariant violation.
int exit_code_for(sw_status status) {
  switch (status) {
    case SW_OK: return 0;
    case SW_ERR_USAGE:
    case SW_ERR_PARSE:
    case SW_ERR_IO: return 1;
    case SW_ERR_PROVIDER: return 2;
    case SW_ERR_INTERNAL: return 3;
  }
  return 3;
}

struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { sw_string_free(ptr); }
  std::string str() const { return ptr == nullptr ? std::string() : std::string(ptr); }
};

struct ProgramHandle {
  sw_program* ptr = nullptr;
  ~ProgramHandle() { sw_program_free(ptr); }
};

struct ResultHandle {
  sw_result* ptr = nullptr;
  ~ResultHandle() { sw_result_free(ptr); }
};

bool read_file(const fs::path& path, std::string& out, std::string& error) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    error = "cannot read " + path.string();
    return false;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  out = buf.str();
  return true;
}

bool write_file(const fs::path& path, const std::string& content, std::string& error) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    error = "cannot write " + path.string();
    return false;
  }
  out << content;
  return true;
}

int parse_subject(const fs::path& path, ProgramHandle& handle) {
  std::string source, error;
  if (!read_file(path, source, error)) {
    std::cerr << "error: " << error << "\n";
    return 1;
  }
  char errbuf[512] = {0};
  sw_status status =
      sw_program_parse(source.c_str(), path.stem().string().c_str(), &handle.ptr, errbuf,
                       sizeof errbuf);
  if (status != SW_OK) {
    std::cerr << "error: " << path.string() << ": " << errbuf << "\n";
    return exit_code_for(status);
  }
  return 0;
}

/// Flag values layered over an optional JSON config file. Flags win.
class ConfigBuilder {
 public:
  explicit ConfigBuilder(const std::string& config_path) {
    if (config_path.empty()) return;
    std::string text, error;
    if (!read_file(config_path, text, error)) throw CLI::ValidationError("--config", error);
    json parsed = json::parse(text, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) {
      throw CLI::ValidationError("--config", "config file must hold a JSON object");
    }
    config_ = std::move(parsed);
  }

  template <typename T>
  void set(const std::string& key, const T& value, bool flag_given) {
    if (flag_given || !config_.contains(key)) config_[key] = value;
  }

  std::string dump() const { return config_.dump(); }

 private:
  json config_ = json::object();
};

struct CampaignFlags {
  std::string out_dir = "seedsmith-out";
  std::string provider = "mock";
  std::string predictor = "oracle";
  bool oracle_coverage = false;
  uint64_t seed = 0;
  double time_limit = 300.0;
  uint64_t max_iters = 0;
  uint64_t error_cap = 10;
  std::string clock;
  std::string cassette;
  std::string record;
  std::string model = "gpt-4";
  bool force_error_tail = false;
  double tail_fraction = 0.2;
  uint64_t step_limit = 1000000;
  bool no_measure = false;
  std::string config_file;
  std::string arm;
  std::string programs_dir;
  unsigned jobs = 1;
};

void add_campaign_flags(CLI::App* cmd, CampaignFlags& flags) {
  cmd->add_option("--out", flags.out_dir, "Output directory root");
  cmd->add_option("--provider", flags.provider, "Generation provider: mock|llm|replay");
  cmd->add_option("--predictor", flags.predictor, "Prediction provider: oracle|llm|replay");
  cmd->add_flag("--oracle-coverage", flags.oracle_coverage,
                "Use the execution oracle for coverage prediction");
  cmd->add_option("--seed", flags.seed, "RNG seed");
  cmd->add_option("--time-limit", flags.time_limit, "Campaign budget in seconds (default 300)");
  cmd->add_option("--max-iters", flags.max_iters, "Iteration cap, 0 = time-bounded only");
  cmd->add_option("--error-cap", flags.error_cap, "Max error-trigger seeds");
  cmd->add_option("--clock", flags.clock, "sim|real (default: sim for offline providers)");
  cmd->add_option("--cassette", flags.cassette, "Cassette to replay");
  cmd->add_option("--record", flags.record, "Record live traffic into this cassette");
  cmd->add_option("--model", flags.model, "Chat model name");
  cmd->add_flag("--force-error-tail", flags.force_error_tail,
                "Switch to error-seeking during the budget tail even below 100% coverage");
  cmd->add_option("--tail-fraction", flags.tail_fraction, "Tail size as a fraction of the budget");
  cmd->add_option("--step-limit", flags.step_limit, "Interpreter step budget per execution");
  cmd->add_flag("--no-measure", flags.no_measure, "Skip executing the final corpus for the report");
  cmd->add_option("--config", flags.config_file, "JSON config file (flags override it)");
  cmd->add_option("--arm", flags.arm, "Arm label for logs and reports");
  cmd->add_option("--programs", flags.programs_dir, "Run every *.ml program in this directory");
  cmd->add_option("--jobs", flags.jobs, "Parallel campaigns across programs (batch mode only)");
}

std::string build_config_json(const CLI::App* cmd, const CampaignFlags& flags,
                              const std::string& arm_default) {
  ConfigBuilder cfg(flags.config_file);
  auto given = [&](const char* name) { return cmd->count(name) > 0; };
  cfg.set("time_limit_s", flags.time_limit, given("--time-limit"));
  cfg.set("seed", flags.seed, given("--seed"));
  cfg.set("error_cap", flags.error_cap, given("--error-cap"));
  cfg.set("max_iterations", flags.max_iters, given("--max-iters"));
  cfg.set("step_limit", flags.step_limit, given("--step-limit"));
  cfg.set("force_error_tail", flags.force_error_tail, given("--force-error-tail"));
  cfg.set("tail_fraction", flags.tail_fraction, given("--tail-fraction"));
  cfg.set("generation_provider", flags.provider, given("--provider"));
  std::string predictor = flags.oracle_coverage ? "oracle" : flags.predictor;
  cfg.set("prediction_provider", predictor, given("--predictor") || flags.oracle_coverage);
  if (!flags.clock.empty()) cfg.set("clock", flags.clock, true);
  if (!flags.cassette.empty()) cfg.set("cassette", flags.cassette, true);
  if (!flags.record.empty()) cfg.set("record_cassette", flags.record, true);
  cfg.set("model", flags.model, given("--model"));
  cfg.set("measure", !flags.no_measure, given("--no-measure"));
  cfg.set("arm", flags.arm.empty() ? arm_default : flags.arm, !flags.arm.empty());
  return cfg.dump();
}

/// Runs one campaign or baseline and writes the output tree:
///   <out>/<stem>/ics/...  campaign_log.jsonl  summary.json  report.md/json
int run_one(const fs::path& program_path, const std::string& config_json,
            const std::string& baseline_kind, const fs::path& out_root) {
  ProgramHandle program;
  if (int rc = parse_subject(program_path, program); rc != 0) return rc;

  char errbuf[512] = {0};
  ResultHandle result;
  sw_status status;
  if (baseline_kind.empty()) {
    status = sw_campaign_run(program.ptr, config_json.c_str(), &result.ptr, errbuf, sizeof errbuf);
  } else {
    status = sw_baseline_run(program.ptr, baseline_kind.c_str(), config_json.c_str(), &result.ptr,
                             errbuf, sizeof errbuf);
  }
  if (result.ptr == nullptr) {
    std::cerr << "error: " << errbuf << "\n";
    return exit_code_for(status);
  }
  if (status != SW_OK) std::cerr << "warning: " << errbuf << "\n";

  fs::path dir = out_root / program_path.stem();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    std::cerr << "error: cannot create " << dir << ": " << ec.message() << "\n";
    return 1;
  }

  char export_err[512] = {0};
  sw_status export_status =
      sw_result_export(result.ptr, (dir / "ics").string().c_str(), export_err, sizeof export_err);
  if (export_status != SW_OK) {
    std::cerr << "error: " << export_err << "\n";
    return exit_code_for(export_status);
  }

  OwnedString log, summary;
  sw_result_log(result.ptr, &log.ptr);
  sw_result_summary(result.ptr, &summary.ptr);
  std::string error;
  if (!write_file(dir / "campaign_log.jsonl", log.str(), error) ||
      !write_file(dir / "summary.json", summary.str(), error)) {
    std::cerr << "error: " << error << "\n";
    return 1;
  }

  std::string log_path = (dir / "campaign_log.jsonl").string();
  const char* paths[] = {log_path.c_str()};
  for (const char* format : {"markdown", "json"}) {
    OwnedString document;
    char report_err[512] = {0};
    if (sw_report(paths, 1, format, &document.ptr, report_err, sizeof report_err) == SW_OK) {
      fs::path name = std::string("report.") + (format[0] == 'm' ? "md" : "json");
      if (!write_file(dir / name, document.str(), error)) {
        std::cerr << "error: " << error << "\n";
        return 1;
      }
    }
  }

  json parsed = json::parse(summary.str(), nullptr, false);
  if (!parsed.is_discarded()) {
    std::cout << program_path.stem().string() << ": " << parsed.value("seeds", 0) << " seeds, "
              << parsed.value("coverage_percent", std::string("?")) << "% coverage"
              << " -> " << dir.string() << "\n";
  }
  return exit_code_for(status);
}

std::vector<fs::path> collect_programs(const std::string& programs_dir) {
  std::vector<fs::path> programs;
  for (const auto& entry : fs::directory_iterator(programs_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".ml") {
      programs.push_back(entry.path());
    }
  }
  std::sort(programs.begin(), programs.end());
  return programs;
}

int run_many(const std::vector<fs::path>& programs, const std::string& config_json,
             const std::string& baseline_kind, const fs::path& out_root, unsigned jobs) {
  if (programs.empty()) {
    std::cerr << "error: no .ml programs found\n";
    return 1;
  }
  if (jobs <= 1 || programs.size() == 1) {
    int worst = 0;
    for (const auto& path : programs) {
      worst = std::max(worst, run_one(path, config_json, baseline_kind, out_root));
    }
    return worst;
  }

  std::atomic<size_t> next{0};
  std::atomic<int> worst{0};
  std::mutex io_mutex;
  auto worker = [&]() {
    for (;;) {
      size_t index = next.fetch_add(1);
      if (index >= programs.size()) return;
      int rc = run_one(programs[index], config_json, baseline_kind, out_root);
      int expected = worst.load();
      while (rc > expected && !worst.compare_exchange_weak(expected, rc)) {
      }
      (void)io_mutex;
    }
  };
  std::vector<std::thread> threads;
  for (unsigned i = 0; i < jobs; ++i) threads.emplace_back(worker);
  for (auto& thread : threads) thread.join();
  return worst.load();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seedsmith: predictive initial-corpus construction for fuzzing"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sw_version()));

  // generate
  auto* generate = app.add_subcommand("generate", "Build an ICS with the tandem workflow");
  CampaignFlags gen_flags;
  std::string gen_program;
  generate->add_option("program", gen_program, "MiniLang program file");
  add_campaign_flags(generate, gen_flags);

  // baseline
  auto* baseline = app.add_subcommand("baseline", "Run a comparison arm (b1|b2|b3)");
  CampaignFlags base_flags;
  std::string base_kind, base_program;
  baseline->add_option("kind", base_kind, "b1 | b2 | b3")->required();
  baseline->add_option("program", base_program, "MiniLang program file");
  add_campaign_flags(baseline, base_flags);

  // minimize
  auto* minimize = app.add_subcommand("minimize", "Coverage-preserving corpus minimization");
  std::string min_seed_dir, min_program, min_out;
  minimize->add_option("seed_dir", min_seed_dir, "Directory of seed files")->required();
  minimize->add_option("program", min_program, "MiniLang program file")->required();
  minimize->add_option("--out", min_out, "Output directory (default <seed_dir>_min)");

  // trace
  auto* trace = app.add_subcommand("trace", "Execute one input and show annotated coverage");
  std::string trace_program, trace_input;
  uint64_t trace_steps = 0;
  trace->add_option("program", trace_program, "MiniLang program file")->required();
  trace->add_option("input", trace_input, "Input file (whitespace-separated tokens)")->required();
  trace->add_option("--step-limit", trace_steps, "Interpreter step budget");

  // report
  auto* report = app.add_subcommand("report", "Efficiency comparison from campaign logs");
  std::vector<std::string> report_logs;
  std::string report_format = "markdown", report_out;
  report->add_option("logs", report_logs, "campaign_log.jsonl files")->required();
  report->add_option("--format", report_format, "markdown | json");
  report->add_option("--out", report_out, "Write the document here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (generate->parsed() || baseline->parsed()) {
    const bool is_baseline = baseline->parsed();
    CLI::App* cmd = is_baseline ? baseline : generate;
    CampaignFlags& flags = is_baseline ? base_flags : gen_flags;
    const std::string& program_arg = is_baseline ? base_program : gen_program;
    std::string arm_default = is_baseline ? base_kind : "seedsmith";

    std::string config_json;
    try {
      config_json = build_config_json(cmd, flags, arm_default);
    } catch (const CLI::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }

    if (!flags.programs_dir.empty()) {
      return run_many(collect_programs(flags.programs_dir), config_json,
                      is_baseline ? base_kind : "", flags.out_dir, flags.jobs);
    }
    if (program_arg.empty()) {
      std::cerr << "error: give a program file or --programs <dir>\n";
      return 1;
    }
    return run_one(program_arg, config_json, is_baseline ? base_kind : "", flags.out_dir);
  }

  if (minimize->parsed()) {
    ProgramHandle program;
    if (int rc = parse_subject(min_program, program); rc != 0) return rc;
    if (min_out.empty()) min_out = min_seed_dir + "_min";
    char errbuf[512] = {0};
    OwnedString summary;
    sw_status status = sw_minimize(program.ptr, min_seed_dir.c_str(), min_out.c_str(), "{}",
                                   &summary.ptr, errbuf, sizeof errbuf);
    if (status != SW_OK) {
      std::cerr << "error: " << errbuf << "\n";
      return exit_code_for(status);
    }
    std::cout << summary.str();
    return 0;
  }

  if (trace->parsed()) {
    ProgramHandle program;
    if (int rc = parse_subject(trace_program, program); rc != 0) return rc;
    std::string input, error;
    if (!read_file(trace_input, input, error)) {
      std::cerr << "error: " << error << "\n";
      return 1;
    }
    char errbuf[512] = {0};
    OwnedString text;
    sw_status status =
        sw_trace(program.ptr, input.c_str(), trace_steps, &text.ptr, errbuf, sizeof errbuf);
    if (status != SW_OK) {
      std::cerr << "error: " << errbuf << "\n";
      return exit_code_for(status);
    }
    std::cout << text.str();
    return 0;
  }

  if (report->parsed()) {
    std::vector<const char*> paths;
    for (const auto& path : report_logs) paths.push_back(path.c_str());
    char errbuf[512] = {0};
    OwnedString document;
    sw_status status = sw_report(paths.data(), paths.size(), report_format.c_str(),
                                 &document.ptr, errbuf, sizeof errbuf);
    if (status != SW_OK) {
      std::cerr << "error: " << errbuf << "\n";
      return exit_code_for(status);
    }
    if (report_out.empty()) {
      std::cout << document.str();
    } else {
      std::string error;
      if (!write_file(report_out, document.str(), error)) {
        std::cerr << "error: " << error << "\n";
        return 1;
      }
    }
    return 0;
  }

  return 1;
}
