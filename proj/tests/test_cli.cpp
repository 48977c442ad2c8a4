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
// Drives the installed CLI binary as a subprocess and inspects its output
// tree, exit codes, and snapshot stability.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunOutput {
  int exit_code;
  std::string stdout_text;
};

RunOutput run_cli(const std::string& args) {
  // Scrub provider env so CLI behavior is hermetic.
  std::string command = "env -u SEEDSMITH_API_URL -u SEEDSMITH_API_KEY -u SEEDSMITH_MODEL " +
                        std::string(SEEDSMITH_CLI_BIN) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  char buffer[4096];
  size_t n;
  while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) output.append(buffer, n);
  int status = pclose(pipe);
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, output};
}

fs::path fixture_program(const std::string& name) {
  return fs::path(SEEDSMITH_FIXTURES_DIR) / "programs" / name;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  return dir;
}

/// Byte-compares two directory trees.
bool trees_identical(const fs::path& a, const fs::path& b) {
  std::vector<fs::path> rel_a, rel_b;
  for (auto& entry : fs::recursive_directory_iterator(a)) {
    if (entry.is_regular_file()) rel_a.push_back(fs::relative(entry.path(), a));
  }
  for (auto& entry : fs::recursive_directory_iterator(b)) {
    if (entry.is_regular_file()) rel_b.push_back(fs::relative(entry.path(), b));
  }
  std::sort(rel_a.begin(), rel_a.end());
  std::sort(rel_b.begin(), rel_b.end());
  if (rel_a != rel_b) return false;
  for (const auto& rel : rel_a) {
    if (read_file(a / rel) != read_file(b / rel)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("generate produces a snapshot-stable output tree") {
  fs::path out1 = fresh_dir("seedsmith_cli_run1");
  fs::path out2 = fresh_dir("seedsmith_cli_run2");
  std::string program = fixture_program("fig1_analog.ml").string();

  auto first = run_cli("generate " + program +
                       " --provider mock --oracle-coverage --seed 42 --out " + out1.string());
  CHECK(first.exit_code == 0);
  auto second = run_cli("generate " + program +
                        " --provider mock --oracle-coverage --seed 42 --out " + out2.string());
  CHECK(second.exit_code == 0);

  fs::path tree1 = out1 / "fig1_analog";
  CHECK(fs::exists(tree1 / "ics" / "manifest.json"));
  CHECK(fs::exists(tree1 / "ics" / "id_000000"));
  CHECK(fs::exists(tree1 / "campaign_log.jsonl"));
  CHECK(fs::exists(tree1 / "summary.json"));
  CHECK(fs::exists(tree1 / "report.md"));
  CHECK(fs::exists(tree1 / "report.json"));

  CHECK(trees_identical(out1, out2));

  json manifest = json::parse(read_file(tree1 / "ics" / "manifest.json"));
  CHECK(manifest["coverage_percent"] == "100.00");

  // The effective config is echoed into the log; the default budget is the
  // five-minute envelope.
  std::istringstream log(read_file(tree1 / "campaign_log.jsonl"));
  std::string first_line;
  std::getline(log, first_line);
  json start = json::parse(first_line);
  CHECK(start["type"] == "campaign_start");
  CHECK(start["config"]["time_limit_s"] == 300.0);
  CHECK(start["config"]["rng_seed"] == 42);

  fs::remove_all(out1);
  fs::remove_all(out2);
}

TEST_CASE("provider failure exits 2 but still writes partial output") {
  fs::path out = fresh_dir("seedsmith_cli_noprov");
  // A live provider with no endpoint configured gives up immediately.
  auto result = run_cli("generate " + fixture_program("lookup.ml").string() +
                        " --provider llm --predictor oracle --seed 1 --out " + out.string());
  CHECK(result.exit_code == 2);
  CHECK(fs::exists(out / "lookup" / "ics" / "manifest.json"));
  CHECK(fs::exists(out / "lookup" / "campaign_log.jsonl"));

  std::string log_text = read_file(out / "lookup" / "campaign_log.jsonl");
  CHECK(log_text.find("provider_unavailable") != std::string::npos);
  fs::remove_all(out);
}

TEST_CASE("baseline runs are bit-reproducible from the seed") {
  fs::path out1 = fresh_dir("seedsmith_cli_b2a");
  fs::path out2 = fresh_dir("seedsmith_cli_b2b");
  std::string program = fixture_program("branchy.ml").string();
  CHECK(run_cli("baseline b2 " + program + " --seed 11 --out " + out1.string()).exit_code == 0);
  CHECK(run_cli("baseline b2 " + program + " --seed 11 --out " + out2.string()).exit_code == 0);
  CHECK(trees_identical(out1, out2));
  fs::remove_all(out1);
  fs::remove_all(out2);
}

TEST_CASE("missing input files exit with code 1") {
  auto result = run_cli("generate /nonexistent/prog.ml --out /tmp/seedsmith_cli_missing");
  CHECK(result.exit_code == 1);

  auto bad_trace = run_cli("trace /nonexistent/prog.ml /nonexistent/input.txt");
  CHECK(bad_trace.exit_code == 1);

  auto bad_parse = run_cli("report /nonexistent/log.jsonl");
  CHECK(bad_parse.exit_code == 1);
}

TEST_CASE("baseline 1 exports exactly five seeds") {
  fs::path out = fresh_dir("seedsmith_cli_b1");
  auto result = run_cli("baseline b1 " + fixture_program("lookup.ml").string() +
                        " --seed 7 --out " + out.string());
  CHECK(result.exit_code == 0);

  json manifest = json::parse(read_file(out / "lookup" / "ics" / "manifest.json"));
  CHECK(manifest["arm"] == "baseline1");
  CHECK(manifest["seeds"].size() == 5);
  for (int i = 0; i < 5; ++i) {
    char name[16];
    std::snprintf(name, sizeof name, "id_%06d", i);
    CHECK(fs::exists(out / "lookup" / "ics" / name));
  }
  fs::remove_all(out);
}

TEST_CASE("trace prints the annotated listing and outcome") {
  fs::path input = fs::temp_directory_path() / "seedsmith_cli_input.txt";
  {
    std::ofstream out(input);
    out << "0\n";
  }
  auto result =
      run_cli("trace " + fixture_program("div_mod.ml").string() + " " + input.string());
  CHECK(result.exit_code == 0);
  // 10/0 never happens here: input "0" hits the second read first.
  CHECK(result.stdout_text.find("> read_int a") != std::string::npos);
  CHECK(result.stdout_text.find("status: runtime_error kind=input_exhausted line=3") !=
        std::string::npos);
  fs::remove(input);
}

TEST_CASE("minimize shrinks an exported corpus while preserving coverage") {
  fs::path out = fresh_dir("seedsmith_cli_minsrc");
  auto gen = run_cli("baseline b2 " + fixture_program("branchy.ml").string() +
                     " --seed 3 --out " + out.string());
  CHECK(gen.exit_code == 0);

  fs::path ics = out / "branchy" / "ics";
  fs::path minimized = fresh_dir("seedsmith_cli_minout");
  auto result = run_cli("minimize " + ics.string() + " " +
                        fixture_program("branchy.ml").string() + " --out " + minimized.string());
  CHECK(result.exit_code == 0);
  CHECK(result.stdout_text.find("\"coverage_preserved\": true") != std::string::npos);
  CHECK(fs::exists(minimized / "manifest.json"));

  fs::remove_all(out);
  fs::remove_all(minimized);
}

TEST_CASE("report renders a comparison table from logs") {
  fs::path out = fresh_dir("seedsmith_cli_report");
  std::string program = fixture_program("branchy.ml").string();
  CHECK(run_cli("generate " + program + " --provider mock --oracle-coverage --seed 9 --out " +
                out.string())
            .exit_code == 0);
  CHECK(run_cli("baseline b1 " + program + " --seed 9 --out " + out.string()).exit_code == 0);

  // Note: the second run overwrote the first tree, so re-run generate into a
  // sibling directory to keep both logs.
  fs::path out2 = fresh_dir("seedsmith_cli_report2");
  CHECK(run_cli("generate " + program + " --provider mock --oracle-coverage --seed 9 --out " +
                out2.string())
            .exit_code == 0);

  std::string log1 = (out2 / "branchy" / "campaign_log.jsonl").string();
  std::string log2 = (out / "branchy" / "campaign_log.jsonl").string();
  auto result = run_cli("report " + log1 + " " + log2);
  CHECK(result.exit_code == 0);
  CHECK(result.stdout_text.find("Errors per Seed (EPS)") != std::string::npos);
  CHECK(result.stdout_text.find("seedsmith") != std::string::npos);
  CHECK(result.stdout_text.find("baseline1") != std::string::npos);

  fs::remove_all(out);
  fs::remove_all(out2);
}

TEST_CASE("config files are honored with flag overrides") {
  fs::path config = fs::temp_directory_path() / "seedsmith_cli_config.json";
  {
    std::ofstream out(config);
    out << "{\"seed\": 5, \"time_limit_s\": 12.5, \"arm\": \"tuned\"}\n";
  }
  fs::path out = fresh_dir("seedsmith_cli_cfg");
  auto result = run_cli("generate " + fixture_program("lookup.ml").string() + " --config " +
                        config.string() + " --seed 6 --out " + out.string());
  CHECK(result.exit_code == 0);

  std::istringstream log(read_file(out / "lookup" / "campaign_log.jsonl"));
  std::string first_line;
  std::getline(log, first_line);
  json start = json::parse(first_line);
  CHECK(start["config"]["rng_seed"] == 6);            // flag wins
  CHECK(start["config"]["time_limit_s"] == 12.5);     // file value survives
  CHECK(start["config"]["arm"] == "tuned");

  fs::remove(config);
  fs::remove_all(out);
}

TEST_CASE("replaying the committed cassette reproduces the recorded manifest") {
  fs::path out = fresh_dir("seedsmith_cli_replay");
  fs::path cassette = fs::path(SEEDSMITH_FIXTURES_DIR) / "cassettes" / "campaign_fig1.jsonl";
  fs::path recorded =
      fs::path(SEEDSMITH_FIXTURES_DIR) / "cassettes" / "campaign_fig1_manifest.json";

  // The replay must mirror the recording's campaign configuration.
  auto result = run_cli("generate " + fixture_program("fig1_analog.ml").string() +
                        " --provider replay --predictor replay --cassette " + cassette.string() +
                        " --time-limit 120 --out " + out.string());
  CHECK(result.exit_code == 0);
  CHECK(read_file(out / "fig1_analog" / "ics" / "manifest.json") == read_file(recorded));
  fs::remove_all(out);
}

TEST_CASE("batch mode runs every program in a directory") {
  fs::path programs = fresh_dir("seedsmith_cli_programs");
  fs::create_directories(programs);
  for (const char* name : {"div_mod.ml", "lookup.ml"}) {
    fs::copy_file(fixture_program(name), programs / name);
  }
  fs::path out = fresh_dir("seedsmith_cli_batch");
  auto result = run_cli("generate --programs " + programs.string() +
                        " --provider mock --oracle-coverage --seed 4 --jobs 2 --out " +
                        out.string());
  CHECK(result.exit_code == 0);
  CHECK(fs::exists(out / "div_mod" / "ics" / "manifest.json"));
  CHECK(fs::exists(out / "lookup" / "ics" / "manifest.json"));

  fs::remove_all(programs);
  fs::remove_all(out);
}
