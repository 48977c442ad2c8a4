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
// Exercises the shared library through the public C surface only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "seedsmith.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string fixture_source(const std::string& name) {
  return read_file(fs::path(SEEDSMITH_FIXTURES_DIR) / "programs" / name);
}

struct Owned {
  char* ptr = nullptr;
  ~Owned() { sw_string_free(ptr); }
  std::string str() const { return ptr == nullptr ? std::string() : std::string(ptr); }
};

struct Program {
  sw_program* ptr = nullptr;
  ~Program() { sw_program_free(ptr); }
};

struct Result {
  sw_result* ptr = nullptr;
  ~Result() { sw_result_free(ptr); }
};

Program parse_fixture(const std::string& name) {
  Program program;
  char err[256] = {0};
  std::string source = fixture_source(name);
  REQUIRE(sw_program_parse(source.c_str(), name.c_str(), &program.ptr, err, sizeof err) == SW_OK);
  return program;
}

constexpr const char* kMockConfig =
    "{\"seed\":42,\"generation_provider\":\"mock\",\"prediction_provider\":\"oracle\","
    "\"time_limit_s\":300,\"clock\":\"sim\"}";

}  // namespace

TEST_CASE("version and status names are exposed") {
  CHECK(std::string(sw_version()) == "0.1.0");
  CHECK(std::string(sw_status_name(SW_OK)) == "ok");
  CHECK(std::string(sw_status_name(SW_ERR_PROVIDER)) == "provider");
}

TEST_CASE("program parsing reports counts and errors") {
  Program program = parse_fixture("branchy.ml");
  CHECK(sw_program_line_count(program.ptr) == 19);
  CHECK(sw_program_executable_lines(program.ptr) == 12);

  sw_program* bad = nullptr;
  char err[256] = {0};
  CHECK(sw_program_parse("read_int n\nend\n", "broken", &bad, err, sizeof err) == SW_ERR_PARSE);
  CHECK(bad == nullptr);
  CHECK(std::string(err).find("line 2") != std::string::npos);

  CHECK(sw_program_parse(nullptr, "x", &bad, err, sizeof err) == SW_ERR_USAGE);
}

TEST_CASE("tracing renders the annotated listing and outcome") {
  Program program = parse_fixture("div_mod.ml");
  Owned text;
  char err[256] = {0};
  REQUIRE(sw_trace(program.ptr, "7 2", 0, &text.ptr, err, sizeof err) == SW_OK);
  std::string out = text.str();
  CHECK(out.find("> read_int a") != std::string::npos);
  CHECK(out.find("status: normal") != std::string::npos);
  CHECK(out.find("coverage: 6/6 (100.00%)") != std::string::npos);
  CHECK(out.find("3\n1\n") != std::string::npos);

  Owned error_text;
  REQUIRE(sw_trace(program.ptr, "5 0", 0, &error_text.ptr, err, sizeof err) == SW_OK);
  CHECK(error_text.str().find("status: runtime_error kind=arithmetic line=4") !=
        std::string::npos);
}

TEST_CASE("campaigns run, export, and summarize through the C surface") {
  Program program = parse_fixture("fig1_analog.ml");
  Result result;
  char err[512] = {0};
  REQUIRE(sw_campaign_run(program.ptr, kMockConfig, &result.ptr, err, sizeof err) == SW_OK);

  Owned manifest_text, log_text, summary_text;
  REQUIRE(sw_result_manifest(result.ptr, &manifest_text.ptr) == SW_OK);
  REQUIRE(sw_result_log(result.ptr, &log_text.ptr) == SW_OK);
  REQUIRE(sw_result_summary(result.ptr, &summary_text.ptr) == SW_OK);

  json manifest = json::parse(manifest_text.str());
  CHECK(manifest["schema"] == "seedsmith-ics/1");
  CHECK(manifest["coverage_percent"] == "100.00");
  CHECK(manifest["seeds"].size() >= 2);

  json summary = json::parse(summary_text.str());
  CHECK(summary["arm"] == "seedsmith");
  CHECK(summary["provider_failed"] == false);

  auto dir = fs::temp_directory_path() / "seedsmith_capi_export";
  fs::remove_all(dir);
  REQUIRE(sw_result_export(result.ptr, dir.string().c_str(), err, sizeof err) == SW_OK);
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "id_000000"));
  CHECK(read_file(dir / "manifest.json") == manifest_text.str());
  fs::remove_all(dir);
}

TEST_CASE("baselines and minimization work end to end") {
  Program program = parse_fixture("lookup.ml");
  Result b1;
  char err[512] = {0};
  REQUIRE(sw_baseline_run(program.ptr, "b1", kMockConfig, &b1.ptr, err, sizeof err) == SW_OK);

  Owned manifest_text;
  REQUIRE(sw_result_manifest(b1.ptr, &manifest_text.ptr) == SW_OK);
  json manifest = json::parse(manifest_text.str());
  CHECK(manifest["arm"] == "baseline1");
  CHECK(manifest["seeds"].size() == 5);
  CHECK(manifest["coverage_kind"] == "actual");

  auto seeds_dir = fs::temp_directory_path() / "seedsmith_capi_b1";
  auto min_dir = fs::temp_directory_path() / "seedsmith_capi_b1_min";
  fs::remove_all(seeds_dir);
  fs::remove_all(min_dir);
  REQUIRE(sw_result_export(b1.ptr, seeds_dir.string().c_str(), err, sizeof err) == SW_OK);

  Owned summary;
  REQUIRE(sw_minimize(program.ptr, seeds_dir.string().c_str(), min_dir.string().c_str(), "{}",
                      &summary.ptr, err, sizeof err) == SW_OK);
  json min_summary = json::parse(summary.str());
  CHECK(min_summary["input_seeds"] == 5);
  CHECK(min_summary["coverage_preserved"] == true);
  CHECK(fs::exists(min_dir / "manifest.json"));

  sw_result* bogus = nullptr;
  CHECK(sw_baseline_run(program.ptr, "b9", kMockConfig, &bogus, err, sizeof err) ==
        SW_ERR_USAGE);
  CHECK(bogus == nullptr);

  fs::remove_all(seeds_dir);
  fs::remove_all(min_dir);
}

TEST_CASE("reports build from written campaign logs") {
  Program program = parse_fixture("branchy.ml");
  Result result;
  char err[512] = {0};
  REQUIRE(sw_campaign_run(program.ptr, kMockConfig, &result.ptr, err, sizeof err) == SW_OK);

  Owned log_text;
  REQUIRE(sw_result_log(result.ptr, &log_text.ptr) == SW_OK);
  auto log_path = fs::temp_directory_path() / "seedsmith_capi_log.jsonl";
  {
    std::ofstream out(log_path, std::ios::binary);
    out << log_text.str();
  }

  std::string path = log_path.string();
  const char* paths[] = {path.c_str()};
  Owned markdown, as_json;
  REQUIRE(sw_report(paths, 1, "markdown", &markdown.ptr, err, sizeof err) == SW_OK);
  CHECK(markdown.str().find("Errors per Seed (EPS)") != std::string::npos);
  REQUIRE(sw_report(paths, 1, "json", &as_json.ptr, err, sizeof err) == SW_OK);
  CHECK(json::parse(as_json.str())["schema"] == "seedsmith-report/1");

  Owned rejected;
  CHECK(sw_report(paths, 1, "yaml", &rejected.ptr, err, sizeof err) == SW_ERR_USAGE);
  CHECK(rejected.ptr == nullptr);
  fs::remove(log_path);
}
