/* Copyright 2026 The Seedsmith Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* Seedsmith C API: initial-corpus construction for mutation-based fuzzing.
 *
 * The library builds a seed corpus for a subject program by interleaving
 * test-case generation with predicted coverage, runs the comparison
 * baselines, minimizes corpora, traces single executions, and renders
 * efficiency reports. All handles are opaque; every function that can fail
 * returns an sw_status and, where an errbuf is given, a human-readable
 * message.
 *
 * Configuration is passed as a JSON object string. Recognized keys (all
 * optional):
 *   time_limit_s        number, campaign budget in seconds (default 300)
 *   seed                integer, RNG seed (default 0)
 *   error_cap           integer, max error-trigger seeds (default 10)
 *   max_iterations      integer, 0 = bounded by time only
 *   step_limit          integer, interpreter budget per execution
 *   force_error_tail    bool, switch to error-seeking in the budget tail
 *   tail_fraction       number, tail size as a fraction (default 0.2)
 *   arm                 string, label written into logs and manifests
 *   generation_provider "mock" | "llm" | "replay"   (default "mock")
 *   prediction_provider "oracle" | "llm" | "replay" (default "oracle")
 *   clock               "sim" | "real" (default: "sim" unless a live
 *                        provider is selected)
 *   cassette            path, replay source
 *   record_cassette     path, record destination for live providers
 *   model               string, chat model name (default "gpt-4")
 *   sim_gen_cost_ms     integer, simulated cost of one generation (700)
 *   sim_predict_cost_ms integer, simulated cost of one prediction (300)
 *   sim_exec_cost_ms    integer, simulated cost of one execution (50)
 *   measure             bool, execute the final corpus for the report
 *                        summary (default true)
 * Live providers read SEEDSMITH_API_URL and SEEDSMITH_API_KEY from the
 * environment.
 */

#ifndef SEEDSMITH_H
#define SEEDSMITH_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sw_status {
  SW_OK = 0,
  SW_ERR_USAGE = 1,    /* bad arguments, unreadable input, degenerate program */
  SW_ERR_PROVIDER = 2, /* a generation/prediction provider gave up */
  SW_ERR_INTERNAL = 3, /* invariant violation or unexpected failure */
  SW_ERR_PARSE = 4,    /* subject program failed to parse */
  SW_ERR_IO = 5        /* filesystem trouble */
} sw_status;

typedef struct sw_program sw_program;
typedef struct sw_result sw_result;

const char* sw_version(void);
const char* sw_status_name(sw_status status);

/* ------------------------------------------------------------------ */
/* Subject programs                                                     */

sw_status sw_program_parse(const char* source, const char* program_id, sw_program** out,
                           char* errbuf, size_t errbuf_len);
void sw_program_free(sw_program* program);
int sw_program_line_count(const sw_program* program);
int sw_program_executable_lines(const sw_program* program);

/* Executes input_text (whitespace-separated tokens) once and renders the
 * annotated coverage listing plus an outcome summary into *out_text. */
sw_status sw_trace(const sw_program* program, const char* input_text, uint64_t step_limit,
                   char** out_text, char* errbuf, size_t errbuf_len);

/* ------------------------------------------------------------------ */
/* Campaigns and baselines                                              */

/* Runs the generation/prediction workflow. On SW_ERR_PROVIDER a partial
 * result (corpus built so far, plus its log) is still stored in *out. */
sw_status sw_campaign_run(const sw_program* program, const char* config_json, sw_result** out,
                          char* errbuf, size_t errbuf_len);

/* kind: "b1" | "b2" | "b3". */
sw_status sw_baseline_run(const sw_program* program, const char* kind, const char* config_json,
                          sw_result** out, char* errbuf, size_t errbuf_len);

void sw_result_free(sw_result* result);

/* Writes id_000000, id_000001, ... plus manifest.json into directory. */
sw_status sw_result_export(const sw_result* result, const char* directory, char* errbuf,
                           size_t errbuf_len);

sw_status sw_result_manifest(const sw_result* result, char** out_json);
sw_status sw_result_log(const sw_result* result, char** out_jsonl);
sw_status sw_result_summary(const sw_result* result, char** out_json);

/* ------------------------------------------------------------------ */
/* Standalone tools                                                     */

/* Executes every seed file in seed_dir against the program, minimizes the
 * corpus coverage-preservingly, writes the minimized ICS into out_dir. */
sw_status sw_minimize(const sw_program* program, const char* seed_dir, const char* out_dir,
                      const char* config_json, char** out_summary_json, char* errbuf,
                      size_t errbuf_len);

/* Builds the efficiency comparison from campaign logs. format: "markdown"
 * or "json". */
sw_status sw_report(const char* const* log_paths, size_t count, const char* format,
                    char** out_document, char* errbuf, size_t errbuf_len);

/* Frees any string returned through a char** out parameter. */
void sw_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* SEEDSMITH_H */
