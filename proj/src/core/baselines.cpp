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

#include "core/baselines.hpp"

#include <algorithm>
#include <bit>

#include "core/errors.hpp"

namespace seedsmith {

using nlohmann::json;

MeasuredSeed measure_seed(const minilang::MiniProgram& program, TestCase tc,
                          uint64_t step_limit) {
  minilang::ExecutionOutcome outcome = minilang::execute(program, tc, step_limit);
  MeasuredSeed seed;
  seed.size_bytes = tc.size_bytes();
  seed.test_case = std::move(tc);
  seed.actual = std::move(outcome.covered);
  seed.status = outcome.status;
  seed.error = outcome.error;
  return seed;
}

TestCase random_seed(Rng& rng, const minilang::InputSpec& spec, const RandomSeedParams& params) {
  static const std::vector<std::string> kNonNumeric = {"x", "abc", "?", "NaN", "1e3", "--"};
  static const std::vector<std::string> kWords = {"a", "b", "S", "left", "zz"};

  auto draw = [&](minilang::TokenKind kind) -> std::string {
    if (kind == minilang::TokenKind::text) return rng.pick(kWords);
    if (rng.chance(params.non_numeric_p)) return rng.pick(kNonNumeric);
    return std::to_string(rng.range(params.int_min, params.int_max));
  };

  std::vector<std::string> tokens;
  if (spec.empty()) {
    tokens.push_back(draw(minilang::TokenKind::integer));
  } else {
    for (const auto& slot : spec) {
      size_t repeats = slot.in_loop ? 1 + rng.index(params.loop_extra_max + 1) : 1;
      for (size_t r = 0; r < repeats; ++r) tokens.push_back(draw(slot.kind));
    }
  }
  return TestCase::from_tokens(std::move(tokens));
}

TestCase mutate(const TestCase& tc, Rng& rng) {
  static const std::vector<std::string> kBoundary = {"0", "-1", "9223372036854775807"};
  static const std::vector<std::string> kNonNumeric = {"x", "abc", "?", "NaN"};

  std::vector<std::string> tokens = tc.tokens;
  if (tokens.empty()) tokens.push_back("0");

  auto random_token = [&]() -> std::string {
    if (rng.chance(0.05)) return rng.pick(kNonNumeric);
    return std::to_string(rng.range(-100, 1000));
  };

  size_t op = rng.index(5);
  size_t at = rng.index(tokens.size());
  switch (op) {
    case 0: {  // integer nudge; falls back to replacement on non-numeric tokens
      int64_t value;
      try {
        size_t used = 0;
        value = std::stoll(tokens[at], &used);
        if (used != tokens[at].size()) throw std::invalid_argument("partial");
      } catch (...) {
        tokens[at] = random_token();
        break;
      }
      int64_t delta = rng.range(1, 10) * (rng.chance(0.5) ? 1 : -1);
      int64_t nudged;
      if (__builtin_add_overflow(value, delta, &nudged)) nudged = delta > 0 ? INT64_MAX : INT64_MIN;
      tokens[at] = std::to_string(nudged);
      break;
    }
    case 1:
      tokens[at] = random_token();
      break;
    case 2:
      tokens.insert(tokens.begin() + static_cast<ptrdiff_t>(at), tokens[at]);
      break;
    case 3:
      tokens.erase(tokens.begin() + static_cast<ptrdiff_t>(at));
      if (tokens.empty()) tokens.push_back(random_token());  // resample, never emit empty
      break;
    case 4:
      tokens[at] = rng.pick(kBoundary);
      break;
  }
  return TestCase::from_tokens(std::move(tokens));
}

// ---------------------------------------------------------------------------
// Minimization

std::vector<MeasuredSeed> cmin_greedy(const std::vector<MeasuredSeed>& seeds) {
  if (seeds.empty()) return {};

  CoverageMap target(seeds[0].actual.program_id(), seeds[0].actual.denominator());
  for (const auto& seed : seeds) target = union_of(target, seed.actual);

  std::vector<bool> chosen(seeds.size(), false);
  CoverageMap covered(target.program_id(), target.denominator());

  while (covered.count() < target.count()) {
    size_t best = seeds.size();
    size_t best_gain = 0;
    for (size_t i = 0; i < seeds.size(); ++i) {
      if (chosen[i]) continue;
      size_t gain = 0;
      for (int line : seeds[i].actual.covered()) {
        if (!covered.contains(line)) ++gain;
      }
      if (gain == 0) continue;
      if (best == seeds.size() || gain > best_gain ||
          (gain == best_gain && seeds[i].size_bytes < seeds[best].size_bytes)) {
        best = i;
        best_gain = gain;
      }
    }
    if (best == seeds.size()) break;  // nothing useful left (unreachable while covered < target)
    chosen[best] = true;
    covered = union_of(covered, seeds[best].actual);
  }

  // Greedy can keep early picks that later picks subsume. Prune until
  // irredundant, trying to drop bigger seeds first.
  std::vector<size_t> order;
  for (size_t i = 0; i < seeds.size(); ++i) {
    if (chosen[i]) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return seeds[a].size_bytes > seeds[b].size_bytes;
  });
  for (size_t candidate : order) {
    CoverageMap rest(target.program_id(), target.denominator());
    for (size_t i = 0; i < seeds.size(); ++i) {
      if (chosen[i] && i != candidate) rest = union_of(rest, seeds[i].actual);
    }
    if (rest.count() == target.count()) chosen[candidate] = false;
  }

  std::vector<MeasuredSeed> out;
  for (size_t i = 0; i < seeds.size(); ++i) {
    if (chosen[i]) out.push_back(seeds[i]);
  }
  return out;
}

std::vector<size_t> exact_min_cover(const std::vector<MeasuredSeed>& seeds) {
  if (seeds.size() > 20) {
    throw OracleTooLarge("exact_min_cover limited to 20 seeds, got " +
                         std::to_string(seeds.size()));
  }
  if (seeds.empty()) return {};

  // Compress the union's lines into bit positions.
  std::vector<int> lines;
  {
    std::set<int> all;
    for (const auto& seed : seeds) {
      all.insert(seed.actual.covered().begin(), seed.actual.covered().end());
    }
    lines.assign(all.begin(), all.end());
  }
  size_t words = (lines.size() + 63) / 64;
  if (words == 0) words = 1;

  auto bit_of = [&](int line) {
    return static_cast<size_t>(std::lower_bound(lines.begin(), lines.end(), line) - lines.begin());
  };

  std::vector<std::vector<uint64_t>> masks(seeds.size(), std::vector<uint64_t>(words, 0));
  std::vector<uint64_t> target(words, 0);
  for (size_t i = 0; i < seeds.size(); ++i) {
    for (int line : seeds[i].actual.covered()) {
      size_t b = bit_of(line);
      masks[i][b / 64] |= uint64_t{1} << (b % 64);
      target[b / 64] |= uint64_t{1} << (b % 64);
    }
  }

  const uint32_t n = static_cast<uint32_t>(seeds.size());
  uint32_t best_count = n + 1;
  size_t best_size = SIZE_MAX;
  uint32_t best_mask = 0;
  std::vector<uint64_t> acc(words);

  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    uint32_t count = static_cast<uint32_t>(std::popcount(mask));
    if (count > best_count) continue;
    std::fill(acc.begin(), acc.end(), 0);
    size_t total_size = 0;
    for (uint32_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        for (size_t w = 0; w < words; ++w) acc[w] |= masks[i][w];
        total_size += seeds[i].size_bytes;
      }
    }
    if (acc != target) continue;
    if (count < best_count || (count == best_count && total_size < best_size)) {
      best_count = count;
      best_size = total_size;
      best_mask = mask;
    }
  }

  std::vector<size_t> out;
  for (uint32_t i = 0; i < n; ++i) {
    if (best_mask & (1u << i)) out.push_back(i);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Baseline arms

const char* baseline_name(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::b1: return "baseline1";
    case BaselineKind::b2: return "baseline2";
    case BaselineKind::b3: return "baseline3";
  }
  return "unknown";
}

std::optional<BaselineKind> baseline_from_name(std::string_view name) {
  if (name == "b1" || name == "baseline1") return BaselineKind::b1;
  if (name == "b2" || name == "baseline2") return BaselineKind::b2;
  if (name == "b3" || name == "baseline3") return BaselineKind::b3;
  return std::nullopt;
}

namespace {

size_t count_unique_errors(const std::vector<MeasuredSeed>& seeds) {
  std::set<std::pair<int, int>> unique;
  for (const auto& seed : seeds) {
    if (seed.error) unique.insert({static_cast<int>(seed.error->kind), seed.error->line});
  }
  return unique.size();
}

}  // namespace

BaselineResult run_baseline(BaselineKind kind, const minilang::MiniProgram& program,
                            const CampaignConfig& config, Clock& clock,
                            const BaselineParams& params) {
  BaselineResult result;
  result.termination = "completed";

  SimClock* sim = dynamic_cast<SimClock*>(&clock);
  auto charge = [&](int64_t ms) {
    if (sim != nullptr) sim->advance_ms(ms);
  };

  const int64_t start_ms = clock.now_ms();
  const int64_t limit_ms = static_cast<int64_t>(config.time_limit_s * 1000.0);
  auto elapsed = [&]() { return clock.now_ms() - start_ms; };
  auto out_of_budget = [&]() { return elapsed() >= limit_ms; };
  auto log = [&](std::string type, json fields) {
    result.log.append(elapsed(), std::move(type), std::move(fields));
  };

  Rng rng(config.rng_seed);
  minilang::InputSpec spec = minilang::derive_input_spec(program);

  log("campaign_start", {{"program_id", program.view.program_id},
                         {"arm", baseline_name(kind)},
                         {"executable_lines", program.view.executable.size()},
                         {"config", config.to_json()}});

  auto fresh_random = [&]() {
    charge(params.gen_cost_ms);
    return random_seed(rng, spec, params.random);
  };
  auto measured = [&](TestCase tc, const char* origin) {
    charge(params.exec_cost_ms);
    MeasuredSeed seed = measure_seed(program, std::move(tc), config.step_limit);
    seed.origin = origin;
    seed.at_ms = elapsed();
    return seed;
  };

  std::vector<MeasuredSeed> pool;

  const size_t initial = kind == BaselineKind::b2 ? params.b2_pool
                         : kind == BaselineKind::b1 ? params.b1_seeds
                                                    : params.b3_seeds;
  for (size_t i = 0; i < initial; ++i) {
    if (out_of_budget()) {
      result.termination = "time_limit";
      break;
    }
    pool.push_back(measured(fresh_random(), "random"));
  }

  if (kind == BaselineKind::b3 && result.termination == "completed") {
    CoverageMap pool_union(program.view.program_id,
                           static_cast<int>(program.view.executable.size()));
    for (const auto& seed : pool) pool_union = union_of(pool_union, seed.actual);

    uint64_t iterations = 0;
    for (;;) {
      if (out_of_budget()) {
        result.termination = "time_limit";
        break;
      }
      if (config.max_iterations != 0 && iterations >= config.max_iterations) {
        result.termination = "iteration_limit";
        break;
      }
      ++iterations;
      const MeasuredSeed& parent = pool[rng.index(pool.size())];
      MeasuredSeed child = measured(mutate(parent.test_case, rng), "mutant");
      // Greybox-style keep rule: retain mutants that reach new lines.
      if (strictly_extends(child.actual, pool_union)) {
        pool_union = union_of(pool_union, child.actual);
        log("kept_mutant", {{"canonical", child.test_case.canonical_text},
                            {"pool_size", pool.size() + 1},
                            {"coverage_percent", percent_text(pool_union)}});
        pool.push_back(std::move(child));
      }
    }
    result.mutations_tried = iterations;
  }

  result.pool_size_pre_min = pool.size();
  if (kind == BaselineKind::b1) {
    result.seeds = pool;  // the random set is the ICS, unminimized
  } else {
    result.seeds = cmin_greedy(pool);
  }
  result.elapsed_ms = elapsed();

  CoverageMap final_union(program.view.program_id,
                          static_cast<int>(program.view.executable.size()));
  for (const auto& seed : result.seeds) final_union = union_of(final_union, seed.actual);

  log("campaign_end", {{"arm", baseline_name(kind)},
                       {"program_id", program.view.program_id},
                       {"termination", result.termination},
                       {"seeds", result.seeds.size()},
                       {"pool_size_pre_min", result.pool_size_pre_min},
                       {"mutations_tried", result.mutations_tried},
                       {"cumulative_lines", final_union.count()},
                       {"coverage_percent", percent_text(final_union)},
                       {"elapsed_ms", result.elapsed_ms},
                       {"unique_errors", count_unique_errors(result.seeds)}});
  return result;
}

IcsBundle bundle_from_baseline(BaselineKind kind, const BaselineResult& result,
                               const minilang::MiniProgram& program) {
  IcsBundle bundle;
  bundle.program_id = program.view.program_id;
  bundle.arm = baseline_name(kind);
  bundle.coverage_kind = "actual";
  bundle.cumulative =
      CoverageMap(program.view.program_id, static_cast<int>(program.view.executable.size()));
  for (const auto& seed : result.seeds) {
    bundle.cumulative = union_of(bundle.cumulative, seed.actual);
    bundle.seeds.push_back({seed.test_case, seed.origin, seed.actual, seed.error, seed.at_ms});
  }
  bundle.stats = {{"termination", result.termination},
                  {"elapsed_ms", result.elapsed_ms},
                  {"pool_size_pre_min", result.pool_size_pre_min},
                  {"mutations_tried", result.mutations_tried},
                  {"unique_errors", count_unique_errors(result.seeds)}};
  return bundle;
}

}  // namespace seedsmith
