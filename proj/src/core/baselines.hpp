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
// Comparison arms: pure random seed generation, random generation plus
// coverage-preserving minimization, and random seeds plus a mutation loop
// plus minimization. The minimizer is classical greedy set cover with
// smaller-seed tie-breaking and an irredundancy prune, with an exhaustive
// oracle for testing it.

#ifndef SEEDSMITH_CORE_BASELINES_HPP
#define SEEDSMITH_CORE_BASELINES_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "core/clock.hpp"
#include "core/minilang.hpp"
#include "core/orchestrator.hpp"
#include "core/rng.hpp"
#include "core/testcase.hpp"

namespace seedsmith {

/// A test case with its *executed* coverage (baselines measure by running,
/// never by prediction).
struct MeasuredSeed {
  TestCase test_case;
  CoverageMap actual;
  minilang::ExecutionOutcome::Status status = minilang::ExecutionOutcome::Status::normal;
  std::optional<minilang::RuntimeError> error;
  size_t size_bytes = 0;
  std::string origin = "random";  // "random" or "mutant"
  int64_t at_ms = 0;              // when the seed entered the pool
};

MeasuredSeed measure_seed(const minilang::MiniProgram& program, TestCase tc,
                          uint64_t step_limit = minilang::kDefaultStepLimit);

struct RandomSeedParams {
  int64_t int_min = -100;
  int64_t int_max = 1000;
  double non_numeric_p = 0.05;
  size_t loop_extra_max = 8;  // extra draws for reads that sit inside loops
};

/// Draws one random test case shaped by the program's read statements.
TestCase random_seed(Rng& rng, const minilang::InputSpec& spec,
                     const RandomSeedParams& params = {});

/// One mutation drawn from {integer +/- delta, token replacement, token
/// duplication, token deletion, boundary substitution (0, -1, int64 max)}.
/// Never returns an empty case: a deletion that would empty it is resampled
/// into a fresh random token.
TestCase mutate(const TestCase& tc, Rng& rng);

/// Greedy coverage-preserving minimization: repeatedly picks the seed adding
/// the most uncovered lines (ties to smaller size_bytes, then earlier
/// position), then prunes seeds whose coverage the rest already provides.
/// Output union coverage equals input union coverage and the output is
/// irredundant. Input order is preserved.
std::vector<MeasuredSeed> cmin_greedy(const std::vector<MeasuredSeed>& seeds);

/// Exhaustive smallest coverage-preserving subset (ties by total
/// size_bytes); the test oracle for cmin_greedy. Throws OracleTooLarge when
/// |seeds| > 20. Returns indices into `seeds`.
std::vector<size_t> exact_min_cover(const std::vector<MeasuredSeed>& seeds);

enum class BaselineKind { b1, b2, b3 };

const char* baseline_name(BaselineKind kind);
std::optional<BaselineKind> baseline_from_name(std::string_view name);

struct BaselineParams {
  size_t b1_seeds = 5;
  size_t b2_pool = 50;
  size_t b3_seeds = 5;
  RandomSeedParams random;
  // Simulated unit costs, charged when the clock is a SimClock.
  int64_t gen_cost_ms = 1;
  int64_t exec_cost_ms = 50;
};

struct BaselineResult {
  std::vector<MeasuredSeed> seeds;  // the final ICS
  size_t pool_size_pre_min = 0;
  CampaignLog log;
  int64_t elapsed_ms = 0;
  std::string termination;
  uint64_t mutations_tried = 0;  // b3 only
};

/// b1: exactly 5 random seeds, no minimization. b2: 50 random seeds,
/// execute all, minimize. b3: 5 random seeds, then mutate/execute/keep-if-
/// coverage-novel until the budget, then minimize. Fully reproducible from
/// (config.rng_seed, params).
BaselineResult run_baseline(BaselineKind kind, const minilang::MiniProgram& program,
                            const CampaignConfig& config, Clock& clock,
                            const BaselineParams& params = {});

IcsBundle bundle_from_baseline(BaselineKind kind, const BaselineResult& result,
                               const minilang::MiniProgram& program);

}  // namespace seedsmith

#endif  // SEEDSMITH_CORE_BASELINES_HPP
