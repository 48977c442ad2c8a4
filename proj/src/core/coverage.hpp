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
// Programs as sets of executable lines, plus the statement-coverage algebra
// everything else is built on: union, strict extension, exact percentages,
// and the two-character annotated listing exchanged with model providers.

#ifndef SEEDSMITH_CORE_COVERAGE_HPP
#define SEEDSMITH_CORE_COVERAGE_HPP

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "core/rational.hpp"

namespace seedsmith {

enum class LanguageTag { minilang, external };

/// A subject program reduced to what coverage bookkeeping needs: its source
/// text (1-based lines) and the subset of lines that hold statements.
struct Program {
  std::string program_id;
  std::vector<std::string> source_lines;
  std::set<int> executable;  // 1-based line indices
  LanguageTag language_tag = LanguageTag::minilang;

  int line_count() const { return static_cast<int>(source_lines.size()); }
  bool is_executable(int line) const { return executable.count(line) > 0; }
  std::string source_text() const;  // lines joined with '\n', trailing newline

  /// Throws Error if the executable set references lines outside the source.
  void validate() const;
};

/// A fixed-denominator set of covered lines. The denominator is the number of
/// executable lines of the owning program, so percentage comparisons are
/// meaningful across maps of the same program and nothing else.
class CoverageMap {
 public:
  CoverageMap() : denominator_(0) {}
  CoverageMap(std::string program_id, int denominator, std::set<int> covered = {});

  static CoverageMap empty_for(const Program& p);
  /// Validates covered ⊆ p.executable.
  static CoverageMap for_program(const Program& p, std::set<int> covered);

  const std::string& program_id() const { return program_id_; }
  int denominator() const { return denominator_; }
  const std::set<int>& covered() const { return covered_; }
  size_t count() const { return covered_.size(); }
  bool contains(int line) const { return covered_.count(line) > 0; }
  bool operator==(const CoverageMap& o) const {
    return program_id_ == o.program_id_ && denominator_ == o.denominator_ && covered_ == o.covered_;
  }

 private:
  std::string program_id_;
  int denominator_;
  std::set<int> covered_;
};

/// Set union; both maps must belong to the same program.
CoverageMap union_of(const CoverageMap& a, const CoverageMap& b);

/// True iff adding `pred` to `cum` covers strictly more lines.
bool strictly_extends(const CoverageMap& pred, const CoverageMap& cum);

/// Exact 100 * covered / denominator. Throws DegenerateProgram on a zero
/// denominator.
Rational percent(const CoverageMap& cov);

/// Two-decimal rendering of percent(). Truncates rather than rounds, so a
/// map is displayed as "100.00" only when it is exactly complete
/// (37 of 38 renders as "97.36").
std::string percent_text(const CoverageMap& cov);

struct AnnotatedLine {
  char marker;  // '>', '!' or ' '
  std::string text;
  bool operator==(const AnnotatedLine& o) const = default;
};

/// Per-line coverage markers: '>' covered, '!' executable-but-uncovered,
/// ' ' non-executable. Line order matches the program source.
struct AnnotatedListing {
  std::vector<AnnotatedLine> lines;

  /// Marker, one space, the original line text, '\n'. Every line is
  /// terminated, including the last, with no extra padding.
  std::string to_text() const;

  bool operator==(const AnnotatedListing& o) const = default;
};

AnnotatedListing render_annotated(const Program& p, const CoverageMap& cov);

/// Inverse of render_annotated().to_text(). Throws PredictionParseError on a
/// line-count mismatch, an unknown marker, a missing marker/space prefix, or
/// a marker that contradicts the line's executability.
CoverageMap parse_annotated(std::string_view text, const Program& p);

}  // namespace seedsmith

#endif  // SEEDSMITH_CORE_COVERAGE_HPP
