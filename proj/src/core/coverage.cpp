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

#include "core/coverage.hpp"

#include <algorithm>

#include "core/errors.hpp"

namespace seedsmith {

std::string Program::source_text() const {
  std::string out;
  for (const auto& line : source_lines) {
    out += line;
    out += '\n';
  }
  return out;
}

void Program::validate() const {
  for (int line : executable) {
    if (line < 1 || line > line_count()) {
      throw Error("program '" + program_id + "': executable line " + std::to_string(line) +
                  " outside source of " + std::to_string(line_count()) + " lines");
    }
  }
}

CoverageMap::CoverageMap(std::string program_id, int denominator, std::set<int> covered)
    : program_id_(std::move(program_id)), denominator_(denominator), covered_(std::move(covered)) {
  if (denominator_ < 0) throw Error("coverage denominator must be non-negative");
  if (covered_.size() > static_cast<size_t>(denominator_)) {
    throw Error("coverage map for '" + program_id_ + "' covers more lines than its denominator");
  }
}

CoverageMap CoverageMap::empty_for(const Program& p) {
  return CoverageMap(p.program_id, static_cast<int>(p.executable.size()));
}

CoverageMap CoverageMap::for_program(const Program& p, std::set<int> covered) {
  for (int line : covered) {
    if (!p.is_executable(line)) {
      throw Error("coverage map for '" + p.program_id + "' marks non-executable line " +
                  std::to_string(line));
    }
  }
  return CoverageMap(p.program_id, static_cast<int>(p.executable.size()), std::move(covered));
}

namespace {

void require_same_program(const CoverageMap& a, const CoverageMap& b, const char* op) {
  if (a.program_id() != b.program_id() || a.denominator() != b.denominator()) {
    throw ProgramMismatch(std::string(op) + ": maps for '" + a.program_id() + "' (" +
                          std::to_string(a.denominator()) + " lines) and '" + b.program_id() +
                          "' (" + std::to_string(b.denominator()) + " lines)");
  }
}

}  // namespace

CoverageMap union_of(const CoverageMap& a, const CoverageMap& b) {
  require_same_program(a, b, "union");
  std::set<int> merged = a.covered();
  merged.insert(b.covered().begin(), b.covered().end());
  return CoverageMap(a.program_id(), a.denominator(), std::move(merged));
}

bool strictly_extends(const CoverageMap& pred, const CoverageMap& cum) {
  require_same_program(pred, cum, "strictly_extends");
  return std::any_of(pred.covered().begin(), pred.covered().end(),
                     [&](int line) { return !cum.contains(line); });
}

Rational percent(const CoverageMap& cov) {
  if (cov.denominator() == 0) {
    throw DegenerateProgram("program '" + cov.program_id() + "' has no executable lines");
  }
  return Rational(100 * static_cast<int64_t>(cov.count()), cov.denominator());
}

std::string percent_text(const CoverageMap& cov) {
  return percent(cov).to_decimal(2, Rational::Round::trunc);
}

std::string AnnotatedListing::to_text() const {
  std::string out;
  for (const auto& line : lines) {
    out += line.marker;
    out += ' ';
    out += line.text;
    out += '\n';
  }
  return out;
}

AnnotatedListing render_annotated(const Program& p, const CoverageMap& cov) {
  if (cov.program_id() != p.program_id ||
      cov.denominator() != static_cast<int>(p.executable.size())) {
    throw ProgramMismatch("render_annotated: coverage for '" + cov.program_id() +
                          "' against program '" + p.program_id + "'");
  }
  AnnotatedListing listing;
  listing.lines.reserve(p.source_lines.size());
  for (int line = 1; line <= p.line_count(); ++line) {
    char marker = ' ';
    if (p.is_executable(line)) marker = cov.contains(line) ? '>' : '!';
    listing.lines.push_back({marker, p.source_lines[static_cast<size_t>(line - 1)]});
  }
  return listing;
}

CoverageMap parse_annotated(std::string_view text, const Program& p) {
  std::vector<std::string_view> lines;
  size_t start = 0;
  while (start <= text.size()) {
    size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }

  if (static_cast<int>(lines.size()) != p.line_count()) {
    throw PredictionParseError("annotated listing has " + std::to_string(lines.size()) +
                               " lines, program '" + p.program_id + "' has " +
                               std::to_string(p.line_count()));
  }

  std::set<int> covered;
  for (int line = 1; line <= p.line_count(); ++line) {
    std::string_view row = lines[static_cast<size_t>(line - 1)];
    // An annotated blank non-executable line may legitimately be just " "
    // with the trailing pad space stripped by a forwarding layer; everything
    // else needs the full two-character prefix.
    char marker;
    if (row.size() >= 2 && row[1] == ' ') {
      marker = row[0];
    } else if (row.size() == 1) {
      marker = row[0];
    } else if (row.empty()) {
      marker = ' ';
    } else {
      throw PredictionParseError("line " + std::to_string(line) + ": missing marker prefix");
    }

    bool executable = p.is_executable(line);
    switch (marker) {
      case '>':
        if (!executable) {
          throw PredictionParseError("line " + std::to_string(line) +
                                     ": '>' on a non-executable line");
        }
        covered.insert(line);
        break;
      case '!':
        if (!executable) {
          throw PredictionParseError("line " + std::to_string(line) +
                                     ": '!' on a non-executable line");
        }
        break;
      case ' ':
        if (executable) {
          throw PredictionParseError("line " + std::to_string(line) +
                                     ": executable line carries no coverage marker");
        }
        break;
      default:
        throw PredictionParseError("line " + std::to_string(line) + ": unknown marker '" +
                                   std::string(1, marker) + "'");
    }
  }
  return CoverageMap(p.program_id, static_cast<int>(p.executable.size()), std::move(covered));
}

}  // namespace seedsmith
