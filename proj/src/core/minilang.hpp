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
// MiniLang: a deterministic little imperative language with a tracing
// interpreter. It stands in for real subject programs so that coverage and
// runtime errors have an in-process ground truth.
//
// Grammar (one statement per line, '#' starts a full-line comment):
//   read_int x | read_str x | arr a[expr] | x = expr | a[expr] = expr
//   if expr ... [else ...] end | while expr ... end | print expr
// Expressions: integer and "string" literals, variables, a[e],
//   + - * / %, == != < <= > >=, and or not, unary -, to_int(e), len(e).

#ifndef SEEDSMITH_CORE_MINILANG_HPP
#define SEEDSMITH_CORE_MINILANG_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/coverage.hpp"
#include "core/testcase.hpp"

namespace seedsmith::minilang {

enum class RuntimeErrorKind {
  input_mismatch,     // read_int saw a token that is not a 64-bit integer
  input_exhausted,    // a read past the end of the input stream
  arithmetic,         // divide/modulo by zero, signed-64 overflow, invalid operand
  number_format,      // to_int on a non-numeric string
  index_out_of_bounds // array index outside [0, len), or a bad array size
};

const char* error_kind_name(RuntimeErrorKind kind);
std::optional<RuntimeErrorKind> error_kind_from_name(std::string_view name);

struct RuntimeError {
  RuntimeErrorKind kind;
  int line;  // 1-based line of the statement that raised it
  bool operator==(const RuntimeError& o) const = default;
};

// ---------------------------------------------------------------------------
// AST

enum class BinOp { add, sub, mul, div, mod, eq, ne, lt, le, gt, ge, logic_and, logic_or };
enum class UnOp { neg, logic_not };

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  enum class Kind { int_lit, str_lit, var, index, binary, unary, to_int, len };
  Kind kind;
  int64_t int_value = 0;
  std::string text;  // str_lit value or var/array name
  BinOp bin = BinOp::add;
  UnOp un = UnOp::neg;
  ExprPtr lhs, rhs;  // index: lhs = subscript; unary/to_int/len: lhs = operand
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Stmt {
  enum class Kind { read_int, read_str, arr_decl, assign_var, assign_index, if_stmt, while_stmt, print };
  Kind kind;
  int line = 0;
  std::string name;   // target variable or array
  ExprPtr expr_a;     // array size, index, condition, printed value
  ExprPtr expr_b;     // assigned value for assign_index
  std::vector<StmtPtr> body;
  std::vector<StmtPtr> else_body;  // if_stmt only
};

struct MiniProgram {
  Program view;  // coverage-model view: id, source lines, executable set
  std::vector<StmtPtr> statements;
};

/// Parses source text. Executable lines are exactly the lines holding
/// statements; comments, blanks and `else`/`end` markers are non-executable.
/// Throws ParseError with the offending 1-based line.
MiniProgram parse_program(std::string_view text, std::string program_id);

/// Canonical re-rendering. Statements keep their recorded line numbers
/// (gaps become blank lines), so parse(serialize(p)) reproduces the exact
/// statement tree including line annotations.
std::string serialize(const MiniProgram& p);

bool ast_equal(const MiniProgram& a, const MiniProgram& b);

// ---------------------------------------------------------------------------
// Execution

struct ExecutionOutcome {
  enum class Status { normal, runtime_error, step_limit_exceeded };

  CoverageMap covered;
  Status status = Status::normal;
  std::optional<RuntimeError> error;  // present iff status == runtime_error
  std::string output;
  uint64_t steps = 0;
  size_t tokens_consumed = 0;

  bool operator==(const ExecutionOutcome& o) const = default;
};

const char* status_name(ExecutionOutcome::Status status);

inline constexpr uint64_t kDefaultStepLimit = 1'000'000;

/// Deterministic tracing execution. A statement's line is marked covered the
/// moment the statement begins evaluating, so on a runtime error the erroring
/// line is always part of the covered set. Runtime errors are data in the
/// outcome, never C++ exceptions.
ExecutionOutcome execute(const MiniProgram& p, const TestCase& input,
                         uint64_t step_limit = kDefaultStepLimit);

// ---------------------------------------------------------------------------
// Input shape

enum class TokenKind { integer, text };

struct InputSlot {
  TokenKind kind;
  std::string var;
  int line;
  bool in_loop;
};

using InputSpec = std::vector<InputSlot>;

/// Static scan of the read statements, in source order. Reads inside loops
/// are flagged so generators know the real token count is input-dependent.
InputSpec derive_input_spec(const MiniProgram& p);

/// Deterministic prose description of the input format, for prompts.
std::string describe_input_format(const InputSpec& spec);

}  // namespace seedsmith::minilang

#endif  // SEEDSMITH_CORE_MINILANG_HPP
