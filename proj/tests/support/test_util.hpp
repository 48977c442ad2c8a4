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

#ifndef SEEDSMITH_TESTS_SUPPORT_TEST_UTIL_HPP
#define SEEDSMITH_TESTS_SUPPORT_TEST_UTIL_HPP

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "core/coverage.hpp"
#include "core/minilang.hpp"
#include "core/rng.hpp"
#include "core/testcase.hpp"

namespace testutil {

inline std::filesystem::path fixtures_dir() { return SEEDSMITH_FIXTURES_DIR; }

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

inline seedsmith::minilang::MiniProgram load_fixture_program(const std::string& name) {
  auto path = fixtures_dir() / "programs" / name;
  return seedsmith::minilang::parse_program(read_file(path),
                                            std::filesystem::path(name).stem().string());
}

/// Synthetic program where every line is executable; enough for coverage
/// algebra tests that never execute anything.
inline seedsmith::Program synthetic_program(const std::string& id, int lines) {
  seedsmith::Program p;
  p.program_id = id;
  for (int i = 1; i <= lines; ++i) {
    p.source_lines.push_back("stmt " + std::to_string(i));
    p.executable.insert(i);
  }
  return p;
}

inline std::set<int> random_lines(seedsmith::Rng& rng, int max_line, double density = 0.4) {
  std::set<int> out;
  for (int line = 1; line <= max_line; ++line) {
    if (rng.chance(density)) out.insert(line);
  }
  return out;
}

inline seedsmith::CoverageMap random_map(seedsmith::Rng& rng, const seedsmith::Program& p,
                                         double density = 0.4) {
  return seedsmith::CoverageMap(p.program_id, static_cast<int>(p.executable.size()),
                                random_lines(rng, p.line_count(), density));
}

/// Random token list: ints, the occasional word, 0..6 tokens.
inline seedsmith::TestCase random_input(seedsmith::Rng& rng) {
  static const std::vector<std::string> kWords = {"x", "abc", "S", "NaN"};
  std::vector<std::string> tokens;
  size_t n = rng.index(7);
  for (size_t i = 0; i < n; ++i) {
    if (rng.chance(0.15)) {
      tokens.push_back(rng.pick(kWords));
    } else {
      tokens.push_back(std::to_string(rng.range(-50, 400)));
    }
  }
  return seedsmith::TestCase::from_tokens(std::move(tokens));
}

// ---------------------------------------------------------------------------
// Random MiniLang program generator. Builds an AST directly, with statement
// line numbers assigned exactly the way the serializer lays text out
// (markers consume a line each, no blank gaps), so parse(serialize(ast))
// must reproduce the tree bit for bit. Loops are generated as bounded
// counters so most programs terminate without hitting the step limit.
class ProgramGen {
 public:
  explicit ProgramGen(seedsmith::Rng& rng) : rng_(rng) {}

  seedsmith::minilang::MiniProgram generate(const std::string& id) {
    using namespace seedsmith::minilang;
    next_line_ = 1;
    scalars_ = {"a", "b"};
    arrays_.clear();
    counter_ = 0;

    MiniProgram program;
    // Seed the scalar pool so expressions always have something to mention.
    program.statements.push_back(read_stmt("a"));
    program.statements.push_back(read_stmt("b"));
    int budget = 3 + static_cast<int>(rng_.index(8));
    gen_block(program.statements, budget, 0);
    program.statements.push_back(print_stmt());

    std::string text = serialize(program);
    return parse_program(text, id);
  }

 private:
  using Stmt = seedsmith::minilang::Stmt;
  using StmtPtr = seedsmith::minilang::StmtPtr;
  using Expr = seedsmith::minilang::Expr;
  using ExprPtr = seedsmith::minilang::ExprPtr;

  ExprPtr int_lit(int64_t v) {
    auto e = std::make_unique<Expr>();
    e->kind = Expr::Kind::int_lit;
    e->int_value = v;
    return e;
  }

  ExprPtr var(const std::string& name) {
    auto e = std::make_unique<Expr>();
    e->kind = Expr::Kind::var;
    e->text = name;
    return e;
  }

  ExprPtr binary(seedsmith::minilang::BinOp op, ExprPtr l, ExprPtr r) {
    auto e = std::make_unique<Expr>();
    e->kind = Expr::Kind::binary;
    e->bin = op;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
  }

  ExprPtr rand_expr(int depth) {
    using seedsmith::minilang::BinOp;
    if (depth <= 0 || rng_.chance(0.4)) {
      if (rng_.chance(0.5)) return int_lit(rng_.range(-20, 20));
      return var(scalars_[rng_.index(scalars_.size())]);
    }
    if (!arrays_.empty() && rng_.chance(0.2)) {
      auto e = std::make_unique<Expr>();
      e->kind = Expr::Kind::index;
      e->text = arrays_[rng_.index(arrays_.size())];
      e->lhs = int_lit(static_cast<int64_t>(rng_.index(4)));
      return e;
    }
    static const BinOp kOps[] = {BinOp::add, BinOp::sub, BinOp::mul, BinOp::div,
                                 BinOp::mod, BinOp::lt,  BinOp::gt,  BinOp::eq};
    BinOp op = kOps[rng_.index(8)];
    return binary(op, rand_expr(depth - 1), rand_expr(depth - 1));
  }

  StmtPtr make(Stmt::Kind kind) {
    auto s = std::make_unique<Stmt>();
    s->kind = kind;
    s->line = next_line_++;
    return s;
  }

  StmtPtr read_stmt(const std::string& name) {
    auto s = make(rng_.chance(0.8) ? Stmt::Kind::read_int : Stmt::Kind::read_str);
    s->name = name;
    return s;
  }

  StmtPtr print_stmt() {
    auto s = make(Stmt::Kind::print);
    s->expr_a = rand_expr(2);
    return s;
  }

  std::string fresh_name() { return "v" + std::to_string(counter_++); }

  void gen_block(std::vector<StmtPtr>& out, int budget, int depth) {
    while (budget > 0) {
      double roll = rng_.unit();
      if (roll < 0.25) {
        auto s = make(Stmt::Kind::assign_var);
        std::string name = rng_.chance(0.5) ? scalars_[rng_.index(scalars_.size())] : fresh_name();
        if (std::find(scalars_.begin(), scalars_.end(), name) == scalars_.end()) {
          scalars_.push_back(name);
        }
        s->name = name;
        s->expr_a = rand_expr(2);
        out.push_back(std::move(s));
        budget -= 1;
      } else if (roll < 0.4) {
        out.push_back(print_stmt());
        budget -= 1;
      } else if (roll < 0.5) {
        std::string name = fresh_name();
        scalars_.push_back(name);
        out.push_back(read_stmt(name));
        budget -= 1;
      } else if (roll < 0.65 && depth < 2) {
        // if / else
        auto s = make(Stmt::Kind::if_stmt);
        s->expr_a = rand_expr(2);
        gen_block(s->body, 1 + static_cast<int>(rng_.index(2)), depth + 1);
        if (rng_.chance(0.5)) {
          ++next_line_;  // 'else' marker occupies a line
          gen_block(s->else_body, 1 + static_cast<int>(rng_.index(2)), depth + 1);
        }
        ++next_line_;  // 'end'
        out.push_back(std::move(s));
        budget -= 2;
      } else if (roll < 0.75 && depth < 2) {
        // bounded counter loop: i = 0; while i < k { ...; i = i + 1 }
        std::string i = fresh_name();
        scalars_.push_back(i);
        auto init = make(Stmt::Kind::assign_var);
        init->name = i;
        init->expr_a = int_lit(0);
        out.push_back(std::move(init));
        auto loop = make(Stmt::Kind::while_stmt);
        loop->expr_a = binary(seedsmith::minilang::BinOp::lt, var(i),
                              int_lit(1 + static_cast<int64_t>(rng_.index(4))));
        gen_block(loop->body, 1 + static_cast<int>(rng_.index(2)), depth + 1);
        auto step = make(Stmt::Kind::assign_var);
        step->name = i;
        step->expr_a = binary(seedsmith::minilang::BinOp::add, var(i), int_lit(1));
        loop->body.push_back(std::move(step));
        ++next_line_;  // 'end'
        out.push_back(std::move(loop));
        budget -= 2;
      } else if (roll < 0.85) {
        std::string name = fresh_name();
        arrays_.push_back(name);
        auto s = make(Stmt::Kind::arr_decl);
        s->name = name;
        s->expr_a = int_lit(2 + static_cast<int64_t>(rng_.index(4)));
        out.push_back(std::move(s));
        budget -= 1;
      } else if (!arrays_.empty()) {
        auto s = make(Stmt::Kind::assign_index);
        s->name = arrays_[rng_.index(arrays_.size())];
        s->expr_a = int_lit(static_cast<int64_t>(rng_.index(4)));
        s->expr_b = rand_expr(1);
        out.push_back(std::move(s));
        budget -= 1;
      } else {
        std::string name = fresh_name();
        scalars_.push_back(name);
        out.push_back(read_stmt(name));
        budget -= 1;
      }
    }
  }

  seedsmith::Rng& rng_;
  int next_line_ = 1;
  int counter_ = 0;
  std::vector<std::string> scalars_;
  std::vector<std::string> arrays_;
};

}  // namespace testutil

#endif  // SEEDSMITH_TESTS_SUPPORT_TEST_UTIL_HPP
