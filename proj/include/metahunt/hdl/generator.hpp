// Copyright 2026 The Metahunt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "metahunt/hdl/ast.hpp"
#include "metahunt/rng.hpp"

namespace metahunt::hdl {

enum class SizeProfile { Small, Medium, Large };

SizeProfile parse_size_profile(const std::string& name);
const char* to_string(SizeProfile p);

// Statement budget per profile (items plus nested statements).
std::size_t statement_budget(SizeProfile p);

struct Operand {
  std::string name;
  int width = 1;
};

struct ExprOptions {
  int max_depth = 4;
  // Deepest ternary nesting the generator may produce.
  int max_ternary_depth = 2;
  // Relative weight of ternary nodes among interior nodes.
  double ternary_weight = 1.0;
  // Emit $signed/$unsigned casts.
  bool casts = false;
  int max_width = 16;
};

// Random expression trees over a fixed operand set. Never produces a
// self-cancelling XOR or a constant shift amount at or above the shifted
// operand's width.
class ExprGenerator {
 public:
  ExprGenerator(Rng& rng, std::vector<Operand> operands, ExprOptions opts);

  // Expression of depth <= opts.max_depth; returns (expr, width).
  std::pair<Expr, int> generate();
  std::pair<Expr, int> generate(int depth, int ternary_budget);
  std::pair<Expr, int> leaf();

 private:
  std::pair<Expr, int> interior(int depth, int ternary_budget);

  Rng& rng_;
  std::vector<Operand> operands_;
  ExprOptions opts_;
};

// Random valid single-clock design. Small designs have at most 10 bits of
// non-clock input so exhaustive simulation stays cheap.
Design gen_seed(std::uint64_t rng_seed, SizeProfile profile);

}  // namespace metahunt::hdl
