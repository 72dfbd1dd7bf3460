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

#include <string>
#include <utility>
#include <vector>

#include "metahunt/hdl/ast.hpp"

namespace metahunt::hdl {

// Canonical text: one statement per line, two-space indent, fully
// parenthesised operators, sized constants, modules in design order.
std::string print(const Design& d);
std::string print(const Module& m);
std::string print(const Expr& e);

struct SourceFile {
  std::string name;
  std::string text;

  bool operator==(const SourceFile&) const = default;
};

// Splits the design by each module's origin file. The file holding the top
// module comes first and `include`s the others. Modules without an origin
// file land in `main_name`.
std::vector<SourceFile> print_files(const Design& d, const std::string& main_name = "top.v");

}  // namespace metahunt::hdl
