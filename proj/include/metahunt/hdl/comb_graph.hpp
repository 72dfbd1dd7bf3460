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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "metahunt/hdl/ast.hpp"

namespace metahunt::hdl {

// Signal-level combinational dependency graph of one module. Registers
// written by always_ff blocks are sources; instances contribute edges from
// their input connections to the output connections they combinationally
// depend on.
struct CombGraph {
  std::map<std::string, std::set<std::string>> deps;   // signal -> signals it reads
  std::map<std::string, std::set<std::string>> users;  // signal -> signals reading it
};

CombGraph build_comb_graph(const Design& d, const Module& m);

// For each output port of `m`, the input ports it combinationally depends on.
std::map<std::string, std::set<std::string>> comb_port_deps(const Design& d, const Module& m);

// A combinational cycle through the module's signals, if any.
std::optional<std::vector<std::string>> find_comb_cycle(const CombGraph& g);

}  // namespace metahunt::hdl
