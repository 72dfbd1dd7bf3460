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

#include "metahunt/hdl/ast.hpp"

namespace metahunt::hdl {

// Checks every subset rule and throws ValidationError on the first
// violation:
//   unique-modules, top-exists, unique-signals, width-range, declared,
//   const-width, bit-select, concat-width, assign-target, always-target,
//   blocking-style, clock-port, instance-module, instance-ports,
//   single-driver, acyclic-instances, comb-loop.
void validate(const Design& d);

// True when validate(d) would not throw.
bool is_valid(const Design& d);

// Names read somewhere in `m` but driven by no item and not an input port.
std::vector<std::string> undriven_reads(const Design& d, const Module& m);

}  // namespace metahunt::hdl
