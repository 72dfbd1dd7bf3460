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

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "metahunt/error.hpp"
#include "metahunt/hdl/ast.hpp"
#include "metahunt/metamorph/metamorph.hpp"

namespace metahunt::reduce {

class NotFailing : public Error {
 public:
  using Error::Error;
};

class FlakyPredicate : public Error {
 public:
  using Error::Error;
};

// True when the design still shows the failure.
using Predicate = std::function<bool(const hdl::Design&)>;

struct ReduceOptions {
  std::size_t max_evaluations = 500;
};

struct ReduceResult {
  hdl::Design design;
  std::size_t evaluations = 0;
  // Set when the evaluation cap was hit or a single removal still fails.
  bool non_minimal = false;
  std::vector<std::string> log;
};

// ddmin over modules, then module items, then statements inside always
// blocks, restarting from the top after any progress. Candidates that fail
// validation count as passing and cost no evaluation. Throws NotFailing and
// FlakyPredicate.
ReduceResult reduce(const hdl::Design& d, const Predicate& p, const ReduceOptions& opts = {});

// Number of removable units: non-top modules plus items of every module.
std::size_t item_count(const hdl::Design& d);

// Designs obtained by deleting exactly one item (or one non-top module
// together with its instances); invalid results are dropped.
std::vector<hdl::Design> single_removals(const hdl::Design& d);

// No single removal keeps the failure.
bool is_one_minimal(const hdl::Design& d, const Predicate& p);

// Stable duplicate key. Crashes key on the triage cluster; inconsistencies on
// the lineage link that first exposes them.
std::string crash_signature(int cluster);
std::string inconsistency_signature(const metamorph::MutationRecord& culprit);

// Index of the first lineage link whose prefix makes `fails` true, assuming
// failure is monotone in prefix length; lineage.size() when none does.
std::size_t bisect_lineage(const hdl::Design& seed, const std::vector<metamorph::MutationRecord>& lineage,
                           const Predicate& fails, const metamorph::PayloadOptions& opts = {});

}  // namespace metahunt::reduce
