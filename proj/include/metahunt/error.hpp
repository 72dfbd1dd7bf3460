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
#include <stdexcept>
#include <string>

namespace metahunt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Byte offset plus 1-based line/column of a diagnostic.
struct SourcePos {
  std::size_t offset = 0;
  int line = 1;
  int column = 1;
};

class SyntaxError : public Error {
 public:
  SyntaxError(SourcePos pos, std::string expected, const std::string& message)
      : Error(message), pos_(pos), expected_(std::move(expected)) {}

  const SourcePos& pos() const { return pos_; }
  const std::string& expected() const { return expected_; }

 private:
  SourcePos pos_;
  std::string expected_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string rule, std::string where, const std::string& message)
      : Error(message), rule_(std::move(rule)), where_(std::move(where)) {}

  // Short stable rule name, e.g. "single-driver".
  const std::string& rule() const { return rule_; }
  // Module (and item) the violation was found in.
  const std::string& where() const { return where_; }

 private:
  std::string rule_;
  std::string where_;
};

class ElaborationError : public Error {
 public:
  using Error::Error;
};

// Internal inconsistency in the simulator; indicates a framework bug.
class WidthError : public Error {
 public:
  using Error::Error;
};

class InterfaceMismatch : public Error {
 public:
  using Error::Error;
};

// A metamorphic strategy could not be applied to the given design.
// reason(): NoInsertionSite, NoWrappableRegion or NoExtractableRegion.
class StrategyInapplicable : public Error {
 public:
  StrategyInapplicable(std::string reason, const std::string& msg) : Error(msg), reason_(std::move(reason)) {}
  const std::string& reason() const { return reason_; }

 private:
  std::string reason_;
};

}  // namespace metahunt
