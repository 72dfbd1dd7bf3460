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
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "metahunt/error.hpp"
#include "metahunt/hdl/ast.hpp"
#include "metahunt/sim/sim.hpp"

namespace metahunt::difftest {

class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class ToolKind { Synthesizer, Simulator, Mock };
const char* to_string(ToolKind k);

// Invocation template: `cmd args...` with {input} and {outdir} substituted.
struct ToolAdapter {
  std::string name;
  std::string cmd;
  std::vector<std::string> args;
  int timeout_s = 60;
  ToolKind kind = ToolKind::Synthesizer;
};

// Throws ConfigError on timeout < 1 or a template without {input}.
void validate(const ToolAdapter& t);
void to_json(nlohmann::json& j, const ToolAdapter& t);
void from_json(const nlohmann::json& j, ToolAdapter& t);
std::vector<ToolAdapter> load_adapters(const std::filesystem::path& file);

struct RunOutcome {
  enum class Kind { Success, Crash, Timeout, ToolMissing };

  Kind kind = Kind::Success;
  int exit_code = 0;
  int signal = 0;
  std::string log;
  std::string artifact_digest;
  // Netlist produced by the tool, when it wrote one.
  std::filesystem::path netlist;
};
const char* to_string(RunOutcome::Kind k);

enum class MockBug { ZeroWidthSignExt, DeepTernaryCrash, ShiftConstFold };
const char* to_string(MockBug b);

struct MockBugProfile {
  bool zero_width_sign_ext = false;
  bool deep_ternary_crash = false;
  bool shift_const_fold = false;

  bool empty() const { return !zero_width_sign_ext && !deep_ternary_crash && !shift_const_fold; }
  bool has(MockBug b) const;
  void set(MockBug b, bool on = true);
  static MockBugProfile all();
  // Comma-separated bug names; "" or "none" is the empty profile.
  static MockBugProfile parse(const std::string& s);
  std::string to_string() const;
  bool operator==(const MockBugProfile&) const = default;
};

// Top module with every instance inlined: submodule internals become
// `<instance>__<name>`, ports are replaced by the connected parent signals.
hdl::Module flatten(const hdl::Design& d);

// Ternary nesting depth after inlining every continuous-assign wire that
// is read exactly once within the module.
int effective_ternary_depth(const hdl::Module& m);
// Same, on the flattened design.
int effective_ternary_depth(const hdl::Design& d);

inline constexpr int kCrashDepth = 5;

struct MockResult {
  RunOutcome outcome;
  std::optional<hdl::Design> netlist;
  // Number of expressions the active profile rewrote.
  int rewrites = 0;
};

// In-process stand-in for a synthesis tool. The netlist is the input design
// with the profile's miscompiles applied.
MockResult mock_synthesize(const hdl::Design& d, const MockBugProfile& profile);

struct TestCase {
  std::filesystem::path dir;
  std::filesystem::path main;
};

// Writes the design's files into `dir` (created if needed).
TestCase materialize(const hdl::Design& d, const std::filesystem::path& dir);

// Runs the adapter on the case inside `scratch` (recreated empty). Mock
// adapters run in-process; their args carry `--bugs=<profile>`.
RunOutcome run_tool(const ToolAdapter& t, const TestCase& c, const std::filesystem::path& scratch);

struct Divergence {
  std::size_t stimulus = 0;
  std::size_t cycle = 0;
  std::string port;
  sim::u64 expected = 0;
  sim::u64 got = 0;
  std::string tool;
};
void to_json(nlohmann::json& j, const Divergence& d);

// First divergence in (tool, cycle, port) order, or nullopt when every
// trace matches the reference. Throws InterfaceMismatch.
std::optional<Divergence> compare(const sim::SimTrace& reference,
                                  const std::vector<std::pair<std::string, sim::SimTrace>>& variants);
// Same over a whole stimulus plan: first stimulus, then cycle, then port.
std::optional<Divergence> compare(const sim::BatchTrace& reference, const sim::BatchTrace& got,
                                  const std::string& tool);

}  // namespace metahunt::difftest
