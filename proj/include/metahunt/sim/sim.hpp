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
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "metahunt/hdl/ast.hpp"

namespace metahunt::sim {

using u64 = std::uint64_t;

struct PortSpec {
  std::string name;
  int width = 1;

  bool operator==(const PortSpec&) const = default;
};

// Per-cycle values for the top module's non-clock inputs, in port order.
struct Stimulus {
  std::vector<PortSpec> ports;
  std::vector<std::vector<u64>> vectors;

  std::size_t cycles() const { return vectors.size(); }
  bool operator==(const Stimulus&) const = default;
};

// Per-cycle values of the top module's outputs, in port order.
struct SimTrace {
  std::vector<PortSpec> ports;
  std::vector<std::vector<u64>> values;

  bool operator==(const SimTrace&) const = default;
};

// Flattened, compiled form of a design. Evaluates many stimuli side by side
// ("lanes"). Each cycle: apply inputs, settle combinational logic, sample
// outputs, then clock every register once. Registers start at zero.
class Simulator {
 public:
  explicit Simulator(const hdl::Design& d);
  ~Simulator();
  Simulator(Simulator&&) noexcept;
  Simulator& operator=(Simulator&&) noexcept;

  const std::vector<PortSpec>& inputs() const;
  const std::vector<PortSpec>& outputs() const;
  int input_bits() const;

  SimTrace run(const Stimulus& s) const;

  // fill(cycle, in): in[port][lane] must be written for every input port.
  // sink(cycle, out): out[port][lane] holds the sampled outputs.
  using Fill = std::function<void(std::size_t cycle, const std::vector<u64*>& in)>;
  using Sink = std::function<void(std::size_t cycle, const std::vector<const u64*>& out)>;
  void run_lanes(std::size_t lanes, std::size_t cycles, const Fill& fill, const Sink& sink) const;

  struct Program;

 private:
  std::unique_ptr<Program> p_;
};

SimTrace simulate(const hdl::Design& d, const Stimulus& s);

// Stimulus set used for equivalence checks. Exhaustive plans enumerate all
// 2^bits vectors: stimulus k drives (k*(2c+1) + c*phi) mod 2^bits at cycle
// c, so every vector appears at every cycle. Sampled plans draw seeded
// random vectors.
struct StimulusPlan {
  int bits = 0;
  std::size_t count = 1;
  std::size_t cycles = 1;
  bool exhaustive = true;
  u64 seed = 0;

  u64 vector(std::size_t k, std::size_t cycle) const;
};

StimulusPlan make_plan(int input_bits, int max_input_bits, std::size_t cycles, u64 seed = 0x5a4d,
                       std::size_t samples = 1024);

// Splits a packed vector over ports, first port in the low bits.
std::vector<u64> unpack(u64 vector, const std::vector<PortSpec>& ports);
Stimulus stimulus_at(const StimulusPlan& plan, const std::vector<PortSpec>& ports, std::size_t k);

// Outputs for every stimulus of a plan, laid out [stimulus][cycle][port].
struct BatchTrace {
  std::vector<PortSpec> outputs;
  std::size_t count = 0;
  std::size_t cycles = 0;
  std::vector<u64> values;

  u64 at(std::size_t k, std::size_t c, std::size_t p) const {
    return values[(k * cycles + c) * outputs.size() + p];
  }
  bool operator==(const BatchTrace&) const = default;
};

BatchTrace run_plan(const Simulator& sim, const StimulusPlan& plan);

// First stimulus index where the traces disagree. Traces must come from the
// same plan and interface.
std::optional<std::size_t> first_difference(const BatchTrace& a, const BatchTrace& b);

enum class EquivKind { Equivalent, EquivalentSampled, Counterexample };
const char* to_string(EquivKind k);

struct EquivResult {
  EquivKind kind = EquivKind::Equivalent;
  std::optional<Stimulus> counterexample;
  std::size_t stimuli = 0;

  bool equivalent() const { return kind != EquivKind::Counterexample; }
};

// Throws InterfaceMismatch when the top port lists differ.
void check_same_interface(const hdl::Design& a, const hdl::Design& b);

EquivResult exhaustive_equiv(const hdl::Design& a, const hdl::Design& b, int max_input_bits = 10,
                             std::size_t cycles = 4);

// "cycle,port,value" rows, value in hex.
void write_trace_csv(std::ostream& os, const SimTrace& t);

}  // namespace metahunt::sim
