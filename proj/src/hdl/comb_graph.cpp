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

#include "metahunt/hdl/comb_graph.hpp"

#include <algorithm>
#include <functional>

#include "metahunt/error.hpp"
#include "metahunt/hdl/analysis.hpp"

namespace metahunt::hdl {

namespace {

void add_edge(CombGraph& g, const std::string& to, const std::string& from) {
  g.deps[to].insert(from);
  g.users[from].insert(to);
}

}  // namespace

CombGraph build_comb_graph(const Design& d, const Module& m) {
  CombGraph g;
  for (const auto& it : m.items) {
    switch (it.kind) {
      case Item::Kind::Assign: {
        std::set<std::string> reads;
        collect_reads(it.rhs, reads);
        for (const auto& r : reads) add_edge(g, it.lhs, r);
        break;
      }
      case Item::Kind::AlwaysComb: {
        std::set<std::string> reads, writes;
        collect_reads(it.body, reads);
        collect_assigned(it.body, writes);
        for (const auto& w : writes) {
          for (const auto& r : reads) {
            // A block reading a reg it drives itself sees the latched value.
            if (!writes.count(r)) add_edge(g, w, r);
          }
        }
        break;
      }
      case Item::Kind::AlwaysFF:
        break;
      case Item::Kind::Instance: {
        const Module* sub = d.find(it.module);
        if (sub == nullptr || sub == &m) break;
        auto summary = comb_port_deps(d, *sub);
        std::map<std::string, std::string> bound;
        for (const auto& c : it.connections) bound[c.port] = c.signal;
        for (const auto& [out_port, in_ports] : summary) {
          auto o = bound.find(out_port);
          if (o == bound.end()) continue;
          for (const auto& ip : in_ports) {
            auto i = bound.find(ip);
            if (i != bound.end()) add_edge(g, o->second, i->second);
          }
        }
        break;
      }
    }
  }
  return g;
}

std::map<std::string, std::set<std::string>> comb_port_deps(const Design& d, const Module& m) {
  // Recursion follows the instantiation graph, which may still be cyclic
  // while a design is being validated.
  static thread_local std::set<std::string> in_progress;
  if (!in_progress.insert(m.name).second) throw ValidationError("acyclic-instances", m.name, "recursive instantiation of " + m.name);
  struct Pop {
    std::string name;
    ~Pop() { in_progress.erase(name); }
  } pop{m.name};

  CombGraph g = build_comb_graph(d, m);
  std::map<std::string, std::set<std::string>> out;
  for (const auto& p : m.ports) {
    if (p.dir != Direction::Output) continue;
    std::set<std::string> seen{p.name};
    std::vector<std::string> work{p.name};
    std::set<std::string> inputs;
    while (!work.empty()) {
      std::string s = work.back();
      work.pop_back();
      auto it = g.deps.find(s);
      if (it == g.deps.end()) continue;
      for (const auto& dep : it->second) {
        if (!seen.insert(dep).second) continue;
        const Port* dp = m.port(dep);
        if (dp != nullptr && dp->dir == Direction::Input) inputs.insert(dep);
        work.push_back(dep);
      }
    }
    out[p.name] = std::move(inputs);
  }
  return out;
}

std::optional<std::vector<std::string>> find_comb_cycle(const CombGraph& g) {
  enum class Mark { White, Grey, Black };
  std::map<std::string, Mark> mark;
  std::vector<std::string> stack;
  std::optional<std::vector<std::string>> cycle;

  std::function<bool(const std::string&)> visit = [&](const std::string& s) -> bool {
    mark[s] = Mark::Grey;
    stack.push_back(s);
    auto it = g.deps.find(s);
    if (it != g.deps.end()) {
      for (const auto& dep : it->second) {
        Mark mk = mark.count(dep) ? mark[dep] : Mark::White;
        if (mk == Mark::Grey) {
          auto from = std::find(stack.begin(), stack.end(), dep);
          cycle = std::vector<std::string>(from, stack.end());
          return true;
        }
        if (mk == Mark::White && visit(dep)) return true;
      }
    }
    stack.pop_back();
    mark[s] = Mark::Black;
    return false;
  };

  for (const auto& [s, _] : g.deps) {
    if ((mark.count(s) ? mark[s] : Mark::White) == Mark::White && visit(s)) return cycle;
  }
  return std::nullopt;
}

}  // namespace metahunt::hdl
