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

#include "metahunt/difftest/difftest.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "metahunt/hash.hpp"
#include "metahunt/hdl/analysis.hpp"
#include "metahunt/hdl/parser.hpp"
#include "metahunt/hdl/printer.hpp"

namespace metahunt::difftest {

using hdl::BinaryOp;
using hdl::Design;
using hdl::Expr;
using hdl::Item;
using hdl::Module;
namespace fs = std::filesystem;

const char* to_string(ToolKind k) {
  switch (k) {
    case ToolKind::Synthesizer: return "synthesizer";
    case ToolKind::Simulator: return "simulator";
    case ToolKind::Mock: return "mock";
  }
  return "?";
}

const char* to_string(RunOutcome::Kind k) {
  switch (k) {
    case RunOutcome::Kind::Success: return "success";
    case RunOutcome::Kind::Crash: return "crash";
    case RunOutcome::Kind::Timeout: return "timeout";
    case RunOutcome::Kind::ToolMissing: return "tool_missing";
  }
  return "?";
}

const char* to_string(MockBug b) {
  switch (b) {
    case MockBug::ZeroWidthSignExt: return "ZeroWidthSignExt";
    case MockBug::DeepTernaryCrash: return "DeepTernaryCrash";
    case MockBug::ShiftConstFold: return "ShiftConstFold";
  }
  return "?";
}

void validate(const ToolAdapter& t) {
  if (t.name.empty()) throw ConfigError("adapter without a name");
  if (t.timeout_s < 1) throw ConfigError(fmt::format("adapter '{}': timeout_s must be >= 1", t.name));
  if (t.kind == ToolKind::Mock) return;
  bool has_input = t.cmd.find("{input}") != std::string::npos;
  for (const auto& a : t.args) has_input = has_input || a.find("{input}") != std::string::npos;
  if (!has_input) throw ConfigError(fmt::format("adapter '{}': template has no {{input}}", t.name));
}

void to_json(nlohmann::json& j, const ToolAdapter& t) {
  j = nlohmann::json{{"name", t.name}, {"cmd", t.cmd}, {"args", t.args}, {"timeout_s", t.timeout_s}, {"kind", to_string(t.kind)}};
}

void from_json(const nlohmann::json& j, ToolAdapter& t) {
  j.at("name").get_to(t.name);
  t.cmd = j.value("cmd", std::string());
  t.args = j.value("args", std::vector<std::string>{});
  t.timeout_s = j.value("timeout_s", 60);
  std::string kind = j.value("kind", std::string("synthesizer"));
  if (kind == "synthesizer")
    t.kind = ToolKind::Synthesizer;
  else if (kind == "simulator")
    t.kind = ToolKind::Simulator;
  else if (kind == "mock")
    t.kind = ToolKind::Mock;
  else
    throw ConfigError(fmt::format("adapter '{}': unknown kind '{}'", t.name, kind));
  validate(t);
}

std::vector<ToolAdapter> load_adapters(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(fmt::format("cannot open adapter file {}", file.string()));
  nlohmann::json j;
  try {
    in >> j;
    return j.get<std::vector<ToolAdapter>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("{}: {}", file.string(), e.what()));
  }
}

bool MockBugProfile::has(MockBug b) const {
  switch (b) {
    case MockBug::ZeroWidthSignExt: return zero_width_sign_ext;
    case MockBug::DeepTernaryCrash: return deep_ternary_crash;
    case MockBug::ShiftConstFold: return shift_const_fold;
  }
  return false;
}

void MockBugProfile::set(MockBug b, bool on) {
  switch (b) {
    case MockBug::ZeroWidthSignExt: zero_width_sign_ext = on; break;
    case MockBug::DeepTernaryCrash: deep_ternary_crash = on; break;
    case MockBug::ShiftConstFold: shift_const_fold = on; break;
  }
}

MockBugProfile MockBugProfile::all() { return {true, true, true}; }

MockBugProfile MockBugProfile::parse(const std::string& s) {
  MockBugProfile p;
  if (s.empty() || s == "none") return p;
  if (s == "all") return all();
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    bool found = false;
    for (MockBug b : {MockBug::ZeroWidthSignExt, MockBug::DeepTernaryCrash, MockBug::ShiftConstFold}) {
      if (tok == difftest::to_string(b)) {
        p.set(b);
        found = true;
      }
    }
    if (!found) throw ConfigError(fmt::format("unknown mock bug '{}'", tok));
  }
  return p;
}

std::string MockBugProfile::to_string() const {
  std::string out;
  for (MockBug b : {MockBug::ZeroWidthSignExt, MockBug::DeepTernaryCrash, MockBug::ShiftConstFold}) {
    if (!has(b)) continue;
    if (!out.empty()) out += ',';
    out += difftest::to_string(b);
  }
  return out.empty() ? "none" : out;
}

namespace {

void count_refs(const Expr& e, std::map<std::string, int>& uses) {
  hdl::for_each_expr(e, [&](const Expr& x) {
    if (x.kind == Expr::Kind::Ref || x.kind == Expr::Kind::BitSelect) ++uses[x.name];
  });
}

void for_roots(std::vector<hdl::Stmt>& body, const std::function<void(Expr&)>& fn) {
  for (auto& st : body) {
    if (st.kind == hdl::Stmt::Kind::Assign) {
      fn(st.rhs);
    } else {
      fn(st.cond);
      for_roots(st.then_body, fn);
      for_roots(st.else_body, fn);
    }
  }
}

// Calls fn on every root expression of an item.
void for_roots(Item& it, const std::function<void(Expr&)>& fn) {
  if (it.kind == Item::Kind::Assign)
    fn(it.rhs);
  else if (it.kind != Item::Kind::Instance)
    for_roots(it.body, fn);
}

void for_roots(const Item& it, const std::function<void(const Expr&)>& fn) {
  for_roots(const_cast<Item&>(it), [&](Expr& e) { fn(e); });
}

struct DepthCalc {
  const std::map<std::string, const Expr*>& inline_rhs;
  std::map<std::string, int> memo;

  int depth(const Expr& e) {
    if (e.kind == Expr::Kind::Ref) {
      auto it = inline_rhs.find(e.name);
      if (it == inline_rhs.end()) return 0;
      auto m = memo.find(e.name);
      if (m != memo.end()) return m->second;
      memo[e.name] = 0;  // guards against malformed cycles
      int d = depth(*it->second);
      memo[e.name] = d;
      return d;
    }
    int d = 0;
    for (const auto& a : e.args) d = std::max(d, depth(a));
    return e.kind == Expr::Kind::Ternary ? d + 1 : d;
  }
};

}  // namespace

int effective_ternary_depth(const Module& m) {
  std::map<std::string, int> uses;
  for (const auto& it : m.items) {
    switch (it.kind) {
      case Item::Kind::Assign: count_refs(it.rhs, uses); break;
      case Item::Kind::AlwaysComb:
      case Item::Kind::AlwaysFF:
        hdl::for_each_expr(it.body, [&](const Expr& x) {
          if (x.kind == Expr::Kind::Ref || x.kind == Expr::Kind::BitSelect) ++uses[x.name];
        });
        if (it.kind == Item::Kind::AlwaysFF) ++uses[it.clock];
        break;
      case Item::Kind::Instance:
        for (const auto& c : it.connections) ++uses[c.signal];
        break;
    }
  }
  std::map<std::string, const Expr*> inline_rhs;
  for (const auto& it : m.items) {
    if (it.kind != Item::Kind::Assign) continue;
    auto sig = m.signal(it.lhs);
    if (!sig || sig->kind != hdl::SignalInfo::Kind::Net) continue;
    auto u = uses.find(it.lhs);
    if (u != uses.end() && u->second == 1) inline_rhs[it.lhs] = &it.rhs;
  }
  DepthCalc calc{inline_rhs, {}};
  int best = 0;
  for (const auto& it : m.items) for_roots(it, [&](const Expr& e) { best = std::max(best, calc.depth(e)); });
  return best;
}

namespace {

void rename_expr(Expr& e, const std::map<std::string, std::string>& names) {
  hdl::for_each_expr(e, [&](Expr& x) {
    if (x.kind == Expr::Kind::Ref || x.kind == Expr::Kind::BitSelect) x.name = names.at(x.name);
  });
}

void rename_body(std::vector<hdl::Stmt>& body, const std::map<std::string, std::string>& names) {
  for (auto& st : body) {
    if (st.kind == hdl::Stmt::Kind::Assign) {
      st.lhs = names.at(st.lhs);
      rename_expr(st.rhs, names);
    } else {
      rename_expr(st.cond, names);
      rename_body(st.then_body, names);
      rename_body(st.else_body, names);
    }
  }
}

// Appends the flattened body of `m` to `out`, with signal names mapped by
// `names` (ports pre-bound by the caller).
void inline_module(const Design& d, const Module& m, const std::string& prefix, std::map<std::string, std::string> names,
                   Module& out) {
  for (const auto& n : m.nets) {
    std::string nn = prefix + n.name;
    names[n.name] = nn;
    out.nets.push_back({n.is_reg, n.width, nn});
  }
  for (const auto& p : m.ports)
    if (!names.count(p.name)) names[p.name] = prefix + p.name;  // unconnected port
  for (const auto& it : m.items) {
    if (it.kind == Item::Kind::Instance) {
      const Module* sub = d.find(it.module);
      if (!sub) throw Error(fmt::format("flatten: unknown module '{}'", it.module));
      std::map<std::string, std::string> bound;
      for (const auto& c : it.connections) bound[c.port] = names.at(c.signal);
      inline_module(d, *sub, prefix + it.instance + "__", std::move(bound), out);
      continue;
    }
    Item copy = it;
    if (copy.kind == Item::Kind::Assign) {
      copy.lhs = names.at(copy.lhs);
      rename_expr(copy.rhs, names);
    } else {
      if (copy.kind == Item::Kind::AlwaysFF) copy.clock = names.at(copy.clock);
      rename_body(copy.body, names);
    }
    out.items.push_back(std::move(copy));
  }
}

}  // namespace

Module flatten(const Design& d) {
  const Module& top = d.top_module();
  Module out;
  out.name = top.name;
  out.ports = top.ports;
  out.origin = top.origin;
  std::map<std::string, std::string> names;
  for (const auto& p : top.ports) names[p.name] = p.name;
  inline_module(d, top, "", std::move(names), out);
  return out;
}

int effective_ternary_depth(const Design& d) { return effective_ternary_depth(flatten(d)); }

namespace {

bool self_xor(const Expr& e) {
  return e.kind == Expr::Kind::Binary && e.binary_op == BinaryOp::Xor && e.args[0] == e.args[1];
}

bool is_compare(const Expr& e) {
  return e.kind == Expr::Kind::Binary &&
         (e.binary_op == BinaryOp::Eq || e.binary_op == BinaryOp::Ne || e.binary_op == BinaryOp::Lt);
}

// Post-order rewrite with the profile's miscompiles.
int miscompile(Expr& e, const Module& m, const MockBugProfile& p) {
  int n = 0;
  for (auto& a : e.args) n += miscompile(a, m, p);
  if (p.zero_width_sign_ext && is_compare(e) && (self_xor(e.args[0]) || self_xor(e.args[1]))) {
    e = Expr::constant(1, 0);
    return n + 1;
  }
  if (p.shift_const_fold && e.kind == Expr::Kind::Binary && e.binary_op == BinaryOp::Shr &&
      e.args[1].kind == Expr::Kind::Const) {
    int w = hdl::expr_width(e.args[0], m);
    if (e.args[1].value >= static_cast<std::uint64_t>(w)) {
      e.args[1].value %= static_cast<std::uint64_t>(w);
      return n + 1;
    }
  }
  return n;
}

std::string crash_log(const Design& d, const Module& m, int depth) {
  std::uint64_t h = fnv1a64(hdl::print(m));
  return fmt::format(
      "mocksynth 1.4.2 (pass-through backend)\n"
      "Reading design: {} modules, top '{}'\n"
      "Running pass opt_muxtree_flatten on module '{}'\n"
      "ERROR: internal error in MuxTreeFlattener::collapse_chain: nesting depth {} exceeds stack guard {}\n"
      "  at passes/opt/mux_flatten.cc:{} ({:#x})\n"
      "  called from PassManager::run_pass ({:#x})\n"
      "Abort (core dumped)\n",
      d.modules.size(), d.top, m.name, depth, kCrashDepth - 1, 412, 0x400000 + (h & 0xffff0), 0x7f0000000000ULL + (h >> 40));
}

}  // namespace

MockResult mock_synthesize(const Design& d, const MockBugProfile& profile) {
  MockResult r;
  std::string log = fmt::format("mocksynth 1.4.2 (pass-through backend)\nReading design: {} modules, top '{}'\n",
                                d.modules.size(), d.top);
  if (profile.deep_ternary_crash) {
    // Hierarchy is flattened before the mux-tree pass, as in real flows.
    Module flat = flatten(d);
    int depth = effective_ternary_depth(flat);
    if (depth >= kCrashDepth) {
      r.outcome.kind = RunOutcome::Kind::Crash;
      r.outcome.exit_code = 134;
      r.outcome.signal = SIGABRT;
      r.outcome.log = crash_log(d, flat, depth);
      return r;
    }
  }
  Design net = d;
  for (auto& m : net.modules) {
    const Module& orig = *d.find(m.name);
    for (auto& it : m.items) for_roots(it, [&](Expr& e) { r.rewrites += miscompile(e, orig, profile); });
  }
  std::string text = hdl::print(net);
  log += fmt::format("Wrote netlist: {} bytes\nEnd of run.\n", text.size());
  r.outcome.kind = RunOutcome::Kind::Success;
  r.outcome.log = std::move(log);
  r.outcome.artifact_digest = hex_digest(text);
  r.netlist = std::move(net);
  return r;
}

TestCase materialize(const Design& d, const fs::path& dir) {
  fs::create_directories(dir);
  auto files = hdl::print_files(d);
  for (const auto& f : files) {
    std::ofstream out(dir / f.name, std::ios::binary);
    out << f.text;
    if (!out) throw Error(fmt::format("cannot write {}", (dir / f.name).string()));
  }
  return {dir, dir / files.front().name};
}

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
}

std::string substitute(std::string s, const TestCase& c, const fs::path& outdir) {
  auto rep = [&](const std::string& key, const std::string& val) {
    for (std::size_t pos = s.find(key); pos != std::string::npos; pos = s.find(key, pos + val.size()))
      s.replace(pos, key.size(), val);
  };
  rep("{input}", c.main.string());
  rep("{outdir}", outdir.string());
  return s;
}

std::optional<fs::path> resolve_executable(const std::string& cmd) {
  if (cmd.find('/') != std::string::npos) {
    if (::access(cmd.c_str(), X_OK) == 0) return fs::path(cmd);
    return std::nullopt;
  }
  const char* path = std::getenv("PATH");
  std::stringstream ss(path ? path : "/usr/bin:/bin");
  std::string dir;
  while (std::getline(ss, dir, ':')) {
    fs::path cand = fs::path(dir.empty() ? "." : dir) / cmd;
    if (::access(cand.c_str(), X_OK) == 0 && fs::is_regular_file(cand)) return cand;
  }
  return std::nullopt;
}

std::string digest_dir(const fs::path& dir, const fs::path& skip) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file() && e.path() != skip) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& f : files) {
    all += fs::relative(f, dir).string();
    all += '\0';
    all += read_file(f);
  }
  return hex_digest(all);
}

RunOutcome run_mock(const ToolAdapter& t, const TestCase& c, const fs::path& scratch) {
  MockBugProfile profile;
  for (const auto& a : t.args)
    if (a.rfind("--bugs=", 0) == 0) profile = MockBugProfile::parse(a.substr(7));
  Design d = hdl::parse_file(c.main);
  MockResult r = mock_synthesize(d, profile);
  write_file(scratch / "tool.log", r.outcome.log);
  if (r.netlist) {
    r.outcome.netlist = scratch / "netlist.v";
    write_file(r.outcome.netlist, hdl::print(*r.netlist));
  }
  return r.outcome;
}

}  // namespace

RunOutcome run_tool(const ToolAdapter& t, const TestCase& c, const fs::path& scratch) {
  validate(t);
  fs::remove_all(scratch);
  fs::create_directories(scratch);
  if (t.kind == ToolKind::Mock) return run_mock(t, c, scratch);

  RunOutcome out;
  std::string cmd = substitute(t.cmd, c, scratch);
  auto exe = resolve_executable(cmd);
  if (!exe) {
    out.kind = RunOutcome::Kind::ToolMissing;
    out.log = fmt::format("{}: command not found\n", cmd);
    return out;
  }
  std::vector<std::string> argv_s{cmd};
  for (const auto& a : t.args) argv_s.push_back(substitute(a, c, scratch));
  std::vector<char*> argv;
  for (auto& a : argv_s) argv.push_back(a.data());
  argv.push_back(nullptr);
  fs::path log_path = scratch / "tool.log";

  pid_t pid = ::fork();
  if (pid < 0) throw Error("fork failed");
  if (pid == 0) {
    ::setpgid(0, 0);
    if (::chdir(scratch.c_str()) != 0) ::_exit(126);
    int fd = ::open(log_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (fd >= 0) {
      ::dup2(fd, 1);
      ::dup2(fd, 2);
      ::close(fd);
    }
    int devnull = ::open("/dev/null", O_RDONLY);
    if (devnull >= 0) ::dup2(devnull, 0);
    ::execv(exe->c_str(), argv.data());
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(t.timeout_s);
  int status = 0;
  bool timed_out = false;
  for (;;) {
    pid_t w = ::waitpid(pid, &status, WNOHANG);
    if (w == pid) break;
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(-pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      timed_out = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  out.log = read_file(log_path);
  if (timed_out) {
    out.kind = RunOutcome::Kind::Timeout;
    return out;
  }
  if (WIFSIGNALED(status)) {
    out.kind = RunOutcome::Kind::Crash;
    out.signal = WTERMSIG(status);
  } else {
    out.exit_code = WEXITSTATUS(status);
    out.kind = out.exit_code == 0 ? RunOutcome::Kind::Success : RunOutcome::Kind::Crash;
  }
  if (out.kind == RunOutcome::Kind::Crash && out.log.empty())
    out.log = fmt::format("exit status {} signal {}\n", out.exit_code, out.signal);
  out.artifact_digest = digest_dir(scratch, log_path);
  for (const char* n : {"netlist.v", "out.v", "synth.v"})
    if (fs::exists(scratch / n)) out.netlist = scratch / n;
  return out;
}

void to_json(nlohmann::json& j, const Divergence& d) {
  j = nlohmann::json{{"stimulus", d.stimulus}, {"cycle", d.cycle},      {"port", d.port},
                     {"expected", fmt::format("{:#x}", d.expected)},   {"got", fmt::format("{:#x}", d.got)},
                     {"tool", d.tool}};
}

std::optional<Divergence> compare(const sim::SimTrace& reference,
                                  const std::vector<std::pair<std::string, sim::SimTrace>>& variants) {
  for (const auto& [tool, t] : variants) {
    if (t.ports != reference.ports) throw InterfaceMismatch(fmt::format("{}: output ports differ from reference", tool));
    if (t.values.size() != reference.values.size())
      throw InterfaceMismatch(fmt::format("{}: trace length differs from reference", tool));
  }
  for (const auto& [tool, t] : variants) {
    for (std::size_t c = 0; c < reference.values.size(); ++c)
      for (std::size_t p = 0; p < reference.ports.size(); ++p)
        if (t.values[c][p] != reference.values[c][p])
          return Divergence{0, c, reference.ports[p].name, reference.values[c][p], t.values[c][p], tool};
  }
  return std::nullopt;
}

std::optional<Divergence> compare(const sim::BatchTrace& reference, const sim::BatchTrace& got, const std::string& tool) {
  if (got.outputs != reference.outputs || got.count != reference.count || got.cycles != reference.cycles)
    throw InterfaceMismatch(fmt::format("{}: trace shape differs from reference", tool));
  auto k = sim::first_difference(reference, got);
  if (!k) return std::nullopt;
  for (std::size_t c = 0; c < reference.cycles; ++c)
    for (std::size_t p = 0; p < reference.outputs.size(); ++p)
      if (reference.at(*k, c, p) != got.at(*k, c, p))
        return Divergence{*k, c, reference.outputs[p].name, reference.at(*k, c, p), got.at(*k, c, p), tool};
  return std::nullopt;
}

}  // namespace metahunt::difftest
