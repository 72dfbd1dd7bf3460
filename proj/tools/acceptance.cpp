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

// Acceptance gates. One PASS/FAIL/SKIP line per criterion; exit 1 if any
// gating criterion fails.
//
//   acceptance [--only name] [--cli path/to/metahunt] [--work dir]

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <fmt/format.h>
#include <json.hpp>

#include "metahunt/bandit/linucb.hpp"
#include "metahunt/campaign/campaign.hpp"
#include "metahunt/hdl/analysis.hpp"
#include "metahunt/hdl/generator.hpp"
#include "metahunt/hdl/validate.hpp"
#include "metahunt/metamorph/metamorph.hpp"
#include "metahunt/reduce/reduce.hpp"
#include "metahunt/rng.hpp"
#include "metahunt/sim/sim.hpp"
#include "metahunt/triage/triage.hpp"

namespace fs = std::filesystem;
using namespace metahunt;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  enum Kind { Pass, Fail, Skip } kind = Fail;
  std::string detail;
};

Verdict pass(std::string d) { return {Verdict::Pass, std::move(d)}; }
Verdict fail(std::string d) { return {Verdict::Fail, std::move(d)}; }
Verdict skip(std::string d) { return {Verdict::Skip, std::move(d)}; }

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// ---------------------------------------------------------------- soundness

Verdict soundness() {
  auto t0 = Clock::now();
  int ok = 0, total = 0;
  std::string first_bad;
  for (int s = 0; s < metamorph::kStrategyCount; ++s) {
    auto sid = static_cast<metamorph::StrategyId>(s);
    int done = 0;
    for (std::uint64_t k = 0; done < 100; ++k) {
      hdl::Design d = hdl::gen_seed(70000 + k, hdl::SizeProfile::Small);
      if (hdl::stimulus_width(d) > 10) continue;
      ++done;
      ++total;
      bool good = false;
      try {
        auto m = metamorph::apply(d, sid, derive_seed(k, static_cast<std::uint64_t>(s)));
        hdl::validate(m.design);
        good = sim::exhaustive_equiv(d, m.design, 10, 4).kind == sim::EquivKind::Equivalent;
      } catch (const std::exception& e) {
        if (first_bad.empty()) first_bad = e.what();
      }
      if (good)
        ++ok;
      else if (first_bad.empty())
        first_bad = fmt::format("{} on seed {}", metamorph::to_string(sid), 70000 + k);
    }
  }
  double secs = seconds_since(t0);
  std::string d = fmt::format("{}/{} equivalent in {:.1f}s", ok, total, secs);
  if (!first_bad.empty()) d += "; first failure: " + first_bad;
  return ok == total && total == 400 && secs < 120 ? pass(d) : fail(d);
}

// ------------------------------------------------------------------- linucb

using E6 = Eigen::Matrix<double, 6, 1>;
using M6 = Eigen::Matrix<double, 6, 6>;

E6 eig(const bandit::Vec& v) {
  E6 e;
  for (int i = 0; i < 6; ++i) e(i) = v[static_cast<std::size_t>(i)];
  return e;
}

Verdict linucb_oracle() {
  using namespace bandit;
  PolicyConfig cfg;
  std::mt19937_64 rng(20261019);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_a = 0, worst = 0;
  for (int seq = 0; seq < 1000; ++seq) {
    ArmState a = ArmState::fresh();
    M6 A = M6::Identity();
    E6 b = E6::Zero();
    int n = static_cast<int>(rng() % 60);
    for (int i = 0; i <= n; ++i) {
      Vec x = context(static_cast<int>(rng() % 4), u(rng), u(rng));
      double f = u(rng);
      E6 ex = eig(x);
      // Check the pre-update scores, then fold in the pull.
      Eigen::LLT<M6> llt(A);
      E6 th = llt.solve(b);
      double est = ex.dot(th);
      double want_ucb = est * std::exp(-cfg.beta * f) + cfg.alpha * std::sqrt(ex.dot(llt.solve(ex)));
      Vec t = theta(a);
      for (int k = 0; k < 6; ++k) worst = std::max(worst, std::abs(t[static_cast<std::size_t>(k)] - th(k)));
      worst = std::max(worst, std::abs(estimate(a, x) - est));
      worst = std::max(worst, std::abs(ucb(a, x, cfg, f) - want_ucb));
      double r = u(rng) * 1.6 - 0.3;
      a = update(a, x, r);
      A += ex * ex.transpose();
      b += r * ex;
      for (int k = 0; k < 36; ++k) worst_a = std::max(worst_a, std::abs(a.A[static_cast<std::size_t>(k)] - A(k / 6, k % 6)));
    }
  }
  double fresh = ucb(ArmState::fresh(), Vec{1, 0, 0, 0, 0.7, 0.2}, cfg, 0.0);
  double adj = adjust(1.0, 0.2, 0.5);
  bool ok = worst <= 1e-9 && worst_a <= 1e-12 && std::abs(fresh - std::sqrt(1.53)) <= 1e-9 &&
            std::abs(adj - std::exp(-0.1)) <= 1e-9;
  return {ok ? Verdict::Pass : Verdict::Fail,
          fmt::format("max score err {:.2e}, max |A - (I + sum xx^T)| {:.2e}, fresh ucb {:.12f} (sqrt 1.53 = {:.12f}), "
                      "adjust {:.12f}",
                      worst, worst_a, fresh, std::sqrt(1.53), adj)};
}

// ----------------------------------------------------------------- ablation

Verdict ablation() {
  using bandit::PolicyKind;
  campaign::CampaignConfig base;
  base.rounds = 2000;
  base.mock = difftest::MockBugProfile::all();
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 1; s <= 10; ++s) seeds.push_back(s);
  auto runs = campaign::bench_policies(base, {PolicyKind::LinUCB, PolicyKind::Random, PolicyKind::EpsilonGreedy}, seeds);
  auto time_of = [&](PolicyKind k, std::uint64_t s) {
    for (const auto& r : runs)
      if (r.policy == k && r.rng_seed == s) return campaign::censored_time(r, base.rounds);
    throw Error("missing bench run");
  };
  int wins = 0;
  double lin = 0, rnd = 0, eps = 0;
  std::string row;
  for (auto s : seeds) {
    auto l = time_of(PolicyKind::LinUCB, s), r = time_of(PolicyKind::Random, s), e = time_of(PolicyKind::EpsilonGreedy, s);
    wins += l < r;
    lin += static_cast<double>(l);
    rnd += static_cast<double>(r);
    eps += static_cast<double>(e);
    row += fmt::format(" {}:{}/{}/{}", s, l, r, e);
  }
  double n = static_cast<double>(seeds.size());
  bool ok = wins >= 9 && lin / n <= eps / n;
  return {ok ? Verdict::Pass : Verdict::Fail,
          fmt::format("linucb<random in {}/10, mean linucb {:.1f} random {:.1f} eps {:.1f} (seed:lin/rnd/eps{})", wins,
                      lin / n, rnd / n, eps / n, row)};
}

// ------------------------------------------------------------------- triage

std::string family_a(std::mt19937_64& g) {
  return fmt::format(
      "Assertion `depth < limit' failed.\n"
      "#0 {:#x} in MuxChainBuilder::fold_chain /build/src/opt/{}/muxchain.cc:{}\n"
      "#1 {:#x} in OptPass::execute(Module*) /build/src/opt/pass.cc:{}\n"
      "stage {} of {} aborted\n",
      g() & 0xffffffffffULL, g() % 100, g() % 3000, g() & 0xffffffffffULL, g() % 900, g() % 9, 10 + g() % 9);
}

std::string family_b(std::mt19937_64& g) {
  return fmt::format(
      "Segmentation fault (core dumped) at {:#x}\n"
      "  frame RegisterRetimer::push_forward in /usr/lib/synth/{}/retime.so\n"
      "  frame ClockDomainMap::lookup line {} id {}\n",
      g() & 0xfffffffffULL, g() % 50, g() % 8000, g() % 1000);
}

std::string substitute(std::string log, std::mt19937_64& g) {
  // Replace every hex literal, decimal literal and path with a random one.
  std::string out;
  for (std::size_t i = 0; i < log.size();) {
    char c = log[i];
    if (c == '0' && i + 1 < log.size() && log[i + 1] == 'x') {
      std::size_t j = i + 2;
      while (j < log.size() && std::isxdigit(static_cast<unsigned char>(log[j]))) ++j;
      out += fmt::format("{:#x}", g() & 0xffffffffffffULL);
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c)) && (i == 0 || !std::isalnum(static_cast<unsigned char>(log[i - 1])))) {
      std::size_t j = i;
      while (j < log.size() && std::isdigit(static_cast<unsigned char>(log[j]))) ++j;
      if (j < log.size() && (std::isalpha(static_cast<unsigned char>(log[j])) || log[j] == '_')) {
        out.append(log, i, j - i);
      } else {
        out += std::to_string(g() % 100000);
      }
      i = j;
    } else if (c == '/' && (i == 0 || log[i - 1] == ' ')) {
      std::size_t j = i;
      while (j < log.size() && !std::isspace(static_cast<unsigned char>(log[j])) && log[j] != ':') ++j;
      out += fmt::format("/tmp/x{}/y{}/z.{}", g() % 1000, g() % 1000, g() % 2 ? "cc" : "v");
      i = j;
    } else {
      out += c;
      ++i;
    }
  }
  return out;
}

Verdict triage_suite() {
  std::mt19937_64 g(99);
  int invariant = 0;
  for (int i = 0; i < 300; ++i) {
    std::string base = i % 2 ? family_a(g) : family_b(g);
    auto x = triage::featurize(base).vector;
    auto y = triage::featurize(substitute(base, g)).vector;
    invariant += x == y;
  }
  triage::ClusterRegistry reg(0.85, 50, 20);
  std::vector<int> fam;
  for (int i = 0; i < 200; ++i) {
    int f = static_cast<int>(g() % 2);
    reg.assign(triage::featurize(f ? family_b(g) : family_a(g)), static_cast<std::uint64_t>(i));
    fam.push_back(f);
  }
  reg.refit();
  bool pure = true;
  std::uint64_t members = 0;
  for (const auto& c : reg.clusters()) {
    std::set<int> s;
    for (auto m : c.members) s.insert(fam[m]);
    pure = pure && s.size() == 1;
    members += c.count();
  }
  bool two = reg.clusters().size() == 2 && pure && members == 200;
  bool freq = triage::frequency(2, 10) == 0.2;
  for (std::uint64_t t = 1; t <= 200; ++t)
    for (std::uint64_t c = 0; c <= t; c += 7) freq = freq && triage::frequency(c, t) == static_cast<double>(c) / static_cast<double>(t);
  bool ok = invariant == 300 && two && freq;
  return {ok ? Verdict::Pass : Verdict::Fail,
          fmt::format("masking invariant {}/300, clusters {} (pure {}), f(2,10)={}, f=C/T exact {}", invariant,
                      reg.clusters().size(), pure, triage::frequency(2, 10), freq)};
}

// ------------------------------------------------------------------ reducer

Verdict reducer_suite() {
  using hdl::Design;
  using hdl::Item;
  int cases = 0, agree = 0, minimal = 0, failing = 0;
  for (std::uint64_t s = 3000; cases < 50 && s < 10000; ++s) {
    Design d = hdl::gen_seed(s, hdl::SizeProfile::Small);
    if (d.modules.size() != 1) continue;
    std::size_t n = d.top_module().items.size();
    if (n < 3 || n > 12) continue;
    std::mt19937_64 g(s);
    Item planted = d.top_module().items[g() % n];
    reduce::Predicate p = [&](const Design& c) {
      const auto& its = c.top_module().items;
      return std::find(its.begin(), its.end(), planted) != its.end();
    };
    ++cases;
    // Oracle: smallest failing valid subset of top-level items.
    std::size_t best = n + 1;
    std::uint32_t best_mask = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      auto pc = static_cast<std::size_t>(std::popcount(mask));
      if (pc >= best) continue;
      Design c = d;
      std::vector<Item> kept;
      for (std::size_t i = 0; i < n; ++i)
        if (mask & (1u << i)) kept.push_back(d.top_module().items[i]);
      c.top_module().items = kept;
      if (hdl::is_valid(c) && p(c)) {
        best = pc;
        best_mask = mask;
      }
    }
    auto r = reduce::reduce(d, p);
    const auto& items = r.design.top_module().items;
    failing += p(r.design);
    minimal += reduce::is_one_minimal(r.design, p) && !r.non_minimal;
    bool oracle_is_planted = best == 1 && d.top_module().items[static_cast<std::size_t>(std::countr_zero(best_mask))] == planted;
    agree += oracle_is_planted && items.size() == 1 && items[0] == planted;
  }
  bool ok = cases == 50 && agree == 50 && minimal == 50 && failing == 50;
  return {ok ? Verdict::Pass : Verdict::Fail,
          fmt::format("{} cases: oracle agreement {}/50, 1-minimal {}/50, still failing {}/50", cases, agree, minimal, failing)};
}

// -------------------------------------------------------------- determinism

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

pid_t spawn(const std::string& cli, const std::vector<std::string>& args, const fs::path& log) {
  pid_t pid = fork();
  if (pid == 0) {
    FILE* f = std::freopen(log.c_str(), "w", stdout);
    (void)f;
    std::vector<char*> argv{const_cast<char*>(cli.c_str())};
    for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    execv(cli.c_str(), argv.data());
    _exit(127);
  }
  return pid;
}

int wait_exit(pid_t pid) {
  int status = 0;
  waitpid(pid, &status, 0);
  return WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
}

std::uint64_t checkpoint_round(const fs::path& state) {
  try {
    if (!fs::exists(state)) return 0;
    return nlohmann::json::parse(slurp(state)).at("state").at("round").get<std::uint64_t>();
  } catch (const std::exception&) {
    return 0;
  }
}

Verdict determinism(const std::string& cli, const fs::path& work) {
  if (cli.empty() || !fs::exists(cli)) return fail("metahunt CLI not found (pass --cli)");
  fs::remove_all(work);
  fs::create_directories(work);
  fs::path cfg = work / "campaign.json";
  std::ofstream(cfg) << nlohmann::json{{"rounds", 2000}, {"rng_seed", 7}, {"mock_profile", "all"}, {"output_dir", "out"}}.dump(2);
  fs::path out = work / "out";

  std::vector<std::string> report;
  for (int run = 0; run < 2; ++run) {
    fs::remove_all(out);
    int code = wait_exit(spawn(cli, {"campaign", "--config", cfg.string()}, work / fmt::format("run{}.log", run)));
    if (code != 0 && code != 2) return fail(fmt::format("run {} exited {}", run, code));
    report.push_back(slurp(out / "report.json"));
  }

  fs::remove_all(out);
  pid_t pid = spawn(cli, {"campaign", "--config", cfg.string()}, work / "killed.log");
  std::uint64_t at = 0;
  auto t0 = Clock::now();
  while ((at = checkpoint_round(out / "state.json")) < 500) {
    int status = 0;
    if (waitpid(pid, &status, WNOHANG) == pid) return fail("campaign finished before round 500 could be interrupted");
    if (seconds_since(t0) > 600) break;
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  kill(pid, SIGKILL);
  wait_exit(pid);
  std::uint64_t resumed_from = checkpoint_round(out / "state.json");
  fs::copy_file(out / "state.json", work / "state.json", fs::copy_options::overwrite_existing);
  int code = wait_exit(spawn(cli, {"campaign", "--config", cfg.string(), "--resume", (work / "state.json").string()},
                             work / "resumed.log"));
  if (code != 0 && code != 2) return fail(fmt::format("resumed run exited {}", code));
  std::string resumed = slurp(out / "report.json");

  bool same = !report[0].empty() && report[0] == report[1];
  bool resume_same = resumed == report[0];
  return {same && resume_same ? Verdict::Pass : Verdict::Fail,
          fmt::format("report {} bytes; run1==run2 {}; killed at checkpoint {}, resumed==run1 {}", report[0].size(),
                      same, resumed_from, resume_same)};
}

// ------------------------------------------------------------------- honest

Verdict honest() {
  campaign::CampaignConfig cfg;
  cfg.rounds = 1000;
  cfg.mock = difftest::MockBugProfile{};
  cfg.rng_seed = 3;
  campaign::Campaign c(cfg);
  c.run();
  auto n = c.state().bugs.bugs().size();
  return {n == 0 ? Verdict::Pass : Verdict::Fail,
          fmt::format("{} bugs over {} rounds with the empty mock profile", n, c.state().round)};
}

// --------------------------------------------------------------- real tools

bool on_path(const std::string& exe) {
  const char* path = std::getenv("PATH");
  if (!path) return false;
  std::stringstream ss(path);
  std::string dir;
  while (std::getline(ss, dir, ':'))
    if (!dir.empty() && access((fs::path(dir) / exe).c_str(), X_OK) == 0) return true;
  return false;
}

Verdict real_tools(const fs::path& adapters, const fs::path& work) {
  if (!on_path("yosys") || !on_path("iverilog")) return skip("yosys and iverilog not both installed");
  campaign::CampaignConfig cfg;
  cfg.rounds = 500;
  cfg.use_mock = false;
  cfg.adapters_file = adapters.string();
  cfg.output_dir = (work / "real").string();
  cfg.reduce = false;
  try {
    campaign::Campaign c(cfg);
    c.run();
    c.write_outputs();
    return pass(fmt::format("{} rounds, {} findings, {} warnings", c.state().round, c.state().bugs.bugs().size(),
                            c.state().warnings.size()));
  } catch (const std::exception& e) {
    return fail(e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"metahunt acceptance gates"};
  std::string only;
  std::string cli = METAHUNT_CLI_PATH;
  std::string adapters = METAHUNT_SOURCE_DIR "/tools/adapters/yosys_iverilog.json";
  std::string work = (fs::temp_directory_path() / fmt::format("metahunt_acceptance_{}", getpid())).string();
  app.add_option("--only", only, "run a single criterion");
  app.add_option("--cli", cli, "metahunt binary");
  app.add_option("--adapters", adapters, "adapters for the optional real-tool run");
  app.add_option("--work", work, "scratch directory");
  CLI11_PARSE(app, argc, argv);

  struct Gate {
    std::string name;
    bool gating;
    std::function<Verdict()> run;
  };
  std::vector<Gate> gates{
      {"metamorphic_soundness", true, soundness},
      {"linucb_numeric_oracle", true, linucb_oracle},
      {"policy_ablation", true, ablation},
      {"triage_suite", true, triage_suite},
      {"reducer_suite", true, reducer_suite},
      {"end_to_end_determinism", true, [&] { return determinism(cli, fs::path(work) / "determinism"); }},
      {"honest_tool_zero_false_positive", true, honest},
      {"real_tools_smoke", false, [&] { return real_tools(adapters, work); }},
  };

  int failed = 0;
  for (const auto& g : gates) {
    if (!only.empty() && only != g.name) continue;
    auto t0 = Clock::now();
    Verdict v;
    try {
      v = g.run();
    } catch (const std::exception& e) {
      v = fail(std::string("exception: ") + e.what());
    }
    const char* tag = v.kind == Verdict::Pass ? "PASS" : v.kind == Verdict::Skip ? "SKIP" : "FAIL";
    std::cout << fmt::format("{} {}{} ({:.1f}s): {}", tag, g.name, g.gating ? "" : " [optional]", seconds_since(t0),
                             v.detail)
              << std::endl;
    if (v.kind == Verdict::Fail && g.gating) ++failed;
  }
  fs::remove_all(work);
  return failed == 0 ? 0 : 1;
}
