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

// metahunt command line: campaign, gen, reduce, triage, bench-policies, sim.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "metahunt/campaign/campaign.hpp"
#include "metahunt/difftest/difftest.hpp"
#include "metahunt/hash.hpp"
#include "metahunt/hdl/generator.hpp"
#include "metahunt/hdl/parser.hpp"
#include "metahunt/hdl/printer.hpp"
#include "metahunt/reduce/reduce.hpp"
#include "metahunt/rng.hpp"
#include "metahunt/sim/sim.hpp"
#include "metahunt/triage/triage.hpp"

namespace fs = std::filesystem;
using namespace metahunt;

namespace {

constexpr int kExitClean = 0;
constexpr int kExitFramework = 1;
constexpr int kExitBugs = 2;

// File being parsed, for diagnostics.
std::string g_source = "<input>";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot read {}", p.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path case_main(const fs::path& dir) {
  if (fs::is_regular_file(dir)) return dir;
  for (const char* n : {"top.v", "variant/top.v"})
    if (fs::exists(dir / n)) return dir / n;
  throw Error(fmt::format("no top.v in {}", dir.string()));
}

int cmd_campaign(const std::string& config, const std::string& resume) {
  auto cfg = campaign::load_config(config);
  auto camp = resume.empty() ? campaign::Campaign(cfg) : campaign::Campaign::resume(cfg, resume);
  camp.run();
  std::cout << camp.summary();
  return camp.state().bugs.bugs().empty() ? kExitClean : kExitBugs;
}

int cmd_gen(std::uint64_t seed, const std::string& profile, const std::string& out) {
  auto d = hdl::gen_seed(seed, hdl::parse_size_profile(profile));
  std::string text = hdl::print(d);
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream(out, std::ios::binary) << text;
  }
  return kExitClean;
}

int cmd_reduce(const std::string& case_dir, const std::string& signature, const std::string& tools,
               const std::string& out_dir, std::size_t cap) {
  fs::path main = case_main(case_dir);
  g_source = main.string();
  auto design = hdl::parse_file(main);
  auto adapters = difftest::load_adapters(tools);
  fs::path out = out_dir.empty() ? fs::path(case_dir) / "min" : fs::path(out_dir);
  fs::path scratch = fs::temp_directory_path() / fmt::format("mh_reduce_{}", ::getpid());
  bool crash = signature.rfind("crash", 0) == 0;
  if (!crash && signature.rfind("inconsistency", 0) != 0)
    throw Error(fmt::format("signature '{}' is neither crash:... nor inconsistency:...", signature));

  // Crash signatures match by log cluster against the original run.
  triage::ClusterRegistry reg;
  std::size_t evals = 0;
  auto run_all = [&](const hdl::Design& d, const std::function<bool(const difftest::ToolAdapter&,
                                                                    const difftest::RunOutcome&, const hdl::Design&)>& hit) {
    auto tc = difftest::materialize(d, scratch / fmt::format("case{}", evals));
    bool any = false;
    for (const auto& a : adapters) {
      auto o = difftest::run_tool(a, tc, scratch / fmt::format("run{}", evals) / a.name);
      if (hit(a, o, d)) any = true;
    }
    fs::remove_all(scratch / fmt::format("case{}", evals));
    fs::remove_all(scratch / fmt::format("run{}", evals));
    ++evals;
    return any;
  };
  auto crash_hit = [&](const difftest::ToolAdapter&, const difftest::RunOutcome& o, const hdl::Design&) {
    if (o.kind != difftest::RunOutcome::Kind::Crash) return false;
    return reg.nearest(triage::featurize(o.log)) == std::optional<int>(0);
  };
  auto diverge_hit = [&](const difftest::ToolAdapter&, const difftest::RunOutcome& o, const hdl::Design& d) {
    if (o.kind != difftest::RunOutcome::Kind::Success || o.netlist.empty()) return false;
    try {
      auto net = hdl::parse_file(o.netlist);
      return !sim::exhaustive_equiv(d, net).equivalent();
    } catch (const Error&) {
      return false;
    }
  };
  if (crash) {
    bool seeded = false;
    run_all(design, [&](const difftest::ToolAdapter&, const difftest::RunOutcome& o, const hdl::Design&) {
      if (o.kind == difftest::RunOutcome::Kind::Crash && !seeded) {
        reg.assign(triage::featurize(o.log), 0);
        seeded = true;
      }
      return seeded;
    });
  }
  reduce::Predicate pred = [&](const hdl::Design& d) { return crash ? run_all(d, crash_hit) : run_all(d, diverge_hit); };
  reduce::ReduceOptions opts;
  opts.max_evaluations = cap;
  auto res = reduce::reduce(design, pred, opts);
  fs::remove_all(scratch);
  difftest::materialize(res.design, out);
  std::string log;
  for (const auto& l : res.log) log += l + "\n";
  log += fmt::format("evaluations {}\nnon_minimal {}\nsignature {}\n", res.evaluations, res.non_minimal, signature);
  std::ofstream(out / "reduction.log") << log;
  std::cout << log;
  return kExitClean;
}

int cmd_triage(const std::string& log_file, const std::string& registry) {
  std::string log = slurp(log_file);
  auto f = triage::featurize(log);
  nlohmann::json j;
  j["log_digest"] = hex_digest(log);
  j["tokens"] = f.token_summary;
  nlohmann::json buckets = nlohmann::json::object();
  for (std::size_t i = 0; i < f.vector.size(); ++i)
    if (f.vector[i] != 0.0) buckets[std::to_string(i)] = f.vector[i];
  j["buckets"] = buckets;
  if (!registry.empty()) {
    triage::ClusterRegistry reg;
    if (fs::exists(registry)) reg = triage::ClusterRegistry::from_json(nlohmann::json::parse(slurp(registry)));
    auto a = reg.assign(f, reg.observations());
    j["cluster"] = a.id;
    j["new"] = a.is_new;
    j["C_i"] = reg.clusters()[static_cast<std::size_t>(a.id)].count();
    std::ofstream(registry) << reg.to_json().dump() << "\n";
  }
  std::cout << j.dump(2) << "\n";
  return kExitClean;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    auto dash = tok.find('-');
    if (dash == std::string::npos) {
      out.push_back(std::stoull(tok));
    } else {
      for (auto v = std::stoull(tok.substr(0, dash)); v <= std::stoull(tok.substr(dash + 1)); ++v) out.push_back(v);
    }
  }
  return out;
}

int cmd_bench(const std::string& policies, std::uint64_t rounds, const std::string& seeds, const std::string& mock,
              const std::string& profile, const std::string& out) {
  campaign::CampaignConfig base;
  base.rounds = rounds;
  base.mock = difftest::MockBugProfile::parse(mock);
  base.corpus_profile = hdl::parse_size_profile(profile);
  std::vector<bandit::PolicyKind> kinds;
  std::stringstream ss(policies);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    auto k = bandit::parse_policy(tok);
    if (!k) throw difftest::ConfigError(fmt::format("unknown policy '{}'", tok));
    kinds.push_back(*k);
  }
  auto runs = campaign::bench_policies(base, kinds, parse_seed_list(seeds));
  auto rep = campaign::bench_report(runs, rounds);
  if (!out.empty()) std::ofstream(out) << rep.dump(2) << "\n";
  std::cout << fmt::format("{:<16} {:>8}  per-seed rounds to all bugs ({} = not reached)\n", "policy", "mean",
                           rounds + 1);
  for (auto k : kinds) {
    std::string row;
    for (const auto& r : runs)
      if (r.policy == k) row += fmt::format(" {}", campaign::censored_time(r, rounds));
    std::cout << fmt::format("{:<16} {:>8.1f} {}\n", bandit::to_string(k),
                             rep["mean_rounds_to_all"][bandit::to_string(k)].get<double>(), row);
  }
  return kExitClean;
}

int cmd_sim(const std::string& design_file, const std::string& csv, std::size_t cycles, std::uint64_t seed) {
  g_source = design_file;
  auto d = hdl::parse_file(design_file);
  sim::Simulator s(d);
  sim::Stimulus st;
  st.ports = s.inputs();
  Rng rng(seed);
  for (std::size_t c = 0; c < cycles; ++c) {
    std::vector<sim::u64> v;
    for (const auto& p : st.ports) v.push_back(rng.next() & (p.width >= 64 ? ~0ULL : ((1ULL << p.width) - 1)));
    st.vectors.push_back(std::move(v));
  }
  auto t = s.run(st);
  if (csv.empty() || csv == "-") {
    sim::write_trace_csv(std::cout, t);
  } else {
    std::ofstream out(csv);
    sim::write_trace_csv(out, t);
  }
  return kExitClean;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"metahunt: metamorphic differential testing of logic synthesis tools"};
  app.require_subcommand(1);

  std::string config, resume;
  auto* camp = app.add_subcommand("campaign", "run a testing campaign");
  camp->add_option("--config", config, "campaign config (JSON)")->required()->check(CLI::ExistingFile);
  camp->add_option("--resume", resume, "checkpoint to resume from")->check(CLI::ExistingFile);

  std::uint64_t gen_seed = 0;
  std::string profile = "small", gen_out;
  auto* gen = app.add_subcommand("gen", "print a generated seed design");
  gen->add_option("--seed", gen_seed, "generator seed")->required();
  gen->add_option("--profile", profile, "small | medium | large");
  gen->add_option("-o,--out", gen_out, "output file");

  std::string case_dir, signature, tools, red_out;
  std::size_t cap = 500;
  auto* red = app.add_subcommand("reduce", "minimize a failing case");
  red->add_option("--case", case_dir, "case directory or .v file")->required()->check(CLI::ExistingPath);
  red->add_option("--signature", signature, "crash:... or inconsistency:...")->required();
  red->add_option("--tools", tools, "adapters JSON")->required()->check(CLI::ExistingFile);
  red->add_option("--out", red_out, "output directory (default <case>/min)");
  red->add_option("--max-evaluations", cap, "predicate evaluation cap");

  std::string log_file, registry;
  auto* tri = app.add_subcommand("triage", "featurize a tool log");
  tri->add_option("--log", log_file, "log file")->required()->check(CLI::ExistingFile);
  tri->add_option("--registry", registry, "cluster registry JSON to update");

  std::string policies = "linucb,random,epsilon,thompson", seeds = "1-10", mock = "all", bench_out;
  std::uint64_t rounds = 2000;
  auto* bench = app.add_subcommand("bench-policies", "policy ablation on the mock backend");
  bench->add_option("--policies", policies, "comma-separated policies");
  bench->add_option("--rounds", rounds, "rounds per campaign");
  bench->add_option("--seeds", seeds, "rng seeds, e.g. 1-10 or 1,5,9");
  bench->add_option("--mock", mock, "mock bug profile");
  bench->add_option("--profile", profile, "corpus size profile");
  bench->add_option("--out", bench_out, "write the JSON report here");

  std::string design_file, csv;
  std::size_t cycles = 8;
  std::uint64_t sim_seed = 1;
  auto* simc = app.add_subcommand("sim", "simulate a design on random stimulus");
  simc->add_option("--design", design_file, "design file")->required()->check(CLI::ExistingFile);
  simc->add_option("--trace-csv", csv, "output CSV ('-' for stdout)");
  simc->add_option("--cycles", cycles, "cycles");
  simc->add_option("--seed", sim_seed, "stimulus seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage errors share the framework/config exit code.
    return app.exit(e) == 0 ? kExitClean : kExitFramework;
  }

  try {
    if (*camp) return cmd_campaign(config, resume);
    if (*gen) return cmd_gen(gen_seed, profile, gen_out);
    if (*red) return cmd_reduce(case_dir, signature, tools, red_out, cap);
    if (*tri) return cmd_triage(log_file, registry);
    if (*bench) return cmd_bench(policies, rounds, seeds, mock, profile, bench_out);
    if (*simc) return cmd_sim(design_file, csv, cycles, sim_seed);
  } catch (const SyntaxError& e) {
    std::cerr << hdl::format_diagnostic(g_source, e) << "\n";
    return kExitFramework;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFramework;
  }
  return kExitFramework;
}
