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

#include "metahunt/campaign/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "metahunt/hash.hpp"
#include "metahunt/hdl/analysis.hpp"
#include "metahunt/hdl/parser.hpp"
#include "metahunt/hdl/printer.hpp"
#include "metahunt/reduce/reduce.hpp"
#include "metahunt/rng.hpp"

namespace metahunt::campaign {

namespace fs = std::filesystem;
using difftest::ConfigError;
using difftest::RunOutcome;
using hdl::Design;
using metamorph::MutationRecord;
using metamorph::StrategyId;

namespace {

// Independent RNG streams.
constexpr std::uint64_t kCorpusStream = 0xc0;
constexpr std::uint64_t kPolicyStream = 0xb1;
constexpr std::uint64_t kMutationStream = 0x3a;
constexpr std::uint64_t kStimulusStream = 0x57;

constexpr double kRewardNewCrash = 1.0;
constexpr double kRewardNewInconsistency = 0.5;
constexpr double kRewardDuplicate = 0.1;
constexpr double kLinkDiscount = 0.5;

}  // namespace

void CampaignConfig::validate() const {
  if (rounds < 1) throw ConfigError("rounds must be >= 1");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (chain_depth < 1) throw ConfigError("chain_depth must be >= 1");
  if (seed_budget < 1) throw ConfigError("seed_budget must be >= 1");
  if (corpus_dir.empty() && corpus_size < 1) throw ConfigError("corpus_size must be >= 1");
  if (checkpoint_every < 1) throw ConfigError("checkpoint_every must be >= 1");
  if (!use_mock && adapters_file.empty()) throw ConfigError("no backend: enable the mock or give an adapters file");
  if (policy.alpha < 0 || policy.beta < 0) throw ConfigError("alpha and beta must be >= 0");
  if (policy.epsilon < 0 || policy.epsilon > 1) throw ConfigError("epsilon must be in [0, 1]");
}

void to_json(nlohmann::json& j, const CampaignConfig& c) {
  j = nlohmann::json{{"rounds", c.rounds},
                     {"chain_depth", c.chain_depth},
                     {"seed_budget", c.seed_budget},
                     {"corpus_dir", c.corpus_dir},
                     {"corpus_profile", hdl::to_string(c.corpus_profile)},
                     {"corpus_size", c.corpus_size},
                     {"policy", bandit::to_string(c.policy.policy)},
                     {"alpha", c.policy.alpha},
                     {"beta", c.policy.beta},
                     {"epsilon", c.policy.epsilon},
                     {"adapters", c.adapters_file},
                     {"use_mock", c.use_mock},
                     {"mock_profile", c.mock.to_string()},
                     {"jobs", c.jobs},
                     {"rng_seed", c.rng_seed},
                     {"output_dir", c.output_dir},
                     {"checkpoint_every", c.checkpoint_every},
                     {"reduce", c.reduce},
                     {"max_input_bits", c.max_input_bits},
                     {"samples", c.samples},
                     {"cycles", c.cycles}};
}

void from_json(const nlohmann::json& j, CampaignConfig& c) {
  CampaignConfig d;
  c.rounds = j.value("rounds", d.rounds);
  c.chain_depth = j.value("chain_depth", d.chain_depth);
  c.seed_budget = j.value("seed_budget", d.seed_budget);
  c.corpus_dir = j.value("corpus_dir", d.corpus_dir);
  c.corpus_profile = hdl::parse_size_profile(j.value("corpus_profile", std::string(hdl::to_string(d.corpus_profile))));
  c.corpus_size = j.value("corpus_size", d.corpus_size);
  std::string pol = j.value("policy", std::string("linucb"));
  auto pk = bandit::parse_policy(pol);
  if (!pk) throw ConfigError(fmt::format("unknown policy '{}'", pol));
  c.policy.policy = *pk;
  c.policy.alpha = j.value("alpha", d.policy.alpha);
  c.policy.beta = j.value("beta", d.policy.beta);
  c.policy.epsilon = j.value("epsilon", d.policy.epsilon);
  c.adapters_file = j.value("adapters", d.adapters_file);
  c.use_mock = j.value("use_mock", d.use_mock);
  c.mock = difftest::MockBugProfile::parse(j.value("mock_profile", std::string("none")));
  c.jobs = j.value("jobs", d.jobs);
  c.rng_seed = j.value("rng_seed", d.rng_seed);
  c.output_dir = j.value("output_dir", d.output_dir);
  c.checkpoint_every = j.value("checkpoint_every", d.checkpoint_every);
  c.reduce = j.value("reduce", d.reduce);
  c.max_input_bits = j.value("max_input_bits", d.max_input_bits);
  c.samples = j.value("samples", d.samples);
  c.cycles = j.value("cycles", d.cycles);
  c.policy.total_rounds = c.rounds;
}

CampaignConfig load_config(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(fmt::format("cannot open config {}", file.string()));
  CampaignConfig c;
  try {
    nlohmann::json j;
    in >> j;
    c = j.get<CampaignConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("{}: {}", file.string(), e.what()));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("{}: {}", file.string(), e.what()));
  }
  // Relative paths in the config resolve against its directory.
  fs::path base = file.parent_path();
  auto rebase = [&](std::string& p) {
    if (!p.empty() && fs::path(p).is_relative()) p = (base / p).lexically_normal().string();
  };
  rebase(c.corpus_dir);
  rebase(c.adapters_file);
  rebase(c.output_dir);
  c.validate();
  return c;
}

void to_json(nlohmann::json& j, const RoundLog& r) {
  j = nlohmann::json{{"round", r.round},   {"seed", r.seed},     {"arms", r.arms},
                     {"outcome", r.outcome}, {"signature", r.signature}, {"reward", r.reward},
                     {"unique_after", r.unique_after}};
}

void from_json(const nlohmann::json& j, RoundLog& r) {
  j.at("round").get_to(r.round);
  j.at("seed").get_to(r.seed);
  j.at("arms").get_to(r.arms);
  j.at("outcome").get_to(r.outcome);
  j.at("signature").get_to(r.signature);
  j.at("reward").get_to(r.reward);
  j.at("unique_after").get_to(r.unique_after);
}

CampaignState::CampaignState() { arms.fill(bandit::ArmState::fresh()); }

nlohmann::json CampaignState::to_json() const {
  nlohmann::json j;
  j["round"] = round;
  j["arms"] = arms;
  j["bugs_attributed"] = bugs_attributed;
  j["duplicates_attributed"] = duplicates_attributed;
  j["clusters"] = clusters.to_json();
  j["bugs"] = bugs.to_json();
  j["crash_observations"] = crash_observations;
  j["seed_cursor"] = seed_cursor;
  j["seed_uses"] = seed_uses;
  j["log"] = log;
  j["warnings"] = warnings;
  return j;
}

CampaignState CampaignState::from_json(const nlohmann::json& j) {
  CampaignState s;
  j.at("round").get_to(s.round);
  j.at("arms").get_to(s.arms);
  j.at("bugs_attributed").get_to(s.bugs_attributed);
  j.at("duplicates_attributed").get_to(s.duplicates_attributed);
  s.clusters = triage::ClusterRegistry::from_json(j.at("clusters"));
  s.bugs = triage::BugRegistry::from_json(j.at("bugs"));
  j.at("crash_observations").get_to(s.crash_observations);
  j.at("seed_cursor").get_to(s.seed_cursor);
  j.at("seed_uses").get_to(s.seed_uses);
  j.at("log").get_to(s.log);
  j.at("warnings").get_to(s.warnings);
  return s;
}

namespace {

struct SeedRef {
  std::unique_ptr<sim::Simulator> sim;
  sim::StimulusPlan plan;
  sim::BatchTrace trace;
};

struct Finding {
  std::string kind;  // crash | inconsistency
  std::string signature;
  int cluster = -1;
  std::string log;
  nlohmann::json detail;
  double reward_if_new = 0.0;
};

std::vector<Design> load_corpus(const CampaignConfig& cfg, std::vector<std::string>& names) {
  std::vector<Design> out;
  if (!cfg.corpus_dir.empty()) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(cfg.corpus_dir))
      if (e.is_regular_file() && e.path().extension() == ".v") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      out.push_back(hdl::parse_file(f));
      names.push_back(f.filename().string());
    }
    if (out.empty()) throw ConfigError(fmt::format("no .v seeds in {}", cfg.corpus_dir));
    return out;
  }
  for (std::size_t i = 0; i < cfg.corpus_size; ++i) {
    std::uint64_t s = derive_seed(cfg.rng_seed, i, kCorpusStream);
    out.push_back(hdl::gen_seed(s, cfg.corpus_profile));
    names.push_back(fmt::format("gen:{}:{:016x}", hdl::to_string(cfg.corpus_profile), s));
  }
  return out;
}

void write_text(const fs::path& p, const std::string& s) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << s;
  if (!out) throw Error(fmt::format("cannot write {}", p.string()));
}

void atomic_write(const fs::path& p, const std::string& s) {
  fs::path tmp = p;
  tmp += ".tmp";
  write_text(tmp, s);
  fs::rename(tmp, p);
}

}  // namespace

struct Campaign::Impl {
  std::vector<Design> corpus;
  std::vector<std::string> names;
  std::vector<std::optional<SeedRef>> refs;
  std::vector<difftest::ToolAdapter> adapters;
  std::set<std::string> missing_tools;

  SeedRef& ref(const CampaignConfig& cfg, std::size_t idx) {
    auto& r = refs[idx];
    if (!r) {
      SeedRef s;
      s.sim = std::make_unique<sim::Simulator>(corpus[idx]);
      s.plan = sim::make_plan(s.sim->input_bits(), cfg.max_input_bits, cfg.cycles,
                              derive_seed(cfg.rng_seed, idx, kStimulusStream), cfg.samples);
      s.trace = sim::run_plan(*s.sim, s.plan);
      r = std::move(s);
    }
    return *r;
  }
};

Campaign::Campaign(CampaignConfig cfg) : cfg_(std::move(cfg)), impl_(std::make_unique<Impl>()) {
  cfg_.policy.total_rounds = cfg_.rounds;
  cfg_.validate();
  impl_->corpus = load_corpus(cfg_, impl_->names);
  impl_->refs.resize(impl_->corpus.size());
  if (!cfg_.adapters_file.empty()) impl_->adapters = difftest::load_adapters(cfg_.adapters_file);
}

Campaign::~Campaign() = default;
Campaign::Campaign(Campaign&&) noexcept = default;

const std::vector<Design>& Campaign::corpus() const { return impl_->corpus; }

Campaign Campaign::resume(CampaignConfig cfg, const fs::path& state_file) {
  std::ifstream in(state_file);
  if (!in) throw ConfigError(fmt::format("cannot open checkpoint {}", state_file.string()));
  nlohmann::json j;
  in >> j;
  Campaign c(std::move(cfg));
  if (j.at("config") != nlohmann::json(c.cfg_))
    throw ConfigError("checkpoint was written under a different configuration");
  c.state_ = CampaignState::from_json(j.at("state"));
  return c;
}

void Campaign::checkpoint(const fs::path& file) const {
  nlohmann::json j;
  j["config"] = cfg_;
  j["state"] = state_.to_json();
  atomic_write(file, j.dump());
}

void Campaign::run(std::optional<std::uint64_t> stop_after, const std::function<bool(const CampaignState&)>& done) {
  std::uint64_t end = cfg_.rounds;
  if (stop_after) end = std::min(end, *stop_after);
  fs::path out = cfg_.output_dir;
  while (state_.round < end) {
    run_round();
    if (!out.empty() && state_.round % cfg_.checkpoint_every == 0) checkpoint(out / "state.json");
    if (done && done(state_)) break;
  }
  if (!out.empty()) {
    checkpoint(out / "state.json");
    write_outputs();
  }
}

void Campaign::run_round() {
  Impl& im = *impl_;
  const std::uint64_t t = state_.round;
  const std::size_t seed_idx = state_.seed_cursor;
  if (++state_.seed_uses >= cfg_.seed_budget) {
    state_.seed_uses = 0;
    state_.seed_cursor = (state_.seed_cursor + 1) % im.corpus.size();
  }
  const Design& seed = im.corpus[seed_idx];

  // Contexts are fixed for the whole round; the bandit learns after it.
  std::array<bandit::Vec, metamorph::kStrategyCount> xs;
  std::array<double, metamorph::kStrategyCount> fs_{};
  std::uint64_t max_h = *std::max_element(state_.bugs_attributed.begin(), state_.bugs_attributed.end());
  for (int a = 0; a < metamorph::kStrategyCount; ++a) {
    double h = static_cast<double>(state_.bugs_attributed[a]) / static_cast<double>(std::max<std::uint64_t>(1, max_h));
    fs_[a] = triage::frequency(state_.duplicates_attributed[a], std::max<std::uint64_t>(1, t));
    xs[a] = bandit::context(a, h, fs_[a]);
  }

  Design d = seed;
  std::vector<MutationRecord> lineage;
  std::vector<int> arms;
  for (int link = 0; link < cfg_.chain_depth; ++link) {
    std::vector<int> allowed{0, 1, 2, 3};
    for (std::uint64_t attempt = 0; !allowed.empty(); ++attempt) {
      std::vector<bandit::ArmView> views;
      for (int a : allowed) views.push_back({a, &state_.arms[a], xs[a], fs_[a]});
      std::uint64_t slot = static_cast<std::uint64_t>(link) * 16 + attempt;
      Rng prng(derive_seed(cfg_.rng_seed, t, slot, kPolicyStream));
      std::size_t pick = bandit::select(views, cfg_.policy, prng);
      int arm = allowed[pick];
      try {
        auto m = metamorph::apply(d, static_cast<StrategyId>(arm), derive_seed(cfg_.rng_seed, t, slot, kMutationStream));
        d = std::move(m.design);
        lineage.push_back(std::move(m.record));
        arms.push_back(arm);
        break;
      } catch (const StrategyInapplicable&) {
        allowed.erase(allowed.begin() + static_cast<std::ptrdiff_t>(pick));
      }
    }
  }

  SeedRef& ref = im.ref(cfg_, seed_idx);
  auto lineage_json = [&] { return nlohmann::json(lineage).dump(); };
  // Framework self-check: the variant must behave exactly like its seed.
  if (!lineage.empty()) {
    try {
      sim::check_same_interface(seed, d);
      sim::Simulator vs(d);
      auto vt = sim::run_plan(vs, ref.plan);
      if (auto k = sim::first_difference(ref.trace, vt))
        throw FrameworkError(fmt::format("equivalence self-check failed: round {} seed {} stimulus {} lineage {}", t + 1,
                                         im.names[seed_idx], *k, lineage_json()));
    } catch (const InterfaceMismatch& e) {
      throw FrameworkError(fmt::format("equivalence self-check failed: round {} seed {}: {} lineage {}", t + 1,
                                       im.names[seed_idx], e.what(), lineage_json()));
    }
  }

  std::vector<Finding> findings;
  auto crash_finding = [&](const std::string& log, const std::string& tool) {
    Finding f;
    f.kind = "crash";
    auto feat = triage::featurize(log);
    auto a = state_.clusters.assign(feat, state_.crash_observations++);
    f.cluster = a.id;
    f.signature = reduce::crash_signature(a.id);
    f.log = log;
    f.detail = {{"tool", tool}, {"tokens", feat.token_summary}, {"similarity", a.similarity}};
    f.reward_if_new = kRewardNewCrash;
    findings.push_back(std::move(f));
  };
  auto diverges_from_seed = [&](const Design& c, const difftest::MockBugProfile& prof) {
    auto r = difftest::mock_synthesize(c, prof);
    if (!r.netlist || r.rewrites == 0) return false;
    sim::Simulator ns(*r.netlist);
    return sim::first_difference(ref.trace, sim::run_plan(ns, ref.plan)).has_value();
  };
  auto inconsistency_finding = [&](const difftest::Divergence& div, const std::string& log,
                                   const std::function<bool(const Design&)>& fails) {
    Finding f;
    f.kind = "inconsistency";
    std::size_t k = reduce::bisect_lineage(seed, lineage, fails);
    const MutationRecord& culprit = lineage[std::min(k, lineage.size() - 1)];
    f.signature = reduce::inconsistency_signature(culprit);
    f.log = log;
    f.detail = {{"divergence", div}, {"culprit_link", k}, {"stimulus", sim::unpack(ref.plan.vector(div.stimulus, div.cycle), ref.sim->inputs())}};
    f.reward_if_new = kRewardNewInconsistency;
    findings.push_back(std::move(f));
  };

  if (cfg_.use_mock && !lineage.empty()) {
    auto r = difftest::mock_synthesize(d, cfg_.mock);
    if (r.outcome.kind == RunOutcome::Kind::Crash) {
      crash_finding(r.outcome.log, "mock");
    } else if (r.rewrites > 0) {
      sim::Simulator ns(*r.netlist);
      if (auto div = difftest::compare(ref.trace, sim::run_plan(ns, ref.plan), "mock")) {
        auto prof = cfg_.mock;
        inconsistency_finding(*div, r.outcome.log, [&](const Design& c) { return diverges_from_seed(c, prof); });
      }
    }
  }

  if (!im.adapters.empty() && !lineage.empty() && !cfg_.output_dir.empty()) {
    fs::path work = fs::path(cfg_.output_dir) / "work" / std::to_string(t + 1);
    auto tc = difftest::materialize(d, work / "case");
    std::vector<RunOutcome> outcomes(im.adapters.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < im.adapters.size(); i = next++)
        outcomes[i] = difftest::run_tool(im.adapters[i], tc, work / im.adapters[i].name);
    };
    std::vector<std::thread> pool;
    for (int j = 0; j < std::min<int>(cfg_.jobs, static_cast<int>(im.adapters.size())); ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    std::size_t before = findings.size();
    for (std::size_t i = 0; i < im.adapters.size(); ++i) {
      const auto& ad = im.adapters[i];
      const auto& o = outcomes[i];
      switch (o.kind) {
        case RunOutcome::Kind::ToolMissing:
          if (im.missing_tools.insert(ad.name).second)
            state_.warnings.push_back(fmt::format("adapter '{}' skipped: tool missing", ad.name));
          break;
        case RunOutcome::Kind::Timeout:
          state_.warnings.push_back(fmt::format("round {}: adapter '{}' timed out", t + 1, ad.name));
          break;
        case RunOutcome::Kind::Crash: crash_finding(o.log, ad.name); break;
        case RunOutcome::Kind::Success: {
          if (o.netlist.empty()) break;
          try {
            Design net = hdl::parse_file(o.netlist);
            sim::check_same_interface(d, net);
            sim::Simulator ns(net);
            if (auto div = difftest::compare(ref.trace, sim::run_plan(ns, ref.plan), ad.name)) {
              // Without an in-process model of the tool, the last link is the culprit.
              Finding f;
              f.kind = "inconsistency";
              f.signature = reduce::inconsistency_signature(lineage.back()) + ":" + ad.name;
              f.log = o.log;
              f.detail = {{"divergence", *div}};
              f.reward_if_new = kRewardNewInconsistency;
              findings.push_back(std::move(f));
            }
          } catch (const Error& e) {
            if (im.missing_tools.insert(ad.name + ":netlist").second)
              state_.warnings.push_back(fmt::format("adapter '{}': netlist not comparable ({})", ad.name, e.what()));
          }
          break;
        }
      }
    }
    if (findings.size() == before) fs::remove_all(work);
  }

  RoundLog rl;
  rl.round = t + 1;
  rl.seed = seed_idx;
  rl.arms = arms;
  rl.outcome = "clean";
  double reward = 0.0;
  if (!findings.empty()) {
    int owner = arms.back();
    for (auto& f : findings) {
      triage::BugRecord proto;
      proto.kind = f.kind;
      proto.signature = f.signature;
      proto.cluster = f.cluster;
      proto.arm = owner;
      proto.first_round = t + 1;
      proto.lineage = lineage;
      proto.seed = im.names[seed_idx];
      proto.log_digest = hex_digest(f.log);
      proto.detail = f.detail;
      auto obs = state_.bugs.observe(proto);
      double r = obs.is_new ? f.reward_if_new : kRewardDuplicate;
      if (obs.is_new) {
        ++state_.bugs_attributed[owner];
        if (!cfg_.output_dir.empty() && cfg_.reduce) {
          // Minimize and store a reproducer.
          auto& bug = state_.bugs.at(obs.id);
          fs::path dir = fs::path(cfg_.output_dir) / "bugs" / std::to_string(obs.id);
          difftest::materialize(d, dir / "variant");
          write_text(dir / "tool.log", f.log);
          write_text(dir / "lineage.json", nlohmann::json(lineage).dump(2) + "\n");
          reduce::Predicate pred;
          auto prof = cfg_.mock;
          if (f.kind == "crash") {
            int cl = f.cluster;
            pred = [this, prof, cl](const Design& c) {
              auto r2 = difftest::mock_synthesize(c, prof);
              if (r2.outcome.kind != RunOutcome::Kind::Crash) return false;
              return state_.clusters.nearest(triage::featurize(r2.outcome.log)) == std::optional<int>(cl);
            };
          } else {
            int bits = cfg_.max_input_bits;
            std::size_t cyc = cfg_.cycles;
            pred = [prof, bits, cyc](const Design& c) {
              auto r2 = difftest::mock_synthesize(c, prof);
              if (!r2.netlist || r2.rewrites == 0) return false;
              return !sim::exhaustive_equiv(c, *r2.netlist, bits, cyc).equivalent();
            };
          }
          try {
            if (!cfg_.use_mock) throw reduce::NotFailing("reduction needs the in-process mock");
            auto red = reduce::reduce(d, pred);
            difftest::materialize(red.design, dir / "min");
            std::string rlog;
            for (const auto& l : red.log) rlog += l + "\n";
            rlog += fmt::format("evaluations {}\nnon_minimal {}\n", red.evaluations, red.non_minimal);
            write_text(dir / "reduction.log", rlog);
            bug.reproducer_path = fmt::format("bugs/{}/min/top.v", obs.id);
            bug.detail["non_minimal"] = red.non_minimal;
          } catch (const reduce::NotFailing& e) {
            bug.reproducer_path = fmt::format("bugs/{}/variant/top.v", obs.id);
            bug.detail["reduction"] = e.what();
          } catch (const reduce::FlakyPredicate& e) {
            throw FrameworkError(fmt::format("flaky backend while reducing bug {}: {}", obs.id, e.what()));
          }
        }
      } else {
        ++state_.duplicates_attributed[owner];
      }
      if (r > reward) {
        reward = r;
        rl.outcome = obs.is_new ? "new" : "duplicate";
        rl.signature = f.signature;
      }
    }
  }

  // Every link learns from the terminal outcome, discounted by distance.
  const std::size_t links = arms.size();
  for (std::size_t l = 0; l < links; ++l) {
    double r = reward * std::pow(kLinkDiscount, static_cast<double>(links - 1 - l));
    int a = arms[l];
    state_.arms[a] = bandit::update(state_.arms[a], xs[a], r);
  }
  rl.reward = reward;
  rl.unique_after = state_.bugs.bugs().size();
  state_.log.push_back(std::move(rl));
  state_.round = t + 1;
}

std::optional<std::uint64_t> Campaign::rounds_to_unique(std::size_t n) const {
  for (const auto& r : state_.log)
    if (r.unique_after >= n) return r.round;
  return std::nullopt;
}

nlohmann::json Campaign::report() const {
  nlohmann::json j;
  j["config"] = cfg_;
  j["rounds_completed"] = state_.round;
  std::uint64_t decisions = 0;
  for (const auto& r : state_.log) decisions += r.arms.size();
  j["decisions"] = decisions;
  j["unique_bugs"] = state_.bugs.bugs().size();
  j["observations"] = state_.bugs.total_observations();
  j["bugs"] = state_.bugs.to_json();
  j["crash_clusters"] = state_.clusters.clusters().size();
  nlohmann::json arms = nlohmann::json::array();
  for (int a = 0; a < metamorph::kStrategyCount; ++a) {
    const auto& s = state_.arms[a];
    arms.push_back({{"strategy", metamorph::to_string(static_cast<StrategyId>(a))},
                    {"pulls", s.pulls},
                    {"reward_sum", s.reward_sum},
                    {"bugs", state_.bugs_attributed[a]},
                    {"duplicates", state_.duplicates_attributed[a]}});
  }
  j["arms"] = arms;
  std::vector<std::size_t> curve;
  curve.reserve(state_.log.size());
  for (const auto& r : state_.log) curve.push_back(r.unique_after);
  j["curve"] = curve;
  nlohmann::json disc = nlohmann::json::array();
  for (const auto& b : state_.bugs.bugs()) disc.push_back({{"signature", b.signature}, {"round", b.first_round}});
  j["discovery"] = disc;
  j["warnings"] = state_.warnings;
  return j;
}

std::string Campaign::summary() const {
  std::ostringstream os;
  std::uint64_t decisions = 0;
  for (const auto& r : state_.log) decisions += r.arms.size();
  os << fmt::format("rounds {}  decisions {}  policy {}  mock {}\n", state_.round, decisions,
                    bandit::to_string(cfg_.policy.policy), cfg_.use_mock ? cfg_.mock.to_string() : "off");
  os << fmt::format("unique bugs {}  observations {}\n", state_.bugs.bugs().size(), state_.bugs.total_observations());
  for (const auto& b : state_.bugs.bugs())
    os << fmt::format("  #{} {:<13} {:<44} C={:<4} first@{:<5} arm={} {}\n", b.id, b.kind, b.signature, b.count,
                      b.first_round, metamorph::to_string(static_cast<StrategyId>(b.arm)), b.reproducer_path);
  os << "arms:\n";
  for (int a = 0; a < metamorph::kStrategyCount; ++a) {
    const auto& s = state_.arms[a];
    os << fmt::format("  {:<20} pulls {:<6} reward {:<8.3f} bugs {:<3} dups {}\n",
                      metamorph::to_string(static_cast<StrategyId>(a)), s.pulls, s.reward_sum,
                      state_.bugs_attributed[a], state_.duplicates_attributed[a]);
  }
  for (const auto& w : state_.warnings) os << "warning: " << w << "\n";
  return os.str();
}

void Campaign::write_outputs() const {
  fs::path out = cfg_.output_dir;
  fs::create_directories(out);
  atomic_write(out / "report.json", report().dump(2) + "\n");
  atomic_write(out / "bugs.jsonl", state_.bugs.to_jsonl());
  std::string dec;
  for (const auto& r : state_.log) dec += nlohmann::json(r).dump() + "\n";
  atomic_write(out / "decisions.jsonl", dec);
  std::string curve = "round,unique\n";
  for (const auto& r : state_.log) curve += fmt::format("{},{}\n", r.round, r.unique_after);
  atomic_write(out / "curve.csv", curve);
  atomic_write(out / "summary.txt", summary());
}

std::vector<BenchRun> bench_policies(const CampaignConfig& base, const std::vector<bandit::PolicyKind>& policies,
                                     const std::vector<std::uint64_t>& rng_seeds, std::size_t target) {
  std::vector<BenchRun> runs;
  for (auto p : policies)
    for (auto s : rng_seeds) runs.push_back({p, s, 0, std::nullopt});
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr err;
  auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      try {
        CampaignConfig cfg = base;
        cfg.policy.policy = runs[i].policy;
        cfg.rng_seed = runs[i].rng_seed;
        cfg.output_dir.clear();
        Campaign c(cfg);
        c.run(std::nullopt, [&](const CampaignState& st) { return st.bugs.bugs().size() >= target; });
        runs[i].unique = c.state().bugs.bugs().size();
        runs[i].rounds_to_all = c.rounds_to_unique(target);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  unsigned n = std::min<unsigned>(static_cast<unsigned>(runs.size()), std::max<unsigned>(hw, static_cast<unsigned>(base.jobs)));
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
  return runs;
}

std::uint64_t censored_time(const BenchRun& r, std::uint64_t rounds) { return r.rounds_to_all.value_or(rounds + 1); }

nlohmann::json bench_report(const std::vector<BenchRun>& runs, std::uint64_t rounds) {
  nlohmann::json j;
  j["rounds"] = rounds;
  nlohmann::json rows = nlohmann::json::array();
  std::map<std::string, std::pair<double, int>> mean;
  for (const auto& r : runs) {
    std::string p = bandit::to_string(r.policy);
    rows.push_back({{"policy", p},
                    {"rng_seed", r.rng_seed},
                    {"unique", r.unique},
                    {"rounds_to_all", r.rounds_to_all ? nlohmann::json(*r.rounds_to_all) : nlohmann::json(nullptr)}});
    mean[p].first += static_cast<double>(censored_time(r, rounds));
    mean[p].second += 1;
  }
  j["runs"] = rows;
  nlohmann::json m;
  for (const auto& [p, v] : mean) m[p] = v.first / v.second;
  j["mean_rounds_to_all"] = m;
  return j;
}

}  // namespace metahunt::campaign
