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

#include "metahunt/reduce/reduce.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include <fmt/format.h>

#include "metahunt/hdl/analysis.hpp"
#include "metahunt/hdl/printer.hpp"
#include "metahunt/hdl/validate.hpp"

namespace metahunt::reduce {

using hdl::Design;
using hdl::Item;
using hdl::Module;
using hdl::Stmt;

namespace {

enum class Level { Modules, Items, Statements };

const char* level_name(Level l) {
  switch (l) {
    case Level::Modules: return "modules";
    case Level::Items: return "items";
    case Level::Statements: return "statements";
  }
  return "?";
}

// Address of one removable unit at a level.
struct Unit {
  std::size_t module = 0;
  std::size_t item = 0;
  // Statement path inside an always block: index, branch (0 then, 1 else),
  // index, ...
  std::vector<std::size_t> path;
};

void collect_stmts(const std::vector<Stmt>& body, std::vector<std::size_t>& prefix, std::size_t mod, std::size_t item,
                   std::vector<Unit>& out) {
  for (std::size_t i = 0; i < body.size(); ++i) {
    prefix.push_back(i);
    out.push_back({mod, item, prefix});
    if (body[i].kind == Stmt::Kind::If) {
      prefix.push_back(0);
      collect_stmts(body[i].then_body, prefix, mod, item, out);
      prefix.back() = 1;
      collect_stmts(body[i].else_body, prefix, mod, item, out);
      prefix.pop_back();
    }
    prefix.pop_back();
  }
}

std::vector<Unit> units(const Design& d, Level level) {
  std::vector<Unit> out;
  for (std::size_t m = 0; m < d.modules.size(); ++m) {
    const Module& mod = d.modules[m];
    if (level == Level::Modules) {
      if (mod.name != d.top) out.push_back({m, 0, {}});
      continue;
    }
    for (std::size_t i = 0; i < mod.items.size(); ++i) {
      const Item& it = mod.items[i];
      if (level == Level::Items) {
        out.push_back({m, i, {}});
      } else if (it.kind == Item::Kind::AlwaysComb || it.kind == Item::Kind::AlwaysFF) {
        std::vector<std::size_t> prefix;
        collect_stmts(it.body, prefix, m, i, out);
      }
    }
  }
  return out;
}

// Marks statements for deletion by replacing them with a sentinel, then
// sweeps. The sentinel is an assign with an empty target.
void mark_stmt(std::vector<Stmt>& body, const std::vector<std::size_t>& path, std::size_t depth) {
  Stmt& s = body[path[depth]];
  if (depth + 1 == path.size()) {
    s.kind = Stmt::Kind::Assign;
    s.lhs.clear();
    return;
  }
  auto& branch = path[depth + 1] == 0 ? s.then_body : s.else_body;
  mark_stmt(branch, path, depth + 2);
}

void sweep(std::vector<Stmt>& body) {
  body.erase(std::remove_if(body.begin(), body.end(),
                            [](const Stmt& s) { return s.kind == Stmt::Kind::Assign && s.lhs.empty(); }),
             body.end());
  for (auto& s : body) {
    if (s.kind == Stmt::Kind::If) {
      sweep(s.then_body);
      sweep(s.else_body);
    }
  }
}

Design remove(const Design& d, Level level, const std::vector<Unit>& all, const std::vector<bool>& drop) {
  Design out = d;
  if (level == Level::Modules) {
    std::vector<std::string> gone;
    for (std::size_t i = 0; i < all.size(); ++i)
      if (drop[i]) gone.push_back(d.modules[all[i].module].name);
    auto is_gone = [&](const std::string& n) { return std::find(gone.begin(), gone.end(), n) != gone.end(); };
    std::erase_if(out.modules, [&](const Module& m) { return is_gone(m.name); });
    for (auto& m : out.modules)
      std::erase_if(m.items, [&](const Item& it) { return it.kind == Item::Kind::Instance && is_gone(it.module); });
    return out;
  }
  if (level == Level::Items) {
    std::map<std::size_t, std::vector<std::size_t>> per_module;
    for (std::size_t i = 0; i < all.size(); ++i)
      if (drop[i]) per_module[all[i].module].push_back(all[i].item);
    for (auto& [m, items] : per_module) {
      auto& v = out.modules[m].items;
      for (auto it = items.rbegin(); it != items.rend(); ++it) v.erase(v.begin() + static_cast<std::ptrdiff_t>(*it));
    }
    return out;
  }
  for (std::size_t i = 0; i < all.size(); ++i)
    if (drop[i]) mark_stmt(out.modules[all[i].module].items[all[i].item].body, all[i].path, 0);
  for (auto& m : out.modules)
    for (auto& it : m.items)
      if (it.kind == Item::Kind::AlwaysComb || it.kind == Item::Kind::AlwaysFF) sweep(it.body);
  return out;
}

class Evaluator {
 public:
  Evaluator(const Predicate& p, std::size_t cap) : p_(p), cap_(cap) {}

  // nullopt when the cap is exhausted.
  std::optional<bool> fails(const Design& d) {
    if (!hdl::is_valid(d)) return false;
    std::string key = hdl::print(d);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    if (evaluations_ >= cap_) return std::nullopt;
    ++evaluations_;
    bool r = p_(d);
    memo_[key] = r;
    return r;
  }

  bool raw(const Design& d) {
    ++evaluations_;
    return p_(d);
  }

  std::size_t evaluations() const { return evaluations_; }

 private:
  const Predicate& p_;
  std::size_t cap_;
  std::size_t evaluations_ = 0;
  std::map<std::string, bool> memo_;
};

// One ddmin pass at a level. Returns true on progress; `capped` is set when
// the evaluation budget ran out.
bool ddmin(Design& d, Level level, Evaluator& ev, bool& capped, std::vector<std::string>& log) {
  std::vector<Unit> all = units(d, level);
  std::size_t len = all.size();
  if (len == 0) return false;
  std::vector<std::size_t> keep(len);
  for (std::size_t i = 0; i < len; ++i) keep[i] = i;
  std::size_t n = std::min<std::size_t>(2, len);
  bool progress = false;

  auto build = [&](const std::vector<std::size_t>& kept) {
    std::vector<bool> drop(len, true);
    for (auto k : kept) drop[k] = false;
    return remove(d, level, all, drop);
  };

  while (!keep.empty()) {
    std::size_t sz = keep.size();
    n = std::min(n, sz);
    std::vector<std::vector<std::size_t>> chunks(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t b = i * sz / n, e = (i + 1) * sz / n;
      chunks[i].assign(keep.begin() + static_cast<std::ptrdiff_t>(b), keep.begin() + static_cast<std::ptrdiff_t>(e));
    }
    bool reduced = false;
    // Subsets first, then complements (canonical order).
    if (n > 1) {
      for (std::size_t i = 0; i < n && !reduced; ++i) {
        auto r = ev.fails(build(chunks[i]));
        if (!r) {
          capped = true;
          break;
        }
        if (*r) {
          keep = chunks[i];
          n = 2;
          reduced = true;
        }
      }
    }
    if (capped) break;
    for (std::size_t i = 0; i < n && !reduced; ++i) {
      std::vector<std::size_t> comp;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) comp.insert(comp.end(), chunks[j].begin(), chunks[j].end());
      auto r = ev.fails(build(comp));
      if (!r) {
        capped = true;
        break;
      }
      if (*r) {
        keep = std::move(comp);
        n = std::max<std::size_t>(n - 1, 2);
        reduced = true;
      }
    }
    if (capped) break;
    if (reduced) {
      progress = true;
      continue;
    }
    if (n >= keep.size()) break;
    n = std::min(2 * n, keep.size());
  }
  if (keep.size() < len) {
    log.push_back(fmt::format("{}: {} -> {}", level_name(level), len, keep.size()));
    d = build(keep);
    progress = true;
  }
  return progress;
}

}  // namespace

std::size_t item_count(const Design& d) {
  std::size_t n = 0;
  for (const auto& m : d.modules) n += m.items.size() + (m.name == d.top ? 0 : 1);
  return n;
}

std::vector<Design> single_removals(const Design& d) {
  std::vector<Design> out;
  for (Level level : {Level::Modules, Level::Items}) {
    auto all = units(d, level);
    for (std::size_t i = 0; i < all.size(); ++i) {
      std::vector<bool> drop(all.size(), false);
      drop[i] = true;
      Design c = remove(d, level, all, drop);
      if (hdl::is_valid(c)) out.push_back(std::move(c));
    }
  }
  return out;
}

bool is_one_minimal(const Design& d, const Predicate& p) {
  for (const auto& c : single_removals(d))
    if (p(c)) return false;
  return true;
}

namespace {

std::size_t net_count(const Design& d) {
  std::size_t n = 0;
  for (const auto& m : d.modules) n += m.nets.size();
  return n;
}

// Drops non-port nets that no item reads or drives.
Design drop_unused_nets(const Design& d) {
  Design out = d;
  for (auto& m : out.modules) {
    std::set<std::string> used;
    for (const auto& it : m.items) {
      used.merge(hdl::item_reads(it, d));
      used.merge(hdl::item_drives(it, d));
    }
    std::erase_if(m.nets, [&](const hdl::Net& n) { return !used.contains(n.name); });
  }
  return out;
}

}  // namespace

ReduceResult reduce(const Design& d, const Predicate& p, const ReduceOptions& opts) {
  Evaluator ev(p, opts.max_evaluations);
  bool first = ev.raw(d);
  if (!first) throw NotFailing("predicate passes on the input design");
  if (!ev.raw(d)) throw FlakyPredicate("predicate changed its answer on an identical design");

  ReduceResult res;
  res.design = d;
  bool capped = false;
  for (bool progress = true; progress && !capped;) {
    progress = false;
    for (Level level : {Level::Modules, Level::Items, Level::Statements}) {
      if (ddmin(res.design, level, ev, capped, res.log)) {
        progress = true;
        break;  // restart from the coarsest level
      }
      if (capped) break;
    }
  }
  if (!capped) {
    Design tidy = drop_unused_nets(res.design);
    if (!(tidy == res.design) && hdl::is_valid(tidy)) {
      auto r = ev.fails(tidy);
      if (r && *r) {
        res.log.push_back(fmt::format("nets: dropped {} unused", net_count(res.design) - net_count(tidy)));
        res.design = std::move(tidy);
      }
    }
  }
  // The reduced design was accepted from a memoized answer; confirm it.
  auto confirm = ev.raw(res.design);
  if (!confirm) throw FlakyPredicate("reduced design no longer fails on re-evaluation");
  if (capped) {
    res.non_minimal = true;
    res.log.push_back(fmt::format("evaluation cap {} reached", opts.max_evaluations));
  } else {
    for (const auto& c : single_removals(res.design)) {
      auto r = ev.fails(c);
      if (!r || *r) {
        res.non_minimal = true;
        break;
      }
    }
  }
  res.evaluations = ev.evaluations();
  return res;
}

std::string crash_signature(int cluster) { return fmt::format("crash:c{}", cluster); }

std::string inconsistency_signature(const metamorph::MutationRecord& culprit) {
  std::string form = metamorph::summary_field(culprit.payload_summary, "form");
  return fmt::format("inconsistency:{}:{}", metamorph::to_string(culprit.strategy), form.empty() ? "?" : form);
}

std::size_t bisect_lineage(const Design& seed, const std::vector<metamorph::MutationRecord>& lineage,
                           const Predicate& fails, const metamorph::PayloadOptions& opts) {
  // Smallest k in [1, n] with fails(prefix k); answer is k - 1.
  std::size_t lo = 1, hi = lineage.size() + 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    std::vector<metamorph::MutationRecord> prefix(lineage.begin(), lineage.begin() + static_cast<std::ptrdiff_t>(mid));
    if (fails(metamorph::replay(seed, prefix, opts)))
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo - 1;
}

}  // namespace metahunt::reduce
