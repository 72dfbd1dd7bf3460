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

#include "metahunt/triage/triage.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "metahunt/hash.hpp"
#include "metahunt/simd/lane_kernels.hpp"

namespace metahunt::triage {

namespace {

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool path_char(char c) { return ident_char(c) || c == '.' || c == '/' || c == '-' || c == '~'; }

double norm(const std::vector<double>& v) {
  const auto& k = simd::active_kernels();
  return std::sqrt(k.dot(v.data(), v.data(), v.size()));
}

void normalize(std::vector<double>& v) {
  double n = norm(v);
  if (n == 0.0) return;
  for (double& x : v) x /= n;
}

bool is_placeholder(const std::string& t) { return t == "ADDR" || t == "PATH" || t == "NUM"; }

bool salient(const std::string& t) {
  if (is_placeholder(t)) return false;
  if (t.find("::") != std::string::npos || t.find('_') != std::string::npos) return t.size() >= 3;
  if (t.size() < 3) return false;
  return std::all_of(t.begin(), t.end(), [](char c) { return std::isupper(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)); });
}

}  // namespace

std::string mask_log(std::string_view log) {
  std::string out;
  out.reserve(log.size());
  std::size_t i = 0;
  while (i < log.size()) {
    char c = log[i];
    bool boundary = i == 0 || !ident_char(log[i - 1]);
    if (boundary && c == '0' && i + 2 < log.size() && (log[i + 1] == 'x' || log[i + 1] == 'X') &&
        std::isxdigit(static_cast<unsigned char>(log[i + 2]))) {
      std::size_t j = i + 2;
      while (j < log.size() && std::isxdigit(static_cast<unsigned char>(log[j]))) ++j;
      if (j == log.size() || !ident_char(log[j])) {
        out += "ADDR";
        i = j;
        continue;
      }
    }
    if (path_char(c) && (i == 0 || !path_char(log[i - 1]))) {
      std::size_t j = i;
      while (j < log.size() && path_char(log[j])) ++j;
      std::string_view run = log.substr(i, j - i);
      if (run.find('/') != std::string_view::npos && run.size() > 1) {
        out += "PATH";
        i = j;
        continue;
      }
    }
    if (std::isdigit(static_cast<unsigned char>(c)) && boundary) {
      std::size_t j = i;
      while (j < log.size() && std::isdigit(static_cast<unsigned char>(log[j]))) ++j;
      if (j == log.size() || !ident_char(log[j])) {
        out += "NUM";
        i = j;
        continue;
      }
    }
    out += c;
    ++i;
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> toks;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!ident_char(s[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    for (;;) {
      while (j < s.size() && ident_char(s[j])) ++j;
      if (j + 2 < s.size() && s[j] == ':' && s[j + 1] == ':' && ident_char(s[j + 2])) {
        j += 2;
        continue;
      }
      break;
    }
    toks.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return toks;
}

LogFeature featurize(std::string_view log) {
  if (log.find_first_not_of(" \t\r\n") == std::string_view::npos) throw EmptyLog("log is empty");
  std::string masked = mask_log(log);
  auto toks = tokenize(masked);
  // Punctuation-only logs still need a direction.
  if (toks.empty()) toks.push_back(masked);

  LogFeature f;
  f.vector.assign(kFeatureDim, 0.0);
  // Sublinear term frequency so repeated placeholders do not dominate.
  std::map<std::string, int> counts;
  for (const auto& t : toks) {
    if (++counts[t] == 1 && f.token_summary.size() < 8 && salient(t)) f.token_summary.push_back(t);
  }
  for (const auto& [t, n] : counts) {
    std::uint64_t h = fnv1a64(t);
    double sign = (h >> 63) ? -1.0 : 1.0;
    // Placeholders mark structure only; keep them weak.
    double w = is_placeholder(t) ? 0.25 : 1.0;
    f.vector[h % kFeatureDim] += sign * w * (1.0 + std::log(static_cast<double>(n)));
  }
  if (norm(f.vector) == 0.0) {
    // Signed collisions cancelled out; fall back to unsigned weights.
    for (const auto& [t, n] : counts) f.vector[fnv1a64(t) % kFeatureDim] += 1.0 + std::log(static_cast<double>(n));
  }
  normalize(f.vector);
  return f;
}

double cosine(const std::vector<double>& u, const std::vector<double>& v) {
  if (u.size() != v.size()) throw Error(fmt::format("cosine: size mismatch {} vs {}", u.size(), v.size()));
  const auto& k = simd::active_kernels();
  double nu = std::sqrt(k.dot(u.data(), u.data(), u.size()));
  double nv = std::sqrt(k.dot(v.data(), v.data(), v.size()));
  if (nu == 0.0 || nv == 0.0) throw ZeroVector("cosine of a zero vector");
  return k.dot(u.data(), v.data(), u.size()) / (nu * nv);
}

double frequency(std::uint64_t duplicates, std::uint64_t rounds) {
  if (rounds == 0) throw Error("frequency: rounds must be >= 1");
  return std::clamp(static_cast<double>(duplicates) / static_cast<double>(rounds), 0.0, 1.0);
}

double frequency(const std::vector<std::uint64_t>& duplicate_counts, std::uint64_t rounds) {
  std::uint64_t total = 0;
  for (auto c : duplicate_counts) total += c;
  return frequency(total, rounds);
}

ClusterRegistry::ClusterRegistry(double threshold, std::size_t refit_every, int kmeans_iterations)
    : threshold_(threshold), refit_every_(refit_every), iterations_(kmeans_iterations) {}

void ClusterRegistry::recompute_centroid(BugCluster& c) const {
  if (c.members.empty()) return;  // keep the last centroid
  std::vector<double> sum(kFeatureDim, 0.0);
  for (auto m : c.members) {
    const auto& v = vectors_.at(m);
    for (std::size_t i = 0; i < kFeatureDim; ++i) sum[i] += v[i];
  }
  if (norm(sum) == 0.0) return;
  normalize(sum);
  c.centroid = std::move(sum);
}

std::optional<int> ClusterRegistry::nearest(const LogFeature& f) const {
  std::optional<int> best;
  double best_sim = -2.0;
  for (const auto& c : clusters_) {
    double s = cosine(f.vector, c.centroid);
    if (s > best_sim) {
      best_sim = s;
      best = c.id;
    }
  }
  if (best && best_sim < threshold_) return std::nullopt;
  return best;
}

ClusterRegistry::Assignment ClusterRegistry::assign(const LogFeature& f, std::uint64_t member_id) {
  if (f.vector.size() != kFeatureDim) throw Error("feature vector has wrong dimension");
  if (vectors_.count(member_id)) throw Error(fmt::format("member {} already assigned", member_id));
  Assignment a;
  int best = -1;
  double best_sim = -2.0;
  for (const auto& c : clusters_) {
    double s = cosine(f.vector, c.centroid);
    if (s > best_sim) {
      best_sim = s;
      best = c.id;
    }
  }
  vectors_[member_id] = f.vector;
  if (best >= 0 && best_sim >= threshold_) {
    auto& c = clusters_[static_cast<std::size_t>(best)];
    c.members.push_back(member_id);
    recompute_centroid(c);
    a.id = best;
    a.similarity = best_sim;
    return a;
  }
  BugCluster c;
  c.id = static_cast<int>(clusters_.size());
  c.centroid = f.vector;
  c.members.push_back(member_id);
  clusters_.push_back(std::move(c));
  a.id = clusters_.back().id;
  a.is_new = true;
  a.similarity = 1.0;
  if (++new_since_refit_ >= refit_every_) refit();
  return a;
}

void ClusterRegistry::refit() {
  new_since_refit_ = 0;
  if (clusters_.size() < 2) return;
  for (int it = 0; it < iterations_; ++it) {
    std::vector<std::vector<std::uint64_t>> next(clusters_.size());
    for (const auto& [id, v] : vectors_) {
      std::size_t best = 0;
      double best_sim = -2.0;
      for (std::size_t c = 0; c < clusters_.size(); ++c) {
        double s = cosine(v, clusters_[c].centroid);
        if (s > best_sim) {
          best_sim = s;
          best = c;
        }
      }
      next[best].push_back(id);
    }
    bool changed = false;
    for (std::size_t c = 0; c < clusters_.size(); ++c) {
      if (next[c] != clusters_[c].members) changed = true;
      clusters_[c].members = std::move(next[c]);
      recompute_centroid(clusters_[c]);
    }
    if (!changed) break;
  }
}

nlohmann::json ClusterRegistry::to_json() const {
  nlohmann::json j;
  j["threshold"] = threshold_;
  j["refit_every"] = refit_every_;
  j["iterations"] = iterations_;
  j["new_since_refit"] = new_since_refit_;
  j["clusters"] = nlohmann::json::array();
  for (const auto& c : clusters_)
    j["clusters"].push_back({{"id", c.id}, {"centroid", c.centroid}, {"members", c.members}});
  j["vectors"] = nlohmann::json::array();
  for (const auto& [id, v] : vectors_) j["vectors"].push_back({{"id", id}, {"v", v}});
  return j;
}

ClusterRegistry ClusterRegistry::from_json(const nlohmann::json& j) {
  ClusterRegistry r(j.at("threshold").get<double>(), j.at("refit_every").get<std::size_t>(),
                    j.at("iterations").get<int>());
  r.new_since_refit_ = j.at("new_since_refit").get<std::size_t>();
  for (const auto& c : j.at("clusters")) {
    BugCluster b;
    b.id = c.at("id").get<int>();
    b.centroid = c.at("centroid").get<std::vector<double>>();
    b.members = c.at("members").get<std::vector<std::uint64_t>>();
    r.clusters_.push_back(std::move(b));
  }
  for (const auto& v : j.at("vectors")) r.vectors_[v.at("id").get<std::uint64_t>()] = v.at("v").get<std::vector<double>>();
  return r;
}

void to_json(nlohmann::json& j, const BugRecord& b) {
  j = nlohmann::json{{"id", b.id},
                     {"kind", b.kind},
                     {"signature", b.signature},
                     {"cluster", b.cluster},
                     {"C_i", b.count},
                     {"arm", b.arm},
                     {"first_round", b.first_round},
                     {"lineage", b.lineage},
                     {"seed", b.seed},
                     {"log_digest", b.log_digest},
                     {"reproducer_path", b.reproducer_path},
                     {"detail", b.detail}};
}

void from_json(const nlohmann::json& j, BugRecord& b) {
  j.at("id").get_to(b.id);
  j.at("kind").get_to(b.kind);
  j.at("signature").get_to(b.signature);
  j.at("cluster").get_to(b.cluster);
  j.at("C_i").get_to(b.count);
  j.at("arm").get_to(b.arm);
  j.at("first_round").get_to(b.first_round);
  j.at("lineage").get_to(b.lineage);
  j.at("seed").get_to(b.seed);
  j.at("log_digest").get_to(b.log_digest);
  j.at("reproducer_path").get_to(b.reproducer_path);
  b.detail = j.value("detail", nlohmann::json());
}

BugRegistry::Observation BugRegistry::observe(const BugRecord& proto) {
  auto it = by_signature_.find(proto.signature);
  if (it != by_signature_.end()) {
    ++bugs_[it->second].count;
    return {it->second, false};
  }
  BugRecord b = proto;
  b.id = bugs_.size();
  b.count = 1;
  by_signature_[b.signature] = b.id;
  bugs_.push_back(std::move(b));
  return {bugs_.back().id, true};
}

std::uint64_t BugRegistry::total_observations() const {
  std::uint64_t n = 0;
  for (const auto& b : bugs_) n += b.count;
  return n;
}

std::string BugRegistry::to_jsonl() const {
  std::string out;
  for (const auto& b : bugs_) {
    out += nlohmann::json(b).dump();
    out += '\n';
  }
  return out;
}

nlohmann::json BugRegistry::to_json() const { return nlohmann::json(bugs_); }

BugRegistry BugRegistry::from_json(const nlohmann::json& j) {
  BugRegistry r;
  r.bugs_ = j.get<std::vector<BugRecord>>();
  for (const auto& b : r.bugs_) r.by_signature_[b.signature] = b.id;
  return r;
}

}  // namespace metahunt::triage
