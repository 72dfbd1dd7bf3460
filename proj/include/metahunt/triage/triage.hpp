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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "metahunt/error.hpp"
#include "metahunt/metamorph/metamorph.hpp"

namespace metahunt::triage {

inline constexpr std::size_t kFeatureDim = 256;

class EmptyLog : public Error {
 public:
  using Error::Error;
};

class ZeroVector : public Error {
 public:
  using Error::Error;
};

struct LogFeature {
  std::vector<double> vector;
  std::vector<std::string> token_summary;
};

// Replaces hex literals with ADDR, filesystem paths with PATH and
// free-standing decimal integers with NUM.
std::string mask_log(std::string_view log);
// Identifier-like tokens of the masked log; `a::b` stays one token.
std::vector<std::string> tokenize(std::string_view masked);

// Signed feature hashing of the masked tokens into kFeatureDim buckets,
// L2-normalized. Throws EmptyLog.
LogFeature featurize(std::string_view log);

double cosine(const std::vector<double>& u, const std::vector<double>& v);

// f_a = duplicates / T clamped to [0, 1]; T >= 1.
double frequency(std::uint64_t duplicates, std::uint64_t rounds);
double frequency(const std::vector<std::uint64_t>& duplicate_counts, std::uint64_t rounds);

struct BugCluster {
  int id = 0;
  std::vector<double> centroid;
  std::vector<std::uint64_t> members;

  std::uint64_t count() const { return members.size(); }
};

// Incremental threshold clustering with a periodic cosine K-means refit
// (k = cluster count, seeded from the current centroids).
class ClusterRegistry {
 public:
  explicit ClusterRegistry(double threshold = 0.85, std::size_t refit_every = 50, int kmeans_iterations = 20);

  struct Assignment {
    int id = 0;
    bool is_new = false;
    double similarity = 0.0;
  };

  Assignment assign(const LogFeature& f, std::uint64_t member_id);
  // Cluster the feature would join, without recording it.
  std::optional<int> nearest(const LogFeature& f) const;
  const std::vector<BugCluster>& clusters() const { return clusters_; }
  std::uint64_t observations() const { return vectors_.size(); }
  // Runs the K-means refit now.
  void refit();

  nlohmann::json to_json() const;
  static ClusterRegistry from_json(const nlohmann::json& j);

 private:
  void recompute_centroid(BugCluster& c) const;

  double threshold_;
  std::size_t refit_every_;
  int iterations_;
  std::size_t new_since_refit_ = 0;
  std::vector<BugCluster> clusters_;
  std::map<std::uint64_t, std::vector<double>> vectors_;
};

// One unique bug: a crash cluster or an inconsistency fingerprint.
struct BugRecord {
  std::uint64_t id = 0;
  std::string kind;  // "crash" | "inconsistency"
  std::string signature;
  int cluster = -1;
  std::uint64_t count = 0;  // C_i
  int arm = -1;
  std::uint64_t first_round = 0;
  std::vector<metamorph::MutationRecord> lineage;
  std::string seed;
  std::string log_digest;
  std::string reproducer_path;
  nlohmann::json detail;
};

void to_json(nlohmann::json& j, const BugRecord& b);
void from_json(const nlohmann::json& j, BugRecord& b);

// Unique bugs keyed by signature, with repetition counters.
class BugRegistry {
 public:
  struct Observation {
    std::uint64_t id = 0;
    bool is_new = false;
  };

  // `proto` supplies the record stored on first sight.
  Observation observe(const BugRecord& proto);
  const std::vector<BugRecord>& bugs() const { return bugs_; }
  BugRecord& at(std::uint64_t id) { return bugs_.at(id); }
  std::uint64_t total_observations() const;

  // One JSON object per line.
  std::string to_jsonl() const;
  nlohmann::json to_json() const;
  static BugRegistry from_json(const nlohmann::json& j);

 private:
  std::vector<BugRecord> bugs_;
  std::map<std::string, std::uint64_t> by_signature_;
};

}  // namespace metahunt::triage
