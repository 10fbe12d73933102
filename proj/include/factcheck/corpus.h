// Copyright 2026 The Factcheck Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FACTCHECK_CORPUS_H_
#define FACTCHECK_CORPUS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace factcheck {

enum class VeracityLabel { kFalse = 0, kHalfTrue = 1, kTrue = 2 };

inline constexpr int kNumLabels = 3;
inline constexpr std::array<VeracityLabel, kNumLabels> kAllLabels = {
    VeracityLabel::kFalse, VeracityLabel::kHalfTrue, VeracityLabel::kTrue};

std::string_view LabelName(VeracityLabel label);
// Accepts only the canonical lowercase names.
std::optional<VeracityLabel> ParseLabel(std::string_view name);
inline int LabelIndex(VeracityLabel label) { return static_cast<int>(label); }
VeracityLabel LabelFromIndex(int index);

enum class Split { kTrain, kDev, kTest };

std::string_view SplitName(Split split);
std::optional<Split> ParseSplit(std::string_view name);

using Chain = std::vector<int>;

struct ArticleInstance {
  std::string id;
  std::string claim;
  std::string speaker;
  VeracityLabel label = VeracityLabel::kFalse;
  std::vector<std::string> sentences;
  // Each chain is a strictly increasing list of sentence indices.
  std::vector<Chain> evidence_chains;
  Split split = Split::kTrain;

  bool operator==(const ArticleInstance&) const = default;
};

// One training unit per (article, chain). Sentences may be a subset of the
// article after perturbation; origin_map[i] is the article index of
// sentences[i].
struct ChainInstance {
  std::string article_id;
  int chain_id = 0;
  std::string claim;
  std::string speaker;
  VeracityLabel label = VeracityLabel::kFalse;
  std::vector<std::string> sentences;
  std::vector<int> evidence;  // sorted retained indices
  std::vector<int> origin_map;
  Split split = Split::kTrain;
  // Every chain of the source article, in article coordinates. Needed by
  // the even-split builder; not part of the evidence.
  std::vector<Chain> article_chains;

  bool operator==(const ChainInstance&) const = default;
};

// The model- and metric-facing view shared by chain instances and whole
// articles: a claim, a sentence list and one or more gold chains over it.
struct Example {
  std::string id;
  std::string claim;
  std::string speaker;
  VeracityLabel label = VeracityLabel::kFalse;
  std::vector<std::string> sentences;
  std::vector<Chain> chains;
};

Example ToExample(const ArticleInstance& article);
Example ToExample(const ChainInstance& instance);
std::vector<Example> ToExamples(const std::vector<ArticleInstance>& articles);
std::vector<Example> ToExamples(const std::vector<ChainInstance>& instances);

// Sorted union of all chains.
std::vector<int> ChainUnion(const std::vector<Chain>& chains);

// ---- Canonical line-delimited format ----

nlohmann::json ToJson(const ArticleInstance& article);
ArticleInstance ArticleFromJson(const nlohmann::json& record);
nlohmann::json ToJson(const ChainInstance& instance);
ChainInstance ChainInstanceFromJson(const nlohmann::json& record);

// One JSON object per line, keys in canonical order.
std::string SerializeCanonical(const std::vector<ArticleInstance>& dataset);
void WriteCanonical(const std::filesystem::path& path,
                    const std::vector<ArticleInstance>& dataset);

// Throws ParseError naming the line number for malformed lines and
// ValidationError naming the instance id for invariant violations.
std::vector<ArticleInstance> ParseCanonical(std::string_view text);
std::vector<ArticleInstance> LoadCanonical(const std::filesystem::path& path);

void WriteChainInstances(const std::filesystem::path& path,
                         const std::vector<ChainInstance>& instances);
std::vector<ChainInstance> LoadChainInstances(
    const std::filesystem::path& path);

// ---- Validation ----

struct Violation {
  std::string instance_id;
  std::string rule;
  std::string detail;
};

std::vector<Violation> ValidateInstance(const ArticleInstance& article);
std::vector<Violation> ValidateDataset(
    const std::vector<ArticleInstance>& dataset);
std::string FormatViolation(const Violation& violation);

// ---- Chain splitting and dev split ----

std::vector<ChainInstance> SplitChains(
    const std::vector<ArticleInstance>& dataset);

struct TrainDevSplit {
  std::vector<ChainInstance> train;
  std::vector<ChainInstance> dev;
};

// Article-grouped split: whole articles move to dev until exactly dev_count
// chain instances are there. Throws if dev_count >= total or if no grouping
// reaches dev_count exactly.
TrainDevSplit MakeDevSplit(const std::vector<ChainInstance>& instances,
                           int dev_count, uint64_t seed);

// ---- Statistics ----

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

struct StatsReport {
  int num_articles = 0;
  int num_chains = 0;
  MeanSd words_per_article;
  MeanSd sentences_per_article;
  MeanSd evidence_per_article;
  MeanSd evidence_per_chain;
  MeanSd chains_per_article;
  std::array<int, kNumLabels> label_counts{};
  // Percentages for chain lengths 1, 2, 3, 4, 5, 6+.
  std::array<double, 6> chain_length_histogram{};
};

StatsReport ComputeStats(const std::vector<ArticleInstance>& dataset);
nlohmann::json ToJson(const StatsReport& report);

// Stable content fingerprint (FNV-1a 64 over bytes) as 16 hex digits.
std::string Fingerprint(std::string_view bytes);
std::string FileFingerprint(const std::filesystem::path& path);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);

}  // namespace factcheck

#endif  // FACTCHECK_CORPUS_H_
