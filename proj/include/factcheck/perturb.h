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

#ifndef FACTCHECK_PERTURB_H_
#define FACTCHECK_PERTURB_H_

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "factcheck/corpus.h"

namespace factcheck {

// Normalized (case-folded, whitespace-collapsed) entity strings.
using EntitySet = std::set<std::string>;

class EntityRecognizer {
 public:
  virtual ~EntityRecognizer() = default;
  virtual EntitySet Extract(std::string_view text) const = 0;
};

// Dependency-free recognizer: maximal spans of capitalized tokens that do
// not start a sentence, plus all-caps tokens of length >= 2 anywhere.
// Punctuation ends a span. The sentence-initial token is dropped from the
// span it starts ("The White House" -> "white house"). The pronoun "I" is
// never an entity.
class CapitalizationRecognizer : public EntityRecognizer {
 public:
  EntitySet Extract(std::string_view text) const override;
};

const EntityRecognizer& DefaultRecognizer();

EntitySet ExtractNamedEntities(std::string_view text,
                               const EntityRecognizer& recognizer =
                                   DefaultRecognizer());
std::string NormalizeEntity(std::string_view entity);

// |a ∩ b| / |a ∪ b|, and 0 when both are empty.
double Jaccard(const EntitySet& a, const EntitySet& b);

double NeOverlap(const std::vector<std::string>& evidence_sentences,
                 const std::vector<std::string>& non_evidence_sentences,
                 const EntityRecognizer& recognizer = DefaultRecognizer());

struct PoolEntry {
  std::string article_id;
  std::string text;
  EntitySet entities;
};

// Candidate replacement sentences. Read-only after construction.
class ReplacementPool {
 public:
  ReplacementPool() = default;
  explicit ReplacementPool(std::vector<PoolEntry> entries)
      : entries_(std::move(entries)) {}

  static ReplacementPool FromDataset(
      const std::vector<ArticleInstance>& dataset,
      const EntityRecognizer& recognizer = DefaultRecognizer());
  // Lines: article_id <TAB> sentence [<TAB> entity | entity ...]. Entities
  // are recomputed with the recognizer when the third column is absent.
  static ReplacementPool Parse(std::string_view text,
                               const EntityRecognizer& recognizer =
                                   DefaultRecognizer());
  static ReplacementPool Load(const std::filesystem::path& path,
                              const EntityRecognizer& recognizer =
                                  DefaultRecognizer());
  std::string Serialize() const;

  const std::vector<PoolEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<PoolEntry> entries_;
};

// A test article after even splitting; origin_map[i] is the original
// article index of article.sentences[i].
struct PerturbedArticle {
  ArticleInstance article;
  std::vector<int> origin_map;

  bool operator==(const PerturbedArticle&) const = default;
};

nlohmann::json ToJson(const PerturbedArticle& perturbed);
PerturbedArticle PerturbedArticleFromJson(const nlohmann::json& record);

PerturbedArticle Unperturbed(const ArticleInstance& article);

// Keeps the sentences of every chain of the source article and samples the
// rest uniformly until the non-evidence count equals the sum of all chain
// lengths (or the article runs out). Sentence order is preserved.
ChainInstance BuildEvenSplit(const ChainInstance& instance, uint64_t seed);

// Keeps the union of the chains and samples at most as many non-evidence
// sentences as there are evidence sentences.
PerturbedArticle BuildEvenSplit(const ArticleInstance& article, uint64_t seed);

enum class FallbackKind { kAnyEntity, kKeptOriginal };

struct FallbackRecord {
  std::string instance_id;
  int sentence_index = 0;
  FallbackKind kind = FallbackKind::kAnyEntity;
};

std::string FormatFallback(const FallbackRecord& record);

template <typename Instance>
struct AdversarialResult {
  Instance instance;
  std::vector<FallbackRecord> fallbacks;
};

// Replaces every non-evidence sentence with a pool sentence from another
// article sharing at least one entity with the evidence sentences, sampled
// uniformly with replacement. When none qualifies the draw relaxes to any
// foreign sentence carrying an entity, then keeps the original; both cases
// are logged.
AdversarialResult<ChainInstance> BuildAdversarial(
    const ChainInstance& instance, const ReplacementPool& pool, uint64_t seed,
    const EntityRecognizer& recognizer = DefaultRecognizer());
AdversarialResult<PerturbedArticle> BuildAdversarial(
    const PerturbedArticle& article, const ReplacementPool& pool,
    uint64_t seed, const EntityRecognizer& recognizer = DefaultRecognizer());

}  // namespace factcheck

#endif  // FACTCHECK_PERTURB_H_
