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

#include "factcheck/perturb.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "factcheck/error.h"
#include "factcheck/random.h"
#include "factcheck/text.h"

namespace factcheck {

using nlohmann::json;

// ---- Entities ----

namespace {

struct RawToken {
  std::string text;
  bool is_word = false;
};

bool IsWordChar(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

std::vector<RawToken> RawTokens(std::string_view text) {
  std::vector<RawToken> out;
  size_t i = 0;
  while (i < text.size()) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (!IsWordChar(c)) {
      out.push_back({std::string(1, text[i]), false});
      ++i;
      continue;
    }
    size_t j = i;
    while (j < text.size()) {
      const unsigned char d = static_cast<unsigned char>(text[j]);
      if (IsWordChar(d)) {
        ++j;
      } else if ((d == '\'' || d == '-') && j + 1 < text.size() &&
                 IsWordChar(static_cast<unsigned char>(text[j + 1]))) {
        ++j;
      } else {
        break;
      }
    }
    out.push_back({std::string(text.substr(i, j - i)), true});
    i = j;
  }
  return out;
}

bool IsCapitalized(const std::string& token) {
  return std::isupper(static_cast<unsigned char>(token[0])) && token != "I";
}

bool IsAllCaps(const std::string& token) {
  int letters = 0;
  for (unsigned char c : token) {
    if (std::isalpha(c)) {
      if (!std::isupper(c)) return false;
      ++letters;
    }
  }
  return letters >= 2;
}

}  // namespace

std::string NormalizeEntity(std::string_view entity) {
  std::string out;
  bool pending_space = false;
  for (unsigned char c : entity) {
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += static_cast<char>(std::tolower(c));
  }
  return out;
}

EntitySet CapitalizationRecognizer::Extract(std::string_view text) const {
  EntitySet entities;
  std::vector<std::string> span;
  auto flush = [&] {
    if (!span.empty()) {
      std::string joined;
      for (size_t i = 0; i < span.size(); ++i) {
        if (i) joined += ' ';
        joined += span[i];
      }
      std::string norm = NormalizeEntity(joined);
      if (!norm.empty()) entities.insert(norm);
      span.clear();
    }
  };
  bool sentence_start = true;
  for (const RawToken& token : RawTokens(text)) {
    if (!token.is_word) {
      flush();
      if (token.text == "." || token.text == "!" || token.text == "?") {
        sentence_start = true;
      }
      continue;
    }
    if (IsAllCaps(token.text)) entities.insert(NormalizeEntity(token.text));
    if (sentence_start) {
      sentence_start = false;
      continue;
    }
    if (IsCapitalized(token.text)) {
      span.push_back(token.text);
    } else {
      flush();
    }
  }
  flush();
  return entities;
}

const EntityRecognizer& DefaultRecognizer() {
  static const CapitalizationRecognizer recognizer;
  return recognizer;
}

EntitySet ExtractNamedEntities(std::string_view text,
                               const EntityRecognizer& recognizer) {
  return recognizer.Extract(text);
}

double Jaccard(const EntitySet& a, const EntitySet& b) {
  if (a.empty() && b.empty()) return 0.0;
  size_t intersection = 0;
  for (const auto& e : a) intersection += b.count(e);
  const size_t union_size = a.size() + b.size() - intersection;
  return static_cast<double>(intersection) / static_cast<double>(union_size);
}

namespace {

EntitySet UnionEntities(const std::vector<std::string>& sentences,
                        const EntityRecognizer& recognizer) {
  EntitySet out;
  for (const auto& s : sentences) {
    EntitySet e = recognizer.Extract(s);
    out.insert(e.begin(), e.end());
  }
  return out;
}

}  // namespace

double NeOverlap(const std::vector<std::string>& evidence_sentences,
                 const std::vector<std::string>& non_evidence_sentences,
                 const EntityRecognizer& recognizer) {
  return Jaccard(UnionEntities(evidence_sentences, recognizer),
                 UnionEntities(non_evidence_sentences, recognizer));
}

// ---- Pool ----

ReplacementPool ReplacementPool::FromDataset(
    const std::vector<ArticleInstance>& dataset,
    const EntityRecognizer& recognizer) {
  std::vector<PoolEntry> entries;
  for (const ArticleInstance& a : dataset) {
    for (const std::string& s : a.sentences) {
      entries.push_back({a.id, s, recognizer.Extract(s)});
    }
  }
  return ReplacementPool(std::move(entries));
}

ReplacementPool ReplacementPool::Parse(std::string_view text,
                                       const EntityRecognizer& recognizer) {
  std::vector<PoolEntry> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError("pool line " + std::to_string(line_number) +
                       ": expected article_id<TAB>sentence");
    }
    PoolEntry entry;
    entry.article_id = line.substr(0, tab);
    const size_t tab2 = line.find('\t', tab + 1);
    entry.text = line.substr(tab + 1, tab2 == std::string::npos
                                          ? std::string::npos
                                          : tab2 - tab - 1);
    if (tab2 == std::string::npos) {
      entry.entities = recognizer.Extract(entry.text);
    } else {
      std::istringstream ents(line.substr(tab2 + 1));
      std::string e;
      while (std::getline(ents, e, '|')) {
        std::string norm = NormalizeEntity(e);
        if (!norm.empty()) entry.entities.insert(norm);
      }
    }
    entries.push_back(std::move(entry));
  }
  return ReplacementPool(std::move(entries));
}

ReplacementPool ReplacementPool::Load(const std::filesystem::path& path,
                                      const EntityRecognizer& recognizer) {
  return Parse(ReadFile(path), recognizer);
}

std::string ReplacementPool::Serialize() const {
  std::string out;
  for (const PoolEntry& e : entries_) {
    out += e.article_id + "\t" + e.text + "\t";
    bool first = true;
    for (const auto& ent : e.entities) {
      if (!first) out += " | ";
      out += ent;
      first = false;
    }
    out += "\n";
  }
  return out;
}

// ---- Perturbed articles ----

json ToJson(const PerturbedArticle& p) {
  json record = ToJson(p.article);
  record["origin_map"] = p.origin_map;
  return record;
}

PerturbedArticle PerturbedArticleFromJson(const json& record) {
  PerturbedArticle p;
  p.article = ArticleFromJson(record);
  if (auto it = record.find("origin_map"); it != record.end()) {
    p.origin_map = it->get<std::vector<int>>();
  } else {
    p.origin_map.resize(p.article.sentences.size());
    for (size_t i = 0; i < p.origin_map.size(); ++i) p.origin_map[i] = i;
  }
  if (p.origin_map.size() != p.article.sentences.size()) {
    throw ValidationError(p.article.id +
                          ": origin_map length differs from sentence count");
  }
  return p;
}

PerturbedArticle Unperturbed(const ArticleInstance& article) {
  PerturbedArticle p{article, std::vector<int>(article.sentences.size())};
  for (size_t i = 0; i < p.origin_map.size(); ++i) p.origin_map[i] = i;
  return p;
}

namespace {

// Keeps `keep` (sorted positions) and returns old->new position map.
std::map<int, int> Retain(const std::vector<int>& keep,
                          const std::vector<std::string>& sentences,
                          const std::vector<int>& origin_map,
                          std::vector<std::string>* new_sentences,
                          std::vector<int>* new_origin) {
  std::map<int, int> remap;
  new_sentences->clear();
  new_origin->clear();
  for (int old_index : keep) {
    remap[old_index] = static_cast<int>(new_sentences->size());
    new_sentences->push_back(sentences[old_index]);
    new_origin->push_back(origin_map[old_index]);
  }
  return remap;
}

// Sorted positions: `fixed` plus `extra` draws from the free positions.
std::vector<int> ChooseRetained(int n, const std::set<int>& fixed, int extra,
                                Rng& rng) {
  std::vector<int> free;
  for (int i = 0; i < n; ++i) {
    if (!fixed.count(i)) free.push_back(i);
  }
  std::set<int> keep = fixed;
  const int take = std::min<int>(extra, static_cast<int>(free.size()));
  for (int draw : rng.SampleWithoutReplacement(static_cast<int>(free.size()),
                                                take)) {
    keep.insert(free[draw]);
  }
  return {keep.begin(), keep.end()};
}

}  // namespace

ChainInstance BuildEvenSplit(const ChainInstance& instance, uint64_t seed) {
  const int n = static_cast<int>(instance.sentences.size());
  std::map<int, int> position_of;  // article index -> current position
  for (int i = 0; i < n; ++i) position_of[instance.origin_map[i]] = i;

  std::vector<Chain> chains = instance.article_chains;
  if (chains.empty()) {
    Chain own;
    for (int e : instance.evidence) own.push_back(instance.origin_map[e]);
    chains.push_back(own);
  }
  int target = 0;
  for (const Chain& c : chains) target += static_cast<int>(c.size());

  std::set<int> fixed(instance.evidence.begin(), instance.evidence.end());
  for (const Chain& c : chains) {
    for (int article_index : c) {
      auto it = position_of.find(article_index);
      if (it != position_of.end()) fixed.insert(it->second);
    }
  }
  const int kept_non_evidence =
      static_cast<int>(fixed.size()) - static_cast<int>(instance.evidence.size());
  Rng rng(seed);
  std::vector<int> keep =
      ChooseRetained(n, fixed, std::max(0, target - kept_non_evidence), rng);

  ChainInstance out = instance;
  auto remap = Retain(keep, instance.sentences, instance.origin_map,
                      &out.sentences, &out.origin_map);
  out.evidence.clear();
  for (int e : instance.evidence) out.evidence.push_back(remap.at(e));
  return out;
}

PerturbedArticle BuildEvenSplit(const ArticleInstance& article, uint64_t seed) {
  const std::vector<int> evidence = ChainUnion(article.evidence_chains);
  const std::set<int> fixed(evidence.begin(), evidence.end());
  Rng rng(seed);
  std::vector<int> keep =
      ChooseRetained(static_cast<int>(article.sentences.size()), fixed,
                     static_cast<int>(evidence.size()), rng);
  std::vector<int> identity(article.sentences.size());
  for (size_t i = 0; i < identity.size(); ++i) identity[i] = i;

  PerturbedArticle out;
  out.article = article;
  auto remap = Retain(keep, article.sentences, identity,
                      &out.article.sentences, &out.origin_map);
  for (Chain& chain : out.article.evidence_chains) {
    for (int& idx : chain) idx = remap.at(idx);
  }
  return out;
}

// ---- Adversarial ----

std::string FormatFallback(const FallbackRecord& r) {
  return r.instance_id + "\t" + std::to_string(r.sentence_index) + "\t" +
         (r.kind == FallbackKind::kAnyEntity ? "any-entity" : "kept-original");
}

namespace {

// Replaces sentences not in `evidence`; returns fallbacks.
std::vector<FallbackRecord> ReplaceNonEvidence(
    const std::string& instance_id, const std::string& article_id,
    const std::set<int>& evidence, std::vector<std::string>* sentences,
    const ReplacementPool& pool, uint64_t seed,
    const EntityRecognizer& recognizer) {
  std::vector<FallbackRecord> fallbacks;
  if (evidence.size() == sentences->size()) return fallbacks;

  EntitySet evidence_entities;
  for (int e : evidence) {
    EntitySet s = recognizer.Extract((*sentences)[e]);
    evidence_entities.insert(s.begin(), s.end());
  }
  std::vector<int> sharing, any_entity;
  const auto& entries = pool.entries();
  for (size_t i = 0; i < entries.size(); ++i) {
    const PoolEntry& entry = entries[i];
    if (entry.article_id == article_id || entry.entities.empty()) continue;
    any_entity.push_back(static_cast<int>(i));
    for (const auto& ent : entry.entities) {
      if (evidence_entities.count(ent)) {
        sharing.push_back(static_cast<int>(i));
        break;
      }
    }
  }
  Rng rng(seed);
  for (int i = 0; i < static_cast<int>(sentences->size()); ++i) {
    if (evidence.count(i)) continue;
    if (!sharing.empty()) {
      (*sentences)[i] = entries[sharing[rng.UniformInt(sharing.size())]].text;
    } else if (!any_entity.empty()) {
      (*sentences)[i] =
          entries[any_entity[rng.UniformInt(any_entity.size())]].text;
      fallbacks.push_back({instance_id, i, FallbackKind::kAnyEntity});
    } else {
      fallbacks.push_back({instance_id, i, FallbackKind::kKeptOriginal});
    }
  }
  return fallbacks;
}

}  // namespace

AdversarialResult<ChainInstance> BuildAdversarial(
    const ChainInstance& instance, const ReplacementPool& pool, uint64_t seed,
    const EntityRecognizer& recognizer) {
  AdversarialResult<ChainInstance> result{instance, {}};
  const std::string id =
      instance.article_id + "#" + std::to_string(instance.chain_id);
  result.fallbacks = ReplaceNonEvidence(
      id, instance.article_id,
      std::set<int>(instance.evidence.begin(), instance.evidence.end()),
      &result.instance.sentences, pool, seed, recognizer);
  return result;
}

AdversarialResult<PerturbedArticle> BuildAdversarial(
    const PerturbedArticle& article, const ReplacementPool& pool,
    uint64_t seed, const EntityRecognizer& recognizer) {
  AdversarialResult<PerturbedArticle> result{article, {}};
  const std::vector<int> evidence =
      ChainUnion(article.article.evidence_chains);
  result.fallbacks = ReplaceNonEvidence(
      article.article.id, article.article.id,
      std::set<int>(evidence.begin(), evidence.end()),
      &result.instance.article.sentences, pool, seed, recognizer);
  return result;
}

}  // namespace factcheck
