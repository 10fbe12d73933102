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

#include "factcheck/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "factcheck/error.h"
#include "factcheck/random.h"

namespace factcheck {

using nlohmann::json;

std::string_view LabelName(VeracityLabel label) {
  switch (label) {
    case VeracityLabel::kFalse:
      return "false";
    case VeracityLabel::kHalfTrue:
      return "half-true";
    case VeracityLabel::kTrue:
      return "true";
  }
  return "false";
}

std::optional<VeracityLabel> ParseLabel(std::string_view name) {
  for (VeracityLabel label : kAllLabels) {
    if (LabelName(label) == name) return label;
  }
  return std::nullopt;
}

VeracityLabel LabelFromIndex(int index) {
  if (index < 0 || index >= kNumLabels) {
    throw ValidationError("label index out of range: " +
                          std::to_string(index));
  }
  return static_cast<VeracityLabel>(index);
}

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kDev:
      return "dev";
    case Split::kTest:
      return "test";
  }
  return "train";
}

std::optional<Split> ParseSplit(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "dev") return Split::kDev;
  if (name == "test") return Split::kTest;
  return std::nullopt;
}

std::vector<int> ChainUnion(const std::vector<Chain>& chains) {
  std::set<int> all;
  for (const Chain& chain : chains) all.insert(chain.begin(), chain.end());
  return {all.begin(), all.end()};
}

Example ToExample(const ArticleInstance& article) {
  return Example{article.id,        article.claim,    article.speaker,
                 article.label,     article.sentences, article.evidence_chains};
}

Example ToExample(const ChainInstance& instance) {
  return Example{instance.article_id + "#" + std::to_string(instance.chain_id),
                 instance.claim,
                 instance.speaker,
                 instance.label,
                 instance.sentences,
                 {instance.evidence}};
}

std::vector<Example> ToExamples(const std::vector<ArticleInstance>& articles) {
  std::vector<Example> out;
  out.reserve(articles.size());
  for (const auto& a : articles) out.push_back(ToExample(a));
  return out;
}

std::vector<Example> ToExamples(const std::vector<ChainInstance>& instances) {
  std::vector<Example> out;
  out.reserve(instances.size());
  for (const auto& c : instances) out.push_back(ToExample(c));
  return out;
}

// ---- JSON ----

json ToJson(const ArticleInstance& article) {
  json record = json::object();
  record["id"] = article.id;
  record["claim"] = article.claim;
  record["speaker"] = article.speaker;
  record["label"] = std::string(LabelName(article.label));
  record["sentences"] = article.sentences;
  record["evidence_chains"] = article.evidence_chains;
  record["split"] = std::string(SplitName(article.split));
  return record;
}

namespace {

const json& RequireField(const json& record, const char* name) {
  auto it = record.find(name);
  if (it == record.end()) {
    throw ParseError(std::string("missing field '") + name + "'");
  }
  return *it;
}

std::string RequireString(const json& record, const char* name) {
  const json& value = RequireField(record, name);
  if (!value.is_string()) {
    throw ParseError(std::string("field '") + name + "' must be a string");
  }
  return value.get<std::string>();
}

std::vector<int> RequireIntList(const json& value, const char* name) {
  if (!value.is_array()) {
    throw ParseError(std::string("field '") + name + "' must be a list");
  }
  std::vector<int> out;
  for (const json& v : value) {
    if (!v.is_number_integer()) {
      throw ParseError(std::string("field '") + name +
                       "' must hold integers");
    }
    out.push_back(v.get<int>());
  }
  return out;
}

VeracityLabel RequireLabel(const json& record) {
  std::string name = RequireString(record, "label");
  auto label = ParseLabel(name);
  if (!label) throw ParseError("unknown label '" + name + "'");
  return *label;
}

Split RequireSplit(const json& record) {
  std::string name = RequireString(record, "split");
  auto split = ParseSplit(name);
  if (!split) throw ParseError("unknown split '" + name + "'");
  return *split;
}

std::vector<std::string> RequireStringList(const json& record,
                                           const char* name) {
  const json& value = RequireField(record, name);
  if (!value.is_array()) {
    throw ParseError(std::string("field '") + name + "' must be a list");
  }
  std::vector<std::string> out;
  for (const json& v : value) {
    if (!v.is_string()) {
      throw ParseError(std::string("field '") + name + "' must hold strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

ArticleInstance ArticleFromJson(const json& record) {
  if (!record.is_object()) throw ParseError("record is not an object");
  ArticleInstance a;
  a.id = RequireString(record, "id");
  a.claim = RequireString(record, "claim");
  a.speaker = RequireString(record, "speaker");
  a.label = RequireLabel(record);
  a.sentences = RequireStringList(record, "sentences");
  const json& chains = RequireField(record, "evidence_chains");
  if (!chains.is_array()) {
    throw ParseError("field 'evidence_chains' must be a list of lists");
  }
  for (const json& chain : chains) {
    a.evidence_chains.push_back(RequireIntList(chain, "evidence_chains"));
  }
  a.split = RequireSplit(record);
  return a;
}

json ToJson(const ChainInstance& c) {
  json record = json::object();
  record["article_id"] = c.article_id;
  record["chain_id"] = c.chain_id;
  record["claim"] = c.claim;
  record["speaker"] = c.speaker;
  record["label"] = std::string(LabelName(c.label));
  record["sentences"] = c.sentences;
  record["evidence"] = c.evidence;
  record["origin_map"] = c.origin_map;
  record["split"] = std::string(SplitName(c.split));
  record["article_chains"] = c.article_chains;
  return record;
}

ChainInstance ChainInstanceFromJson(const json& record) {
  if (!record.is_object()) throw ParseError("record is not an object");
  ChainInstance c;
  c.article_id = RequireString(record, "article_id");
  const json& chain_id = RequireField(record, "chain_id");
  if (!chain_id.is_number_integer()) {
    throw ParseError("field 'chain_id' must be an integer");
  }
  c.chain_id = chain_id.get<int>();
  c.claim = RequireString(record, "claim");
  c.speaker = RequireString(record, "speaker");
  c.label = RequireLabel(record);
  c.sentences = RequireStringList(record, "sentences");
  c.evidence = RequireIntList(RequireField(record, "evidence"), "evidence");
  c.origin_map =
      RequireIntList(RequireField(record, "origin_map"), "origin_map");
  c.split = RequireSplit(record);
  if (auto it = record.find("article_chains"); it != record.end()) {
    for (const json& chain : *it) {
      c.article_chains.push_back(RequireIntList(chain, "article_chains"));
    }
  }
  if (c.origin_map.size() != c.sentences.size()) {
    throw ValidationError(c.article_id + "#" + std::to_string(c.chain_id) +
                          ": origin_map length differs from sentence count");
  }
  for (int e : c.evidence) {
    if (e < 0 || e >= static_cast<int>(c.sentences.size())) {
      throw ValidationError(c.article_id + "#" + std::to_string(c.chain_id) +
                            ": evidence index out of range");
    }
  }
  return c;
}

std::string SerializeCanonical(const std::vector<ArticleInstance>& dataset) {
  std::string out;
  for (const ArticleInstance& a : dataset) {
    const json record = ToJson(a);
    nlohmann::ordered_json ordered;
    for (const char* key : {"id", "claim", "speaker", "label", "sentences",
                            "evidence_chains", "split"}) {
      ordered[key] = record.at(key);
    }
    out += ordered.dump();
    out += '\n';
  }
  return out;
}

void WriteCanonical(const std::filesystem::path& path,
                    const std::vector<ArticleInstance>& dataset) {
  WriteFile(path, SerializeCanonical(dataset));
}

std::vector<ArticleInstance> ParseCanonical(std::string_view text) {
  std::vector<ArticleInstance> dataset;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    ArticleInstance article;
    try {
      article = ArticleFromJson(json::parse(line));
    } catch (const json::exception& e) {
      throw ParseError("line " + std::to_string(line_number) + ": " +
                       e.what());
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_number) + ": " +
                       e.what());
    }
    auto violations = ValidateInstance(article);
    if (!violations.empty()) {
      throw ValidationError(FormatViolation(violations.front()));
    }
    dataset.push_back(std::move(article));
  }
  return dataset;
}

std::vector<ArticleInstance> LoadCanonical(const std::filesystem::path& path) {
  return ParseCanonical(ReadFile(path));
}

void WriteChainInstances(const std::filesystem::path& path,
                         const std::vector<ChainInstance>& instances) {
  std::string out;
  for (const ChainInstance& c : instances) {
    out += ToJson(c).dump();
    out += '\n';
  }
  WriteFile(path, out);
}

std::vector<ChainInstance> LoadChainInstances(
    const std::filesystem::path& path) {
  std::vector<ChainInstance> out;
  std::istringstream in(ReadFile(path));
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(ChainInstanceFromJson(json::parse(line)));
    } catch (const json::exception& e) {
      throw ParseError("line " + std::to_string(line_number) + ": " +
                       e.what());
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_number) + ": " +
                       e.what());
    }
  }
  return out;
}

// ---- Validation ----

std::vector<Violation> ValidateInstance(const ArticleInstance& a) {
  std::vector<Violation> out;
  const int n = static_cast<int>(a.sentences.size());
  if (a.id.empty()) out.push_back({a.id, "id", "empty instance id"});
  if (a.evidence_chains.empty()) {
    out.push_back({a.id, "chains", "instance has no evidence chain"});
  }
  for (size_t c = 0; c < a.evidence_chains.size(); ++c) {
    const Chain& chain = a.evidence_chains[c];
    const std::string name = "chain " + std::to_string(c);
    if (chain.empty()) {
      out.push_back({a.id, "chain-empty", name + " is empty"});
      continue;
    }
    for (int idx : chain) {
      if (idx < 0 || idx >= n) {
        out.push_back({a.id, "chain-range",
                       name + " index " + std::to_string(idx) +
                           " outside [0, " + std::to_string(n) + ")"});
        break;
      }
    }
    std::set<int> unique(chain.begin(), chain.end());
    if (unique.size() != chain.size()) {
      out.push_back({a.id, "chain-duplicate",
                     name + " contains a duplicate index"});
    } else if (!std::is_sorted(chain.begin(), chain.end())) {
      out.push_back({a.id, "chain-order", name + " is not increasing"});
    }
  }
  return out;
}

std::vector<Violation> ValidateDataset(
    const std::vector<ArticleInstance>& dataset) {
  std::vector<Violation> out;
  std::set<std::string> seen;
  for (const ArticleInstance& a : dataset) {
    auto v = ValidateInstance(a);
    out.insert(out.end(), v.begin(), v.end());
    if (!a.id.empty() && !seen.insert(a.id).second) {
      out.push_back({a.id, "id-duplicate", "instance id appears twice"});
    }
  }
  return out;
}

std::string FormatViolation(const Violation& v) {
  return v.instance_id + ": [" + v.rule + "] " + v.detail;
}

// ---- Splitting ----

std::vector<ChainInstance> SplitChains(
    const std::vector<ArticleInstance>& dataset) {
  std::vector<ChainInstance> out;
  for (const ArticleInstance& a : dataset) {
    std::vector<int> identity(a.sentences.size());
    std::iota(identity.begin(), identity.end(), 0);
    for (size_t c = 0; c < a.evidence_chains.size(); ++c) {
      ChainInstance inst;
      inst.article_id = a.id;
      inst.chain_id = static_cast<int>(c);
      inst.claim = a.claim;
      inst.speaker = a.speaker;
      inst.label = a.label;
      inst.sentences = a.sentences;
      inst.evidence = a.evidence_chains[c];
      inst.origin_map = identity;
      inst.split = a.split;
      inst.article_chains = a.evidence_chains;
      out.push_back(std::move(inst));
    }
  }
  return out;
}

TrainDevSplit MakeDevSplit(const std::vector<ChainInstance>& instances,
                           int dev_count, uint64_t seed) {
  const int total = static_cast<int>(instances.size());
  if (dev_count < 0 || dev_count >= total) {
    throw ConfigError("dev_count " + std::to_string(dev_count) +
                      " must be in [0, " + std::to_string(total) + ")");
  }
  // Group by article, first-appearance order.
  std::vector<std::string> articles;
  std::map<std::string, int> sizes;
  for (const ChainInstance& c : instances) {
    if (sizes[c.article_id]++ == 0) articles.push_back(c.article_id);
  }
  Rng(seed).Shuffle(articles);

  // Subset sum over the shuffled order; the earliest articles are preferred
  // so the chosen set still follows the shuffle.
  const int n = static_cast<int>(articles.size());
  std::vector<std::vector<char>> reach(n + 1,
                                       std::vector<char>(dev_count + 1, 0));
  reach[n][0] = 1;
  for (int i = n - 1; i >= 0; --i) {
    const int w = sizes[articles[i]];
    for (int s = 0; s <= dev_count; ++s) {
      reach[i][s] = reach[i + 1][s] || (s >= w && reach[i + 1][s - w]);
    }
  }
  if (!reach[0][dev_count]) {
    throw ConfigError("no article grouping yields exactly " +
                      std::to_string(dev_count) + " dev instances");
  }
  std::set<std::string> dev_articles;
  int remaining = dev_count;
  for (int i = 0; i < n && remaining > 0; ++i) {
    const int w = sizes[articles[i]];
    if (remaining >= w && reach[i + 1][remaining - w]) {
      dev_articles.insert(articles[i]);
      remaining -= w;
    }
  }
  TrainDevSplit split;
  for (const ChainInstance& c : instances) {
    if (dev_articles.count(c.article_id)) {
      split.dev.push_back(c);
      split.dev.back().split = Split::kDev;
    } else {
      split.train.push_back(c);
    }
  }
  return split;
}

// ---- Statistics ----

namespace {

MeanSd Summarize(const std::vector<double>& values) {
  MeanSd out;
  if (values.empty()) return out;
  const double n = static_cast<double>(values.size());
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.sd = std::sqrt(ss / (n - 1.0));
  }
  return out;
}

int CountWords(const std::string& text) {
  std::istringstream in(text);
  std::string word;
  int count = 0;
  while (in >> word) ++count;
  return count;
}

}  // namespace

StatsReport ComputeStats(const std::vector<ArticleInstance>& dataset) {
  if (dataset.empty()) throw ValidationError("statistics of an empty dataset");
  StatsReport r;
  std::vector<double> words, sentences, evidence, per_chain, chains;
  std::array<int, 6> length_counts{};
  for (const ArticleInstance& a : dataset) {
    int w = 0;
    for (const auto& s : a.sentences) w += CountWords(s);
    words.push_back(w);
    sentences.push_back(static_cast<double>(a.sentences.size()));
    evidence.push_back(static_cast<double>(ChainUnion(a.evidence_chains).size()));
    chains.push_back(static_cast<double>(a.evidence_chains.size()));
    for (const Chain& c : a.evidence_chains) {
      per_chain.push_back(static_cast<double>(c.size()));
      const int bucket = std::clamp(static_cast<int>(c.size()), 1, 6) - 1;
      ++length_counts[bucket];
    }
    ++r.label_counts[LabelIndex(a.label)];
  }
  r.num_articles = static_cast<int>(dataset.size());
  r.num_chains = static_cast<int>(per_chain.size());
  r.words_per_article = Summarize(words);
  r.sentences_per_article = Summarize(sentences);
  r.evidence_per_article = Summarize(evidence);
  r.evidence_per_chain = Summarize(per_chain);
  r.chains_per_article = Summarize(chains);
  for (int b = 0; b < 6; ++b) {
    r.chain_length_histogram[b] =
        r.num_chains == 0 ? 0.0 : 100.0 * length_counts[b] / r.num_chains;
  }
  return r;
}

json ToJson(const StatsReport& r) {
  auto ms = [](const MeanSd& m) { return json{{"mean", m.mean}, {"sd", m.sd}}; };
  json labels = json::object();
  for (VeracityLabel l : kAllLabels) {
    labels[std::string(LabelName(l))] = r.label_counts[LabelIndex(l)];
  }
  json hist = json::object();
  const char* names[6] = {"1", "2", "3", "4", "5", "6+"};
  for (int b = 0; b < 6; ++b) hist[names[b]] = r.chain_length_histogram[b];
  return json{{"num_articles", r.num_articles},
              {"num_chains", r.num_chains},
              {"words_per_article", ms(r.words_per_article)},
              {"sentences_per_article", ms(r.sentences_per_article)},
              {"evidence_per_article", ms(r.evidence_per_article)},
              {"evidence_per_chain", ms(r.evidence_per_chain)},
              {"chains_per_article", ms(r.chains_per_article)},
              {"label_counts", labels},
              {"chain_length_histogram", hist}};
}

// ---- Files ----

std::string Fingerprint(std::string_view bytes) {
  uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  static const char* kHex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = kHex[h & 0xF];
    h >>= 4;
  }
  return out;
}

std::string FileFingerprint(const std::filesystem::path& path) {
  return Fingerprint(ReadFile(path));
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
}

}  // namespace factcheck
