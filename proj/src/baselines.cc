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

#include "factcheck/baselines.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "factcheck/error.h"

namespace factcheck {

using nlohmann::json;

Prediction RandomPredict(int num_sentences, Rng& rng) {
  if (num_sentences < 1) {
    throw ValidationError("random baseline needs at least one sentence");
  }
  const int k = std::min<int>(1 + static_cast<int>(rng.UniformInt(10)),
                              num_sentences);
  Prediction p;
  p.evidence = rng.SampleWithoutReplacement(num_sentences, k);
  std::sort(p.evidence.begin(), p.evidence.end());
  p.label_dist[rng.UniformInt(kNumLabels)] = 1.0;
  p.importance.assign(num_sentences, 1.0 / num_sentences);
  return p;
}

std::vector<double> SparseVector::ToDense() const {
  std::vector<double> out(dim, 0.0);
  for (const auto& [i, v] : entries) out[i] = v;
  return out;
}

std::string JoinSentences(const std::vector<std::string>& sentences) {
  std::string out;
  for (size_t i = 0; i < sentences.size(); ++i) {
    if (i) out += ' ';
    out += sentences[i];
  }
  return out;
}

// ---- TF-IDF ----

std::vector<std::string> TfidfFeatureSpace::NGrams(
    const std::string& text) const {
  std::vector<std::string> tokens = WordTokens(text);
  if (stop_words_) tokens = RemoveStopWords(std::move(tokens), *stop_words_);
  std::vector<std::string> grams;
  for (int n = options_.ngram_min; n <= options_.ngram_max; ++n) {
    for (size_t i = 0; i + n <= tokens.size(); ++i) {
      std::string g = tokens[i];
      for (int j = 1; j < n; ++j) g += " " + tokens[i + j];
      grams.push_back(std::move(g));
    }
  }
  return grams;
}

void TfidfFeatureSpace::FitSide(
    const std::vector<std::vector<std::string>>& grams,
    std::vector<std::string>* vocab, std::vector<double>* idf) {
  std::map<std::string, int> df;
  for (const auto& doc : grams) {
    std::set<std::string> unique(doc.begin(), doc.end());
    for (const auto& g : unique) ++df[g];
  }
  const double num_docs = static_cast<double>(grams.size());
  vocab->clear();
  idf->clear();
  for (const auto& [g, count] : df) {
    vocab->push_back(g);
    idf->push_back(std::log((1.0 + num_docs) / (1.0 + count)) + 1.0);
  }
}

void TfidfFeatureSpace::BuildIndex() {
  claim_index_.clear();
  doc_index_.clear();
  for (size_t i = 0; i < claim_vocab_.size(); ++i) {
    claim_index_[claim_vocab_[i]] = static_cast<int>(i);
  }
  for (size_t i = 0; i < doc_vocab_.size(); ++i) {
    doc_index_[doc_vocab_[i]] = static_cast<int>(i);
  }
}

TfidfFeatureSpace TfidfFeatureSpace::Fit(
    const std::vector<std::string>& claims,
    const std::vector<std::string>& documents, const StopWords& stop_words,
    const Options& options) {
  if (options.ngram_min < 1 || options.ngram_max < options.ngram_min) {
    throw ConfigError("invalid n-gram range");
  }
  TfidfFeatureSpace space;
  space.options_ = options;
  space.stop_words_ = &stop_words;
  std::vector<std::vector<std::string>> claim_grams, doc_grams;
  for (const auto& c : claims) claim_grams.push_back(space.NGrams(c));
  for (const auto& d : documents) doc_grams.push_back(space.NGrams(d));
  FitSide(claim_grams, &space.claim_vocab_, &space.claim_idf_);
  FitSide(doc_grams, &space.doc_vocab_, &space.doc_idf_);
  space.BuildIndex();
  return space;
}

void TfidfFeatureSpace::AddSide(
    const std::vector<std::string>& grams,
    const std::unordered_map<std::string, int>& index,
    const std::vector<double>& idf, int offset, SparseVector* out) const {
  std::map<int, double> tf;
  for (const auto& g : grams) {
    auto it = index.find(g);
    if (it != index.end()) tf[it->second] += 1.0;
  }
  double norm = 0.0;
  for (auto& [i, v] : tf) {
    v *= idf[i];
    norm += v * v;
  }
  norm = std::sqrt(norm);
  for (const auto& [i, v] : tf) {
    out->entries.emplace_back(offset + i, norm > 0.0 ? v / norm : 0.0);
  }
}

SparseVector TfidfFeatureSpace::Vectorize(const std::string& claim,
                                          const std::string& document) const {
  SparseVector out;
  out.dim = dim();
  AddSide(NGrams(claim), claim_index_, claim_idf_, 0, &out);
  AddSide(NGrams(document), doc_index_, doc_idf_,
          static_cast<int>(claim_vocab_.size()), &out);
  return out;
}

json TfidfFeatureSpace::ToJson() const {
  return json{{"format", "factcheck-tfidf"},
              {"version", kFormatVersion},
              {"ngram_min", options_.ngram_min},
              {"ngram_max", options_.ngram_max},
              {"stop_words", options_.stop_words_id},
              {"claim_vocab", claim_vocab_},
              {"claim_idf", claim_idf_},
              {"doc_vocab", doc_vocab_},
              {"doc_idf", doc_idf_}};
}

TfidfFeatureSpace TfidfFeatureSpace::FromJson(const json& j,
                                              const StopWords& stop_words) {
  if (j.value("format", "") != "factcheck-tfidf" ||
      j.value("version", 0) != kFormatVersion) {
    throw ParseError("not a version 1 TF-IDF feature space");
  }
  TfidfFeatureSpace space;
  space.stop_words_ = &stop_words;
  space.options_.ngram_min = j.at("ngram_min").get<int>();
  space.options_.ngram_max = j.at("ngram_max").get<int>();
  space.options_.stop_words_id = j.at("stop_words").get<std::string>();
  space.claim_vocab_ = j.at("claim_vocab").get<std::vector<std::string>>();
  space.claim_idf_ = j.at("claim_idf").get<std::vector<double>>();
  space.doc_vocab_ = j.at("doc_vocab").get<std::vector<std::string>>();
  space.doc_idf_ = j.at("doc_idf").get<std::vector<double>>();
  if (space.claim_idf_.size() != space.claim_vocab_.size() ||
      space.doc_idf_.size() != space.doc_vocab_.size()) {
    throw ParseError("TF-IDF vocabulary and idf lengths differ");
  }
  space.BuildIndex();
  return space;
}

void TfidfFeatureSpace::Save(const std::filesystem::path& path) const {
  WriteFile(path, ToJson().dump());
}

TfidfFeatureSpace TfidfFeatureSpace::Load(const std::filesystem::path& path,
                                          const StopWords& stop_words) {
  try {
    return FromJson(json::parse(ReadFile(path)), stop_words);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

// ---- Naive Bayes ----

NaiveBayes NaiveBayes::Fit(const std::vector<SparseVector>& vectors,
                           const std::vector<VeracityLabel>& labels,
                           double alpha) {
  if (vectors.empty()) throw ValidationError("empty Naive Bayes training set");
  if (vectors.size() != labels.size()) {
    throw ValidationError("vector and label counts differ");
  }
  const int dim = vectors.front().dim;
  NaiveBayes nb;
  std::array<int, kNumLabels> class_count{};
  std::array<std::vector<double>, kNumLabels> feature_count;
  for (auto& f : feature_count) f.assign(dim, 0.0);
  for (size_t i = 0; i < vectors.size(); ++i) {
    const int c = LabelIndex(labels[i]);
    ++class_count[c];
    for (const auto& [f, v] : vectors[i].entries) feature_count[c][f] += v;
  }
  const double n = static_cast<double>(vectors.size());
  for (int c = 0; c < kNumLabels; ++c) {
    nb.observed_[c] = class_count[c] > 0;
    nb.log_likelihood_[c].assign(dim, 0.0);
    if (!nb.observed_[c]) continue;
    nb.log_prior_[c] = std::log(class_count[c] / n);
    double total = 0.0;
    for (double v : feature_count[c]) total += v;
    const double denom = total + alpha * dim;
    for (int f = 0; f < dim; ++f) {
      nb.log_likelihood_[c][f] = std::log((feature_count[c][f] + alpha) / denom);
    }
  }
  return nb;
}

std::array<double, kNumLabels> NaiveBayes::Posterior(
    const SparseVector& x) const {
  std::array<double, kNumLabels> joint{};
  double best = -INFINITY;
  for (int c = 0; c < kNumLabels; ++c) {
    if (!observed_[c]) {
      joint[c] = -INFINITY;
      continue;
    }
    double s = log_prior_[c];
    for (const auto& [f, v] : x.entries) {
      if (f < static_cast<int>(log_likelihood_[c].size())) {
        s += v * log_likelihood_[c][f];
      }
    }
    joint[c] = s;
    best = std::max(best, s);
  }
  std::array<double, kNumLabels> post{};
  double z = 0.0;
  for (int c = 0; c < kNumLabels; ++c) {
    post[c] = observed_[c] ? std::exp(joint[c] - best) : 0.0;
    z += post[c];
  }
  for (double& p : post) p /= z;
  return post;
}

VeracityLabel NaiveBayes::Predict(const SparseVector& x) const {
  auto post = Posterior(x);
  int best = -1;
  for (int c = 0; c < kNumLabels; ++c) {
    if (!observed_[c]) continue;
    if (best < 0 || post[c] > post[best]) best = c;
  }
  return LabelFromIndex(best);
}

std::vector<VeracityLabel> NbTrainPredict(
    const std::vector<SparseVector>& train_vectors,
    const std::vector<VeracityLabel>& train_labels,
    const std::vector<SparseVector>& test_vectors) {
  NaiveBayes nb = NaiveBayes::Fit(train_vectors, train_labels);
  std::vector<VeracityLabel> out;
  out.reserve(test_vectors.size());
  for (const auto& x : test_vectors) out.push_back(nb.Predict(x));
  return out;
}

}  // namespace factcheck
