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

#ifndef FACTCHECK_BASELINES_H_
#define FACTCHECK_BASELINES_H_

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "factcheck/corpus.h"
#include "factcheck/prediction.h"
#include "factcheck/random.h"
#include "factcheck/text.h"

namespace factcheck {

// Picks k ~ U[1, 10] (capped at the sentence count) distinct sentences and
// a uniformly random label. Importance is uniform.
Prediction RandomPredict(int num_sentences, Rng& rng);

struct SparseVector {
  int dim = 0;
  std::vector<std::pair<int, double>> entries;  // sorted by index

  std::vector<double> ToDense() const;
};

// Claim-side and document-side TF-IDF over word n-grams. Stop words are
// removed before n-gram extraction. idf(t) = ln((1 + D) / (1 + df(t))) + 1
// and each side is L2-normalized on its own before concatenation.
class TfidfFeatureSpace {
 public:
  static constexpr int kFormatVersion = 1;

  struct Options {
    int ngram_min = 2;
    int ngram_max = 3;
    std::string stop_words_id = std::string(kStopWordsAsset);
  };

  static TfidfFeatureSpace Fit(const std::vector<std::string>& claims,
                               const std::vector<std::string>& documents,
                               const StopWords& stop_words,
                               const Options& options);
  static TfidfFeatureSpace Fit(const std::vector<std::string>& claims,
                               const std::vector<std::string>& documents,
                               const StopWords& stop_words) {
    return Fit(claims, documents, stop_words, Options{});
  }

  // First claim_vocab().size() slots are claim features.
  SparseVector Vectorize(const std::string& claim,
                         const std::string& document) const;

  std::vector<std::string> NGrams(const std::string& text) const;

  int dim() const {
    return static_cast<int>(claim_vocab_.size() + doc_vocab_.size());
  }
  const std::vector<std::string>& claim_vocab() const { return claim_vocab_; }
  const std::vector<std::string>& doc_vocab() const { return doc_vocab_; }
  const std::vector<double>& claim_idf() const { return claim_idf_; }
  const std::vector<double>& doc_idf() const { return doc_idf_; }

  nlohmann::json ToJson() const;
  static TfidfFeatureSpace FromJson(const nlohmann::json& json,
                                    const StopWords& stop_words);
  void Save(const std::filesystem::path& path) const;
  static TfidfFeatureSpace Load(const std::filesystem::path& path,
                                const StopWords& stop_words);

 private:
  static void FitSide(const std::vector<std::vector<std::string>>& grams,
                      std::vector<std::string>* vocab,
                      std::vector<double>* idf);
  void AddSide(const std::vector<std::string>& grams,
               const std::unordered_map<std::string, int>& index,
               const std::vector<double>& idf, int offset,
               SparseVector* out) const;
  void BuildIndex();

  Options options_;
  const StopWords* stop_words_ = nullptr;
  std::vector<std::string> claim_vocab_;
  std::vector<std::string> doc_vocab_;
  std::vector<double> claim_idf_;
  std::vector<double> doc_idf_;
  std::unordered_map<std::string, int> claim_index_;
  std::unordered_map<std::string, int> doc_index_;
};

// Multinomial Naive Bayes with additive smoothing.
class NaiveBayes {
 public:
  static NaiveBayes Fit(const std::vector<SparseVector>& vectors,
                        const std::vector<VeracityLabel>& labels,
                        double alpha = 1.0);

  // Posterior over the three labels; sums to 1.
  std::array<double, kNumLabels> Posterior(const SparseVector& x) const;
  // Argmax posterior, ties to the lower label index.
  VeracityLabel Predict(const SparseVector& x) const;

  const std::array<double, kNumLabels>& log_prior() const { return log_prior_; }
  double log_likelihood(int label, int feature) const {
    return log_likelihood_[label][feature];
  }

 private:
  std::array<bool, kNumLabels> observed_{};
  std::array<double, kNumLabels> log_prior_{};
  std::array<std::vector<double>, kNumLabels> log_likelihood_;
};

std::vector<VeracityLabel> NbTrainPredict(
    const std::vector<SparseVector>& train_vectors,
    const std::vector<VeracityLabel>& train_labels,
    const std::vector<SparseVector>& test_vectors);

std::string JoinSentences(const std::vector<std::string>& sentences);

}  // namespace factcheck

#endif  // FACTCHECK_BASELINES_H_
