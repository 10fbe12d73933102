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

#ifndef FACTCHECK_EVALUATE_H_
#define FACTCHECK_EVALUATE_H_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "factcheck/corpus.h"
#include "factcheck/perturb.h"
#include "factcheck/prediction.h"
#include "factcheck/text.h"

namespace factcheck {

// ---- Label metrics ----

struct LabelMetrics {
  double macro_f1 = 0.0;
  double accuracy = 0.0;
};

// Macro-F1 is the unweighted mean over all three classes; a class absent
// from both gold and predictions contributes F1 = 0.
LabelMetrics ComputeLabelMetrics(const std::vector<VeracityLabel>& predicted,
                                 const std::vector<VeracityLabel>& gold);

// ---- Evidence metrics ----

struct EvidenceMetrics {
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

// Per instance the gold set is the union of its chains; P, R and F1 are
// computed per instance and macro-averaged. An empty prediction has P = 0.
EvidenceMetrics ComputeEvidenceMetrics(
    const std::vector<std::vector<int>>& predicted,
    const std::vector<std::vector<Chain>>& gold_chains);

// Fraction of instances with the right label and at least one gold chain
// fully inside the predicted evidence.
double FeverScore(const std::vector<VeracityLabel>& predicted_labels,
                  const std::vector<std::vector<int>>& predicted_evidence,
                  const std::vector<VeracityLabel>& gold_labels,
                  const std::vector<std::vector<Chain>>& gold_chains);

// ---- Reports ----

struct MetricsReport {
  int count = 0;
  int k = 0;
  double label_macro_f1 = 0.0;
  double label_accuracy = 0.0;
  double evidence_f1 = 0.0;
  double evidence_precision = 0.0;
  double evidence_recall = 0.0;
  double fever_score = 0.0;
};

// Uses each prediction's evidence set as given; k is recorded only.
MetricsReport Evaluate(const std::vector<Prediction>& predictions,
                       const std::vector<Example>& gold, int k);
nlohmann::json ToJson(const MetricsReport& report);

// Matches prediction records to gold examples by id; throws if an example
// has no prediction.
std::vector<Prediction> AlignPredictions(
    const std::vector<PredictionRecord>& records,
    const std::vector<Example>& gold);

struct SweepRow {
  int k = 0;
  EvidenceMetrics metrics;
};

// Re-selects the top k by importance for each k in [k_min, k_max].
std::vector<SweepRow> SweepTopK(
    const std::vector<std::vector<double>>& importance,
    const std::vector<std::vector<Chain>>& gold_chains, int k_min, int k_max);

enum class BucketRule {
  kChainLength,  // shortest gold chain: 1-2 vs 3+
  kNeOverlap,    // evidence/non-evidence entity Jaccard: < 0.40 vs >= 0.40
  kConfidence,   // max label probability: < 0.90 vs >= 0.90
};

std::optional<BucketRule> ParseBucketRule(std::string_view name);
std::string_view BucketRuleName(BucketRule rule);

struct Bucket {
  std::string name;
  int count = 0;
  std::optional<MetricsReport> metrics;  // empty bucket -> nullopt
};

struct BucketedReport {
  BucketRule rule = BucketRule::kChainLength;
  std::array<Bucket, 2> buckets;
};

// Index of the bucket (0 or 1) an instance falls into.
int BucketOf(BucketRule rule, const Prediction& prediction,
             const Example& gold, const EntityRecognizer& recognizer);

BucketedReport BucketedEvaluate(
    const std::vector<Prediction>& predictions,
    const std::vector<Example>& gold, BucketRule rule, int k,
    const EntityRecognizer& recognizer = DefaultRecognizer());
nlohmann::json ToJson(const BucketedReport& report);

// ---- Attention analysis ----

struct AttentionRatios {
  // Ratio of each edge weight to the mean edge weight of its graph, grouped
  // by (source is evidence, target is evidence).
  std::vector<double> evi_to_non, evi_to_evi, non_to_non, non_to_evi;

  static double Mean(const std::vector<double>& v);
  double mean_evi_to_non() const { return Mean(evi_to_non); }
  double mean_evi_to_evi() const { return Mean(evi_to_evi); }
  double mean_non_to_non() const { return Mean(non_to_non); }
  double mean_non_to_evi() const { return Mean(non_to_evi); }
};

// attention[g] is row-stochastic (row = source node). Empty groups have
// mean NaN.
AttentionRatios ComputeAttentionRatios(
    const std::vector<Eigen::MatrixXd>& attention,
    const std::vector<std::vector<bool>>& evidence_masks);
nlohmann::json ToJson(const AttentionRatios& ratios);

// ---- Statistics ----

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  double df = 0.0;
};

// Unequal-variance t-test with Welch-Satterthwaite degrees of freedom and a
// two-sided p-value.
TTestResult WelchTTest(const std::vector<double>& a,
                       const std::vector<double>& b);

// Base-2 Jensen-Shannon divergence of two distributions over one support.
double JsDivergence(const std::vector<double>& p, const std::vector<double>& q);

// Unigram distributions of two corpora (lowercased, stop words removed).
double CorpusJsDivergence(const std::vector<std::string>& corpus_a,
                          const std::vector<std::string>& corpus_b,
                          const StopWords& stop_words);

// ---- Agreement ----

struct AgreementResult {
  std::optional<double> fleiss_kappa;
  std::optional<double> krippendorff_alpha;
  int items = 0;
  // Sentence mode: articles contributing to each average.
  int kappa_units = 0;
  int alpha_units = 0;
};

// Nominal Fleiss' kappa and Krippendorff's alpha for items x raters codes.
// Empty strings are missing values (skipped by kappa, unpaired by alpha).
// Either statistic is nullopt when undefined (single category).
AgreementResult Agreement(const std::vector<std::vector<std::string>>& table);

// Per-article agreement over binary sentence codings, averaged over the
// articles where each statistic is defined.
AgreementResult SentenceAgreement(
    const std::vector<std::vector<std::vector<std::string>>>& articles);

nlohmann::json ToJson(const AgreementResult& result);

}  // namespace factcheck

#endif  // FACTCHECK_EVALUATE_H_
