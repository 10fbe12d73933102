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

#include "factcheck/evaluate.h"

#include <cmath>

#include "factcheck/error.h"
#include "gtest/gtest.h"

namespace factcheck {
namespace {

using L = VeracityLabel;

TEST(LabelMetricsTest, AllCorrect) {
  const std::vector<L> labels = {L::kFalse, L::kHalfTrue, L::kTrue};
  const LabelMetrics m = ComputeLabelMetrics(labels, labels);
  EXPECT_DOUBLE_EQ(m.macro_f1, 1.0);
  EXPECT_DOUBLE_EQ(m.accuracy, 1.0);
}

TEST(LabelMetricsTest, ConfusionOracle) {
  const std::vector<L> gold = {L::kFalse, L::kFalse, L::kTrue, L::kHalfTrue};
  const std::vector<L> pred = {L::kFalse, L::kTrue, L::kTrue, L::kHalfTrue};
  const LabelMetrics m = ComputeLabelMetrics(pred, gold);
  EXPECT_DOUBLE_EQ(m.accuracy, 0.75);
  EXPECT_NEAR(m.macro_f1, (2.0 / 3 + 2.0 / 3 + 1.0) / 3, 1e-12);
}

TEST(LabelMetricsTest, AbsentClassCountsAsZero) {
  const std::vector<L> labels = {L::kFalse, L::kTrue};
  EXPECT_NEAR(ComputeLabelMetrics(labels, labels).macro_f1, 2.0 / 3, 1e-12);
}

TEST(LabelMetricsTest, LengthMismatchThrows) {
  EXPECT_THROW(ComputeLabelMetrics({L::kFalse}, {L::kFalse, L::kTrue}),
               ValidationError);
}

TEST(EvidenceMetricsTest, HandOracle) {
  const EvidenceMetrics m = ComputeEvidenceMetrics({{0, 3}}, {{{0, 1}, {2}}});
  EXPECT_DOUBLE_EQ(m.precision, 0.5);
  EXPECT_NEAR(m.recall, 1.0 / 3, 1e-12);
  EXPECT_NEAR(m.f1, 0.4, 1e-12);
}

TEST(EvidenceMetricsTest, EmptyPredictionScoresZero) {
  const EvidenceMetrics m = ComputeEvidenceMetrics({{}}, {{{1}}});
  EXPECT_EQ(m.precision, 0.0);
  EXPECT_EQ(m.recall, 0.0);
  EXPECT_EQ(m.f1, 0.0);
}

TEST(FeverScoreTest, NeedsLabelAndFullChain) {
  const std::vector<L> gold = {L::kTrue, L::kTrue, L::kFalse};
  const std::vector<std::vector<Chain>> chains = {
      {{0, 1}}, {{0, 1}, {4}}, {{2}}};
  const std::vector<L> pred = {L::kTrue, L::kTrue, L::kTrue};
  const std::vector<std::vector<int>> evidence = {{0}, {3, 4}, {2}};
  EXPECT_NEAR(FeverScore(pred, evidence, gold, chains), 1.0 / 3, 1e-12);
}

TEST(EvaluateTest, FeverScoreNeverExceedsAccuracy) {
  std::vector<Example> gold(2);
  gold[0] = {"x", "c", "", L::kTrue, {"a", "b"}, {{0}}};
  gold[1] = {"y", "c", "", L::kFalse, {"a", "b"}, {{1}}};
  std::vector<Prediction> preds(2);
  preds[0].label_dist = {0, 0, 1};
  preds[0].evidence = {1};
  preds[1].label_dist = {1, 0, 0};
  preds[1].evidence = {1};
  const MetricsReport r = Evaluate(preds, gold, 1);
  EXPECT_DOUBLE_EQ(r.label_accuracy, 1.0);
  EXPECT_DOUBLE_EQ(r.fever_score, 0.5);
  EXPECT_LE(r.fever_score, r.label_accuracy);
}

TEST(SweepTest, RecallGrowsWithK) {
  const auto rows = SweepTopK({{0.5, 0.3, 0.1, 0.1}}, {{{0, 2}}}, 1, 4);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_DOUBLE_EQ(rows[0].metrics.recall, 0.5);
  EXPECT_DOUBLE_EQ(rows[2].metrics.recall, 1.0);
  EXPECT_THROW(SweepTopK({}, {}, 0, 3), ConfigError);
}

TEST(BucketTest, ChainLengthUsesShortestChain) {
  Example e{"x", "c", "", L::kTrue, {"a", "b", "c", "d"}, {{0, 1, 2}, {3}}};
  Prediction p;
  EXPECT_EQ(BucketOf(BucketRule::kChainLength, p, e, DefaultRecognizer()), 0);
  e.chains = {{0, 1, 2}};
  EXPECT_EQ(BucketOf(BucketRule::kChainLength, p, e, DefaultRecognizer()), 1);
}

TEST(BucketTest, ConfidenceThreshold) {
  Example e{"x", "c", "", L::kTrue, {"a"}, {{0}}};
  Prediction p;
  p.label_dist = {0.05, 0.05, 0.90};
  EXPECT_EQ(BucketOf(BucketRule::kConfidence, p, e, DefaultRecognizer()), 1);
  p.label_dist = {0.11, 0.0, 0.89};
  EXPECT_EQ(BucketOf(BucketRule::kConfidence, p, e, DefaultRecognizer()), 0);
}

TEST(BucketTest, EmptyBucketHasNoMetrics) {
  std::vector<Example> gold = {
      {"x", "c", "", L::kTrue, {"a", "b"}, {{0}}}};
  std::vector<Prediction> preds(1);
  preds[0].label_dist = {0, 0, 1};
  preds[0].evidence = {0};
  const BucketedReport r =
      BucketedEvaluate(preds, gold, BucketRule::kChainLength, 1);
  EXPECT_EQ(r.buckets[0].count, 1);
  ASSERT_TRUE(r.buckets[0].metrics.has_value());
  EXPECT_EQ(r.buckets[1].count, 0);
  EXPECT_FALSE(r.buckets[1].metrics.has_value());
  EXPECT_TRUE(ParseBucketRule(BucketRuleName(BucketRule::kNeOverlap)));
}

TEST(AttentionRatioTest, UniformAttentionGivesOne) {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Constant(4, 4, 0.25);
  const AttentionRatios r =
      ComputeAttentionRatios({a}, {{true, false, true, false}});
  EXPECT_EQ(r.mean_evi_to_evi(), 1.0);
  EXPECT_EQ(r.mean_evi_to_non(), 1.0);
  EXPECT_EQ(r.mean_non_to_evi(), 1.0);
  EXPECT_EQ(r.mean_non_to_non(), 1.0);
}

TEST(AttentionRatioTest, ThreeNodeEnumeration) {
  Eigen::MatrixXd a(3, 3);
  a << 0.6, 0.3, 0.1,  //
      0.2, 0.2, 0.6,   //
      0.5, 0.25, 0.25;
  // Node 0 is evidence. Mean edge weight is 1/3.
  const AttentionRatios r = ComputeAttentionRatios({a}, {{true, false, false}});
  EXPECT_NEAR(r.mean_evi_to_evi(), 1.8, 1e-12);
  EXPECT_NEAR(r.mean_evi_to_non(), 0.6, 1e-12);
  EXPECT_NEAR(r.mean_non_to_evi(), 1.05, 1e-12);
  EXPECT_NEAR(r.mean_non_to_non(), 0.975, 1e-12);
}

TEST(AttentionRatioTest, EmptyGroupIsNan) {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Constant(2, 2, 0.5);
  const AttentionRatios r = ComputeAttentionRatios({a}, {{false, false}});
  EXPECT_TRUE(std::isnan(r.mean_evi_to_evi()));
}

TEST(WelchTest, ShiftedSamples) {
  const TTestResult r = WelchTTest({1, 2, 3, 4, 5}, {2, 3, 4, 5, 6});
  EXPECT_NEAR(r.t, -1.0, 1e-12);
  EXPECT_NEAR(r.df, 8.0, 1e-12);
  EXPECT_NEAR(r.p, 0.34659350708733416, 1e-6);
}

TEST(WelchTest, UnequalVariances) {
  const TTestResult r = WelchTTest({1.5, 2.0, 9.1, 4.4},
                                   {0.3, 0.2, 0.9, 0.1, 0.5, 0.8});
  EXPECT_NEAR(r.t, 2.1727711554178573, 1e-9);
  EXPECT_NEAR(r.p, 0.11709909934877166, 1e-6);
}

TEST(WelchTest, DegenerateInputThrows) {
  EXPECT_THROW(WelchTTest({1}, {1, 2}), ValidationError);
  EXPECT_THROW(WelchTTest({1, 1}, {2, 2}), ValidationError);
}

TEST(JsDivergenceTest, KnownValues) {
  EXPECT_NEAR(JsDivergence({1, 0}, {0.5, 0.5}), 0.31127812445913283, 1e-12);
  EXPECT_DOUBLE_EQ(JsDivergence({1, 0}, {0, 1}), 1.0);
  EXPECT_DOUBLE_EQ(JsDivergence({0.3, 0.7}, {0.3, 0.7}), 0.0);
}

TEST(JsDivergenceTest, CorpusOracle) {
  const double jsd =
      CorpusJsDivergence({"alpha alpha"}, {"alpha beta"}, StopWords{});
  EXPECT_NEAR(jsd, 0.31127812445913283, 1e-12);
  EXPECT_THROW(CorpusJsDivergence({"the"}, {"alpha"}, DefaultStopWords()),
               ValidationError);
}

TEST(AgreementTest, HandOracle) {
  const AgreementResult r =
      Agreement({{"A", "A"}, {"A", "B"}, {"B", "B"}, {"B", "A"}});
  ASSERT_TRUE(r.fleiss_kappa && r.krippendorff_alpha);
  EXPECT_NEAR(*r.fleiss_kappa, 0.0, 1e-12);
  EXPECT_NEAR(*r.krippendorff_alpha, 0.125, 1e-12);
}

TEST(AgreementTest, PerfectAgreement) {
  const AgreementResult r = Agreement({{"A", "A", "A"}, {"B", "B", "B"}});
  EXPECT_NEAR(*r.fleiss_kappa, 1.0, 1e-12);
  EXPECT_NEAR(*r.krippendorff_alpha, 1.0, 1e-12);
}

TEST(AgreementTest, SingleCategoryIsUndefined) {
  const AgreementResult r = Agreement({{"A", "A"}, {"A", "A"}});
  EXPECT_FALSE(r.fleiss_kappa.has_value());
  EXPECT_FALSE(r.krippendorff_alpha.has_value());
}

TEST(AgreementTest, MissingValuesSkipKappaOnly) {
  const AgreementResult r =
      Agreement({{"A", "A", ""}, {"B", "B", "B"}, {"A", "B", "A"}});
  ASSERT_TRUE(r.krippendorff_alpha.has_value());
  ASSERT_TRUE(r.fleiss_kappa.has_value());
}

TEST(AgreementTest, SentenceModeAveragesDefinedArticles) {
  const AgreementResult r = SentenceAgreement(
      {{{"1", "1"}, {"0", "0"}}, {{"0", "0"}, {"0", "0"}}});
  EXPECT_EQ(r.kappa_units, 1);
  EXPECT_EQ(r.alpha_units, 1);
  EXPECT_NEAR(*r.fleiss_kappa, 1.0, 1e-12);
}

}  // namespace
}  // namespace factcheck
