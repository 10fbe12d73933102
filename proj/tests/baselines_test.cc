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

#include "factcheck/error.h"
#include "gtest/gtest.h"
#include "testing/fixtures.h"

namespace factcheck {
namespace {

TEST(RandomBaselineTest, EvidenceSizeWithinBounds) {
  Rng rng(42);
  for (int n : {1, 3, 10, 25}) {
    for (int trial = 0; trial < 500; ++trial) {
      const Prediction p = RandomPredict(n, rng);
      EXPECT_GE(p.evidence.size(), 1u);
      EXPECT_LE(p.evidence.size(), static_cast<size_t>(std::min(10, n)));
      EXPECT_TRUE(std::is_sorted(p.evidence.begin(), p.evidence.end()));
    }
  }
  EXPECT_THROW(RandomPredict(0, rng), ValidationError);
}

TEST(TfidfTest, BigramsAndTrigramsWithoutStopWords) {
  const StopWords stop = {"the"};
  const auto space =
      TfidfFeatureSpace::Fit({"the tax cut"}, {"tax cut passed today"}, stop);
  EXPECT_EQ(space.NGrams("the tax cut passed"),
            (std::vector<std::string>{"tax cut", "cut passed", "tax cut passed"}));
  EXPECT_EQ(space.claim_vocab(), (std::vector<std::string>{"tax cut"}));
  EXPECT_EQ(space.doc_vocab().size(), 5u);
}

TEST(TfidfTest, SmoothedIdfAndSideNormalization) {
  const StopWords stop;
  const auto space = TfidfFeatureSpace::Fit(
      {"red apple pie", "red apple"}, {"green pear tart", "blue plum"}, stop);
  // "red apple" in both claims, "apple pie" in one.
  const auto& vocab = space.claim_vocab();
  const auto idx = [&](const std::string& g) {
    return std::find(vocab.begin(), vocab.end(), g) - vocab.begin();
  };
  EXPECT_DOUBLE_EQ(space.claim_idf()[idx("red apple")], 1.0);
  EXPECT_DOUBLE_EQ(space.claim_idf()[idx("apple pie")], std::log(1.5) + 1.0);
  const SparseVector v = space.Vectorize("red apple pie", "green pear tart");
  double claim_norm = 0, doc_norm = 0;
  for (const auto& [i, x] : v.entries) {
    (i < static_cast<int>(vocab.size()) ? claim_norm : doc_norm) += x * x;
  }
  EXPECT_NEAR(claim_norm, 1.0, 1e-12);
  EXPECT_NEAR(doc_norm, 1.0, 1e-12);
}

TEST(TfidfTest, SaveLoadRoundTrip) {
  const auto space = TfidfFeatureSpace::Fit({"tax cut plan"}, {"jobs grew fast"},
                                            DefaultStopWords());
  const auto dir = testing::TempDir("tfidf");
  space.Save(dir / "tfidf.json");
  const auto loaded = TfidfFeatureSpace::Load(dir / "tfidf.json",
                                              DefaultStopWords());
  EXPECT_EQ(loaded.claim_vocab(), space.claim_vocab());
  EXPECT_EQ(loaded.doc_idf(), space.doc_idf());
  EXPECT_EQ(loaded.Vectorize("tax cut plan", "x").entries,
            space.Vectorize("tax cut plan", "x").entries);
}

SparseVector Dense(std::vector<double> values) {
  SparseVector v;
  v.dim = static_cast<int>(values.size());
  for (int i = 0; i < v.dim; ++i) {
    if (values[i] != 0.0) v.entries.emplace_back(i, values[i]);
  }
  return v;
}

TEST(NaiveBayesTest, HandComputedPosterior) {
  using L = VeracityLabel;
  const NaiveBayes nb = NaiveBayes::Fit({Dense({2, 0}), Dense({0, 1})},
                                        {L::kFalse, L::kTrue});
  // theta_false = (3/4, 1/4), theta_true = (1/3, 2/3), equal priors.
  const auto post = nb.Posterior(Dense({1, 0}));
  EXPECT_NEAR(post[0], 0.75 / (0.75 + 1.0 / 3), 1e-12);
  EXPECT_EQ(post[1], 0.0);
  EXPECT_EQ(nb.Predict(Dense({1, 0})), L::kFalse);
  EXPECT_EQ(nb.Predict(Dense({0, 1})), L::kTrue);
}

TEST(NaiveBayesTest, SingleClassAndTies) {
  using L = VeracityLabel;
  const auto preds = NbTrainPredict({Dense({1, 1})}, {L::kHalfTrue},
                                    {Dense({0, 3}), Dense({5, 0})});
  EXPECT_EQ(preds, (std::vector<L>{L::kHalfTrue, L::kHalfTrue}));
  const NaiveBayes tie = NaiveBayes::Fit({Dense({1, 1}), Dense({1, 1})},
                                         {L::kTrue, L::kFalse});
  EXPECT_EQ(tie.Predict(Dense({1, 1})), L::kFalse);
  EXPECT_THROW(NaiveBayes::Fit({}, {}), ValidationError);
}

TEST(NaiveBayesTest, DuplicateTrainingVectorRecoversLabel) {
  using L = VeracityLabel;
  const std::vector<SparseVector> x = {Dense({3, 0, 1}), Dense({0, 2, 2}),
                                       Dense({1, 0, 4})};
  const std::vector<L> y = {L::kFalse, L::kHalfTrue, L::kTrue};
  EXPECT_EQ(NbTrainPredict(x, y, x), y);
}

}  // namespace
}  // namespace factcheck
