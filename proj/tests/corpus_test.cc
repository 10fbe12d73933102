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

#include "factcheck/error.h"
#include "gtest/gtest.h"
#include "testing/fixtures.h"

namespace factcheck {
namespace {

using testing::MakeArticle;
using testing::SmallCorpus;

TEST(LabelTest, RoundTrip) {
  for (VeracityLabel l : kAllLabels) {
    EXPECT_EQ(ParseLabel(LabelName(l)), l);
    EXPECT_EQ(LabelFromIndex(LabelIndex(l)), l);
  }
  EXPECT_FALSE(ParseLabel("True").has_value());
  EXPECT_FALSE(ParseLabel("pants-on-fire").has_value());
}

TEST(CanonicalTest, SerializeParseRoundTrip) {
  const auto corpus = SmallCorpus();
  const std::string text = SerializeCanonical(corpus);
  EXPECT_EQ(ParseCanonical(text), corpus);
  EXPECT_EQ(SerializeCanonical(ParseCanonical(text)), text);
}

TEST(CanonicalTest, FieldOrderIsFixed) {
  const std::string line = SerializeCanonical({SmallCorpus()[0]});
  EXPECT_EQ(line.find("{\"id\""), 0u);
  EXPECT_LT(line.find("\"label\""), line.find("\"sentences\""));
  EXPECT_LT(line.find("\"evidence_chains\""), line.find("\"split\""));
}

TEST(CanonicalTest, MalformedLineNamesLine) {
  const std::string text = SerializeCanonical({SmallCorpus()[0]}) + "{oops\n";
  try {
    ParseCanonical(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(CanonicalTest, InvalidInstanceNamesId) {
  auto a = SmallCorpus()[0];
  a.evidence_chains = {{0, 40}};
  try {
    ParseCanonical(SerializeCanonical({a}));
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("a1"), std::string::npos);
  }
}

TEST(ValidateTest, CleanCorpusHasNoViolations) {
  EXPECT_TRUE(ValidateDataset(SmallCorpus()).empty());
}

TEST(ValidateTest, ReportsEachRule) {
  auto corpus = SmallCorpus();
  corpus[0].evidence_chains = {{3, 1}};
  corpus[1].evidence_chains = {};
  corpus[2].id = corpus[3].id;
  const auto v = ValidateDataset(corpus);
  std::set<std::string> rules;
  for (const auto& x : v) rules.insert(x.rule);
  EXPECT_TRUE(rules.count("chain-order"));
  EXPECT_TRUE(rules.count("chains"));
  EXPECT_TRUE(rules.count("id-duplicate"));
}

TEST(SplitChainsTest, OneInstancePerChain) {
  const auto chains = SplitChains(SmallCorpus());
  EXPECT_EQ(chains.size(), 8u);
  EXPECT_EQ(chains[0].article_id, "a1");
  EXPECT_EQ(chains[0].evidence, (std::vector<int>{0, 3}));
  EXPECT_EQ(chains[1].evidence, (std::vector<int>{1}));
  EXPECT_EQ(ToExample(chains[1]).id, "a1#1");
}

TEST(SplitChainsTest, SingleChainArticleIsUnchanged) {
  const auto a = SmallCorpus()[1];
  const auto chains = SplitChains({a});
  ASSERT_EQ(chains.size(), 1u);
  EXPECT_EQ(chains[0].sentences, a.sentences);
  EXPECT_EQ(chains[0].evidence, a.evidence_chains[0]);
}

TEST(DevSplitTest, GroupsByArticleAndHitsCount) {
  const auto chains = SplitChains(SmallCorpus());
  for (int count = 1; count < 8; ++count) {
    const TrainDevSplit s = MakeDevSplit(chains, count, 42);
    EXPECT_EQ(static_cast<int>(s.dev.size()), count);
    EXPECT_EQ(s.train.size() + s.dev.size(), chains.size());
    std::set<std::string> dev_ids;
    for (const auto& c : s.dev) dev_ids.insert(c.article_id);
    for (const auto& c : s.train) EXPECT_FALSE(dev_ids.count(c.article_id));
  }
  EXPECT_THROW(MakeDevSplit(chains, 8, 42), ConfigError);
}

TEST(DevSplitTest, Deterministic) {
  const auto chains = SplitChains(SmallCorpus());
  EXPECT_EQ(MakeDevSplit(chains, 4, 7).dev, MakeDevSplit(chains, 4, 7).dev);
}

TEST(StatsTest, LabelCountsAndHistogram) {
  const StatsReport r = ComputeStats(SmallCorpus());
  EXPECT_EQ(r.num_articles, 5);
  EXPECT_EQ(r.num_chains, 8);
  EXPECT_EQ(r.label_counts[LabelIndex(VeracityLabel::kFalse)], 2);
  EXPECT_EQ(r.label_counts[LabelIndex(VeracityLabel::kHalfTrue)], 1);
  EXPECT_EQ(r.label_counts[LabelIndex(VeracityLabel::kTrue)], 2);
  double total = 0;
  for (double p : r.chain_length_histogram) total += p;
  EXPECT_NEAR(total, 100.0, 1e-9);
  EXPECT_NEAR(r.chain_length_histogram[1], 100.0 * 5 / 8, 1e-9);
}

TEST(StatsTest, SampleStandardDeviation) {
  std::vector<ArticleInstance> d = {
      MakeArticle("x", VeracityLabel::kTrue, {"a", "b"}, {{0}}),
      MakeArticle("y", VeracityLabel::kTrue, {"a", "b", "c", "d"}, {{0}})};
  const StatsReport r = ComputeStats(d);
  EXPECT_DOUBLE_EQ(r.sentences_per_article.mean, 3.0);
  EXPECT_NEAR(r.sentences_per_article.sd, std::sqrt(2.0), 1e-12);
}

TEST(FingerprintTest, StableAndSensitive) {
  EXPECT_EQ(Fingerprint(""), "cbf29ce484222325");
  EXPECT_NE(Fingerprint("a"), Fingerprint("b"));
}

}  // namespace
}  // namespace factcheck
