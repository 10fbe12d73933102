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

#include "factcheck/reasoner.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "factcheck/error.h"
#include "gtest/gtest.h"
#include "testing/fixtures.h"

namespace factcheck {
namespace {

using testing::PlantedKeywordCorpus;
using testing::TinyModelConfig;
using testing::VocabFor;

TEST(AggregateLabelTest, MixtureArithmetic) {
  const LabelDist d = AggregateLabel(
      {{0.7, 0.2, 0.1}, {0.1, 0.1, 0.8}, {0.3, 0.4, 0.3}}, {0.5, 0.3, 0.2});
  EXPECT_NEAR(d[0], 0.44, 1e-12);
  EXPECT_NEAR(d[1], 0.21, 1e-12);
  EXPECT_NEAR(d[2], 0.35, 1e-12);
  EXPECT_THROW(AggregateLabel({{1, 0, 0}}, {0.5, 0.5}), ValidationError);
}

TEST(SelectEvidenceTest, TiesGoToLowerIndex) {
  EXPECT_EQ(SelectEvidence({0.2, 0.3, 0.3, 0.2}, 2), (std::vector<int>{1, 2}));
  EXPECT_EQ(SelectEvidence({0.25, 0.25, 0.25, 0.25}, 3),
            (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(SelectEvidence({0.5, 0.5}, 6), (std::vector<int>{0, 1}));
  EXPECT_THROW(SelectEvidence({1.0}, 0), ConfigError);
}

TEST(ExtraHopLayerTest, MatchesHandFormula) {
  Eigen::MatrixXd s(3, 2);
  s << 1.0, 0.0,  //
      0.0, 1.0,   //
      1.0, 1.0;
  HopLayerParams p;
  p.project = {Eigen::MatrixXd::Identity(2, 2)};
  p.query = {(Eigen::MatrixXd(2, 2) << 1.0, 0.0, 0.0, 0.0).finished()};
  p.key = {(Eigen::MatrixXd(2, 2) << 0.0, 0.0, 0.0, 2.0).finished()};
  const HopLayerOutput out = ExtraHopLayer(s, p);
  for (int u = 0; u < 3; ++u) {
    // Queries and keys use disjoint coordinates, so every score is zero.
    EXPECT_NEAR((out.attention.row(u).array() - 1.0 / 3).matrix().norm(), 0.0,
                1e-12);
  }
  p.key = {(Eigen::MatrixXd(2, 2) << 0.0, 0.0, 2.0, 0.0).finished()};
  const HopLayerOutput out2 = ExtraHopLayer(s, p);
  for (int u = 0; u < 3; ++u) {
    // e_uv = s_u0 * 2 s_v1 / sqrt(2).
    Eigen::RowVector3d e;
    for (int v = 0; v < 3; ++v) e(v) = s(u, 0) * 2.0 * s(v, 1) / std::sqrt(2.0);
    const Eigen::RowVector3d alpha = e.array().exp() / e.array().exp().sum();
    EXPECT_NEAR((out2.attention.row(u) - alpha).norm(), 0.0, 1e-12);
    const Eigen::RowVector2d mixed = alpha * s;
    for (int j = 0; j < 2; ++j) {
      const double elu = mixed(j) > 0 ? mixed(j) : std::exp(mixed(j)) - 1;
      EXPECT_NEAR(out2.summaries(u, j), elu, 1e-12);
    }
  }
}

TEST(ExtraHopLayerTest, ThreeNodeOracle) {
  Eigen::MatrixXd s(3, 2);
  s << 1.0, 0.0,  //
      0.0, 1.0,   //
      1.0, 1.0;
  HopLayerParams p;
  p.project = {Eigen::MatrixXd::Identity(2, 2)};
  p.query = {Eigen::MatrixXd::Identity(2, 2)};
  p.key = {Eigen::MatrixXd::Identity(2, 2)};
  const HopLayerOutput out = ExtraHopLayer(s, p);
  // Row 0 scores (1, 0, 1) / sqrt(2).
  const double a = std::exp(1 / std::sqrt(2.0));
  EXPECT_NEAR(out.attention(0, 0), a / (2 * a + 1), 1e-12);
  EXPECT_NEAR(out.attention(0, 1), 1 / (2 * a + 1), 1e-12);
  EXPECT_NEAR(out.summaries(0, 0), 2 * a / (2 * a + 1), 1e-12);
  EXPECT_NEAR(out.summaries(0, 1), (a + 1) / (2 * a + 1), 1e-12);
}

TEST(ExtraHopLayerTest, MultiHeadConcatenatesAndAveragesAttention) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Random(4, 3);
  HopLayerParams p;
  for (int h = 0; h < 2; ++h) {
    p.project.push_back(Eigen::MatrixXd::Random(3, 2));
    p.query.push_back(Eigen::MatrixXd::Random(2, 2));
    p.key.push_back(Eigen::MatrixXd::Random(2, 2));
  }
  const HopLayerOutput out = ExtraHopLayer(s, p);
  EXPECT_EQ(out.summaries.cols(), 4);
  for (int u = 0; u < 4; ++u) EXPECT_NEAR(out.attention.row(u).sum(), 1.0, 1e-12);
}

TEST(VerifierTest, ZeroHopsEqualsSingleStepModel) {
  const auto data = PlantedKeywordCorpus(3, 1);
  const Tokenizer vocab = VocabFor(data);
  Verifier model(TinyModelConfig(vocab.size(), 0), vocab, 9);
  SingleStepModel single(model.encoder(), model.params(), 2);
  for (const Example& e : data) {
    const NodeBatch b = model.Nodes(e);
    const Prediction a = model.Forward(b);
    const Prediction c = single.Forward(b);
    EXPECT_EQ(a.label_dist, c.label_dist);
    EXPECT_EQ(a.importance, c.importance);
    EXPECT_EQ(a.evidence, c.evidence);
    EXPECT_TRUE(a.hop_attention.empty());
  }
}

TEST(VerifierTest, OutputsAreDistributions) {
  const auto data = PlantedKeywordCorpus(1, 2);
  const Tokenizer vocab = VocabFor(data);
  Verifier model(TinyModelConfig(vocab.size(), 3), vocab, 3);
  const Prediction p = model.Predict(data[0]);
  EXPECT_NEAR(std::accumulate(p.label_dist.begin(), p.label_dist.end(), 0.0),
              1.0, 1e-12);
  EXPECT_NEAR(std::accumulate(p.importance.begin(), p.importance.end(), 0.0),
              1.0, 1e-12);
  ASSERT_EQ(p.hop_attention.size(), 3u);
  EXPECT_EQ(p.hop_attention[0].rows(), 6);
  EXPECT_EQ(p.evidence.size(), 2u);
}

TEST(VerifierTest, SameSeedSameOutput) {
  const auto data = PlantedKeywordCorpus(1, 2);
  const Tokenizer vocab = VocabFor(data);
  Verifier a(TinyModelConfig(vocab.size(), 2), vocab, 5);
  Verifier b(TinyModelConfig(vocab.size(), 2), vocab, 5);
  EXPECT_EQ(a.Predict(data[0]).importance, b.Predict(data[0]).importance);
}

TEST(VerifierTest, CheckpointShapeMismatchThrows) {
  const auto data = PlantedKeywordCorpus(1, 2);
  const Tokenizer vocab = VocabFor(data);
  Verifier a(TinyModelConfig(vocab.size(), 1), vocab, 5);
  EXPECT_THROW(Verifier(TinyModelConfig(vocab.size(), 2), vocab, a.params()),
               ConfigError);
}

TEST(VerifierTest, GradientsMatchFiniteDifferences) {
  auto data = PlantedKeywordCorpus(1, 4);
  data[0].sentences.resize(3);
  data[0].chains = {{0, 2}};
  const Tokenizer vocab = VocabFor(data);
  Verifier model(TinyModelConfig(vocab.size(), 2), vocab, 17);
  EXPECT_LT(testing::GradientCheck(model, data[0], LossMode::kJoint,
                                   {"hop", "head"}),
            1e-4);
}

TEST(ModelConfigTest, Validation) {
  ModelConfig c = TinyModelConfig(200, 8);
  EXPECT_THROW(c.Validate(), ConfigError);
  c = TinyModelConfig(200, 2);
  c.max_node_len = 7;
  EXPECT_THROW(c.Validate(), ConfigError);
}

}  // namespace
}  // namespace factcheck
