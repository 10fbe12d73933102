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

#include "testing/fixtures.h"

#include <unistd.h>

#include <algorithm>

namespace factcheck::testing {

namespace {

// Gradients whose norm falls below this are compared absolutely.
constexpr double kGradientFloor = 1e-5;

}  // namespace

ArticleInstance MakeArticle(const std::string& id, VeracityLabel label,
                            std::vector<std::string> sentences,
                            std::vector<Chain> chains, Split split) {
  ArticleInstance a;
  a.id = id;
  a.claim = "Claim " + id + " about Senator Smith and Ohio";
  a.speaker = "Jane Doe";
  a.label = label;
  a.sentences = std::move(sentences);
  a.evidence_chains = std::move(chains);
  a.split = split;
  return a;
}

std::vector<ArticleInstance> SmallCorpus() {
  using L = VeracityLabel;
  std::vector<ArticleInstance> out;
  out.push_back(MakeArticle(
      "a1", L::kFalse,
      {"Senator Smith voted against the bill in Ohio.",
       "The bill would have cut taxes.", "Reporters asked the Governor.",
       "Ohio lawmakers disagreed with Smith.", "The vote was in March.",
       "Nobody expected that outcome.", "Later the Senate adjourned."},
      {{0, 3}, {1}}));
  out.push_back(MakeArticle(
      "a2", L::kTrue,
      {"The Governor signed the budget.", "Texas gained jobs in May.",
       "Economists at Harvard agreed.", "The budget grew by 3 percent.",
       "Critics from Texas complained.", "The weather was mild."},
      {{0, 3}}));
  out.push_back(MakeArticle(
      "a3", L::kHalfTrue,
      {"Mayor Jones promised new roads.", "Some roads were built in Denver.",
       "Others were delayed by Congress.", "The report came from Reuters.",
       "Denver voters were split.", "Jones later clarified."},
      {{1, 2}, {0, 1, 5}}, Split::kDev));
  out.push_back(MakeArticle(
      "a4", L::kFalse,
      {"The NASA budget was not cut.", "Congress approved funding.",
       "Senator Brown objected loudly.", "The agency hired staff.",
       "Florida hosts launches.", "Brown later retracted."},
      {{0, 1}}, Split::kTest));
  out.push_back(MakeArticle(
      "a5", L::kTrue,
      {"Unemployment fell in Michigan.", "The Labor Department confirmed it.",
       "Detroit factories reopened.", "Analysts were cautious.",
       "The Governor praised workers."},
      {{0, 1}, {2}}, Split::kTest));
  return out;
}

std::vector<Example> PlantedKeywordCorpus(int n, uint64_t seed) {
  static const char* kKeywords[kNumLabels] = {"bogus", "partly", "verified"};
  static const char* kFiller[] = {
      "the committee met on tuesday morning", "weather stayed mild all week",
      "reporters waited outside the hall", "the session ran long again",
      "coffee was served in the lobby", "several staff members took notes",
      "traffic slowed near the capitol", "the agenda listed other items"};
  Rng rng(seed);
  std::vector<Example> out;
  for (int i = 0; i < n; ++i) {
    Example e;
    e.id = "syn" + std::to_string(i);
    e.label = LabelFromIndex(i % kNumLabels);
    e.claim = "the statement number " + std::to_string(i % 5) + " is accurate";
    e.speaker = "speaker";
    const int num_sentences = 6;
    std::vector<int> evidence = rng.SampleWithoutReplacement(num_sentences, 2);
    std::sort(evidence.begin(), evidence.end());
    for (int s = 0; s < num_sentences; ++s) {
      if (s == evidence[0] || s == evidence[1]) {
        e.sentences.push_back(std::string("the claim was ") +
                              kKeywords[LabelIndex(e.label)] + " said the " +
                              (s == evidence[0] ? "auditor" : "checker"));
      } else {
        e.sentences.push_back(kFiller[rng.UniformInt(8)]);
      }
    }
    e.chains = {evidence};
    out.push_back(std::move(e));
  }
  return out;
}

ModelConfig TinyModelConfig(int vocab_size, int hops) {
  ModelConfig m;
  m.encoder = TinyEncoderConfig(vocab_size, 2, 32, 2, 64);
  m.hops = {hops, 32, 1};
  m.max_node_len = 48;
  m.top_k = 2;
  return m;
}

Tokenizer VocabFor(const std::vector<Example>& examples) {
  std::vector<std::string> texts;
  for (const Example& e : examples) {
    texts.push_back(e.claim);
    texts.push_back(e.speaker);
    texts.insert(texts.end(), e.sentences.begin(), e.sentences.end());
  }
  return Tokenizer::Build(texts);
}

double GradientCheck(Verifier& model, const Example& example, LossMode mode,
                     const std::vector<std::string>& prefixes, double h) {
  const NodeBatch batch = model.Nodes(example);
  const std::vector<int> gold = ChainUnion(example.chains);
  auto loss = [&] {
    ad::Tape tape;
    GraphOutputs g = model.ForwardGraph(tape, batch, /*trainable=*/false);
    return ComputeLoss(g.heads, example.label, gold, mode).value.total;
  };
  model.params().ZeroGrad();
  {
    ad::Tape tape;
    GraphOutputs g = model.ForwardGraph(tape, batch, /*trainable=*/true);
    tape.Backward(ComputeLoss(g.heads, example.label, gold, mode).total);
  }
  double worst = 0.0;
  for (Parameter* p : model.params().All()) {
    bool selected = false;
    for (const auto& prefix : prefixes) {
      selected = selected || p->name.rfind(prefix, 0) == 0;
    }
    if (!selected) continue;
    Eigen::MatrixXd numeric(p->value.rows(), p->value.cols());
    for (Eigen::Index i = 0; i < p->value.size(); ++i) {
      const double saved = p->value.data()[i];
      p->value.data()[i] = saved + h;
      const double up = loss();
      p->value.data()[i] = saved - h;
      const double down = loss();
      p->value.data()[i] = saved;
      numeric.data()[i] = (up - down) / (2.0 * h);
    }
    const double denom =
        std::max(p->grad.norm() + numeric.norm(), kGradientFloor);
    worst = std::max(worst, (p->grad - numeric).norm() / denom);
  }
  return worst;
}

std::filesystem::path TempDir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() /
             ("factcheck_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace factcheck::testing
