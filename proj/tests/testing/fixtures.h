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

#ifndef FACTCHECK_TESTING_FIXTURES_H_
#define FACTCHECK_TESTING_FIXTURES_H_

#include <filesystem>
#include <string>
#include <vector>

#include "factcheck/corpus.h"
#include "factcheck/random.h"
#include "factcheck/reasoner.h"
#include "factcheck/train.h"

namespace factcheck::testing {

ArticleInstance MakeArticle(const std::string& id, VeracityLabel label,
                            std::vector<std::string> sentences,
                            std::vector<Chain> chains,
                            Split split = Split::kTrain);

// Small political corpus with named entities, three splits.
std::vector<ArticleInstance> SmallCorpus();

// n instances of 6 sentences. Two evidence sentences carry the keyword
// that determines the label; the other four are filler.
std::vector<Example> PlantedKeywordCorpus(int n, uint64_t seed);

// Tiny model config over a vocabulary built from the examples.
ModelConfig TinyModelConfig(int vocab_size, int hops);
Tokenizer VocabFor(const std::vector<Example>& examples);

// Worst per-tensor relative error ||analytic - numeric|| / max(||analytic|| +
// ||numeric||, 1e-5) over parameters whose name starts with one of the
// prefixes.
// Numeric gradients use central differences with step h.
double GradientCheck(Verifier& model, const Example& example, LossMode mode,
                     const std::vector<std::string>& prefixes, double h = 1e-4);

// Fresh, empty directory under the system temp dir.
std::filesystem::path TempDir(const std::string& name);

}  // namespace factcheck::testing

#endif  // FACTCHECK_TESTING_FIXTURES_H_
