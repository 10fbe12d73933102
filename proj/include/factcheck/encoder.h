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

#ifndef FACTCHECK_ENCODER_H_
#define FACTCHECK_ENCODER_H_

#include <map>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "factcheck/autodiff.h"
#include "factcheck/corpus.h"
#include "factcheck/params.h"
#include "factcheck/tokenizer.h"

namespace factcheck {

inline constexpr int kMinNodeLen = 8;
inline constexpr int kDefaultMaxNodeLen = 128;

// One token sequence per sentence:
//   [CLS] claim [SEP] speaker [SEP] | ([unusedJ]) sentence [SEP]
// with segment 0 for the left part and 1 for the right part.
struct NodeBatch {
  std::vector<std::vector<int>> tokens;
  std::vector<std::vector<int>> segments;
  std::vector<int> origin;  // original sentence index per node
  int max_node_len = kDefaultMaxNodeLen;

  int size() const { return static_cast<int>(tokens.size()); }
};

// Overlong nodes lose sentence tokens first, then the tail of the
// claim/speaker part; the summary token and the final [SEP] always stay.
// sentence_ids prepends the position token of the sentence's index in the
// instance. Throws ConfigError when max_node_len < 8.
NodeBatch BuildNodes(const Tokenizer& tokenizer, const std::string& claim,
                     const std::string& speaker,
                     const std::vector<std::string>& sentences,
                     int max_node_len, bool sentence_ids,
                     const std::vector<int>& origin = {});
NodeBatch BuildNodes(const Tokenizer& tokenizer, const Example& example,
                     int max_node_len, bool sentence_ids);

// Per-node vector sequences; row 0 of each is the summary vector.
struct NodeRepresentations {
  std::vector<Eigen::MatrixXd> sequences;

  int size() const { return static_cast<int>(sequences.size()); }
  int hidden() const {
    return sequences.empty() ? 0 : static_cast<int>(sequences[0].cols());
  }
  // size() x hidden() matrix of row-0 vectors.
  Eigen::MatrixXd Summaries() const;
};

// Binds parameters of a store onto a tape once per forward pass. When
// trainable is false they enter as constants and receive no gradient.
class ParamBinder {
 public:
  ParamBinder(ad::Tape& tape, ParameterStore& store, bool trainable)
      : tape_(tape), store_(store), trainable_(trainable) {}

  ad::Var operator()(const std::string& name);
  ad::Tape& tape() { return tape_; }
  ParameterStore& store() { return store_; }

 private:
  ad::Tape& tape_;
  ParameterStore& store_;
  bool trainable_;
  std::map<std::string, ad::Var> bound_;
};

struct EncoderConfig {
  std::string name = "tiny";
  int vocab_size = 0;
  int hidden = 32;
  int layers = 2;
  int heads = 2;
  int ffn = 64;
  int max_len = kDefaultMaxNodeLen;
  bool trainable = true;
  double layer_norm_eps = 1e-12;

  void Validate() const;
};

EncoderConfig TinyEncoderConfig(int vocab_size, int layers = 2,
                                int hidden = 32, int heads = 2,
                                int ffn = 64);
// BERT-base geometry: 12 layers, hidden 768, 12 heads, FFN 3072, 512
// positions.
EncoderConfig PretrainedEncoderConfig(int vocab_size);

struct BackendInfo {
  std::string name;
  int hidden = 0;
  int max_len = 0;
  bool trainable = false;
};

// Maps a NodeBatch to per-node vector sequences. Parameters live in the
// caller's store under the "encoder." prefix.
class EncoderBackend {
 public:
  virtual ~EncoderBackend() = default;

  virtual BackendInfo info() const = 0;
  virtual void InitParameters(ParameterStore& store, Rng& rng) const = 0;
  // One seq_len x hidden Var per node, in batch order.
  virtual std::vector<ad::Var> Encode(ParamBinder& params,
                                      const NodeBatch& batch) const = 0;

  // Evaluation-mode encoding. Throws ValidationError naming node and
  // position for ids outside the vocabulary.
  NodeRepresentations EncodeNodes(const ParameterStore& store,
                                  const NodeBatch& batch) const;

 protected:
  void CheckIds(const NodeBatch& batch, int vocab_size) const;
};

// Post-layer-norm transformer encoder (BERT layout) with token, position
// and segment embeddings.
class TransformerEncoder : public EncoderBackend {
 public:
  explicit TransformerEncoder(EncoderConfig config);

  BackendInfo info() const override;
  void InitParameters(ParameterStore& store, Rng& rng) const override;
  std::vector<ad::Var> Encode(ParamBinder& params,
                              const NodeBatch& batch) const override;

  const EncoderConfig& config() const { return config_; }

 private:
  ad::Var EncodeOne(ParamBinder& params, const std::vector<int>& tokens,
                    const std::vector<int>& segments) const;

  EncoderConfig config_;
};

// "tiny" or "pretrained-12x768".
std::unique_ptr<EncoderBackend> MakeBackend(const EncoderConfig& config);

}  // namespace factcheck

#endif  // FACTCHECK_ENCODER_H_
