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

#ifndef FACTCHECK_REASONER_H_
#define FACTCHECK_REASONER_H_

#include <array>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "factcheck/autodiff.h"
#include "factcheck/encoder.h"
#include "factcheck/prediction.h"
#include "factcheck/tokenizer.h"

namespace factcheck {

inline constexpr int kMaxHops = 7;
inline constexpr int kDefaultTopK = 6;

struct HopStackConfig {
  int num_hops = 3;
  int hidden = 64;
  int heads = 1;

  void Validate() const;
};

using LabelDist = std::array<double, kNumLabels>;

// ---- Heads ----

struct HeadOutputs {
  ad::Var node_label_probs;  // n x 3, rows sum to 1
  ad::Var log_importance;    // 1 x n
  ad::Var importance;        // 1 x n, sums to 1
  ad::Var label_dist;        // 1 x 3 mixture
};

// Label head: per-node affine map + softmax over labels. Importance head: a
// separate affine map to one logit per node, softmax across nodes. The
// aggregated label distribution is sum_n importance[n] * node_label[n].
HeadOutputs ApplyHeads(ParamBinder& params, ad::Var summaries);

// Value-level aggregation; throws ValidationError on length mismatch.
LabelDist AggregateLabel(const std::vector<LabelDist>& node_label_dists,
                         const std::vector<double>& importance);

// ---- eXtra hop attention ----

// Parameters of one hop layer. Head h owns project[h] (in x d_h) and the
// query[h], key[h] maps (d_h x d_h).
struct HopLayerParams {
  std::vector<Eigen::MatrixXd> project;
  std::vector<Eigen::MatrixXd> query;
  std::vector<Eigen::MatrixXd> key;
};

struct HopLayerVars {
  ad::Var summaries;  // n x hidden
  ad::Var attention;  // n x n, head average
};

// Graph attention over the fully connected node graph with self edges:
//   z = S W,  e_uv = (z_u Q) . (z_v K) / sqrt(d_h),
//   alpha_u. = softmax_v(e_u.),  s'_u = ELU(sum_v alpha_uv z_v)
// Heads are concatenated.
HopLayerVars ExtraHopLayer(ParamBinder& params, int layer, ad::Var summaries,
                           int heads);

struct HopLayerOutput {
  Eigen::MatrixXd summaries;
  Eigen::MatrixXd attention;
};

// Standalone evaluation of one layer with explicit parameters.
HopLayerOutput ExtraHopLayer(const Eigen::MatrixXd& summaries,
                             const HopLayerParams& params);

// The min(k, n) highest-importance indices, ties to the lower index,
// returned ascending.
std::vector<int> SelectEvidence(const std::vector<double>& importance, int k);

// ---- Models ----

struct ModelConfig {
  EncoderConfig encoder;
  HopStackConfig hops;
  int max_node_len = kDefaultMaxNodeLen;
  bool sentence_ids = false;
  int top_k = kDefaultTopK;

  void Validate() const;
};

struct GraphOutputs {
  HeadOutputs heads;
  std::vector<ad::Var> attention;  // one per hop layer
};

// Encoder, L eXtra hop layers over the node summaries, and the two heads.
// L = 0 is the single-step model.
class Verifier {
 public:
  // Fresh parameters from seed.
  Verifier(ModelConfig config, Tokenizer tokenizer, uint64_t seed);
  // Parameters from a checkpoint.
  Verifier(ModelConfig config, Tokenizer tokenizer, ParameterStore params);

  NodeBatch Nodes(const Example& example) const;

  GraphOutputs ForwardGraph(ad::Tape& tape, const NodeBatch& batch,
                            bool trainable);
  Prediction Forward(const NodeBatch& batch) const;
  Prediction Predict(const Example& example) const {
    return Forward(Nodes(example));
  }

  const ModelConfig& config() const { return config_; }
  const Tokenizer& tokenizer() const { return tokenizer_; }
  const EncoderBackend& encoder() const { return *encoder_; }
  ParameterStore& params() { return params_; }
  const ParameterStore& params() const { return params_; }

  // Parameter names shaped by the config, for a fresh store.
  static void InitParameters(const ModelConfig& config,
                             const EncoderBackend& encoder,
                             ParameterStore& store, Rng& rng);

 private:
  ModelConfig config_;
  Tokenizer tokenizer_;
  std::unique_ptr<EncoderBackend> encoder_;
  ParameterStore params_;
};

// Encoder followed directly by the heads; reads the same parameter names
// as a Verifier.
class SingleStepModel {
 public:
  SingleStepModel(const EncoderBackend& encoder, const ParameterStore& params,
                  int top_k)
      : encoder_(encoder), params_(params), top_k_(top_k) {}

  Prediction Forward(const NodeBatch& batch) const;

 private:
  const EncoderBackend& encoder_;
  const ParameterStore& params_;
  int top_k_;
};

// Reads values of graph outputs into a Prediction with top-k evidence.
Prediction ToPrediction(const HeadOutputs& heads,
                        const std::vector<ad::Var>& attention, int top_k);

}  // namespace factcheck

#endif  // FACTCHECK_REASONER_H_
