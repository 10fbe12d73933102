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

namespace factcheck {

void HopStackConfig::Validate() const {
  if (num_hops < 0 || num_hops > kMaxHops) {
    throw ConfigError("number of hops must be in [0, " +
                      std::to_string(kMaxHops) + "]");
  }
  if (hidden <= 0) throw ConfigError("hop hidden size must be positive");
  if (heads <= 0 || hidden % heads != 0) {
    throw ConfigError("hop hidden size must be divisible by hop heads");
  }
}

void ModelConfig::Validate() const {
  encoder.Validate();
  hops.Validate();
  if (max_node_len < kMinNodeLen) {
    throw ConfigError("max_node_len must be at least " +
                      std::to_string(kMinNodeLen));
  }
  if (max_node_len > encoder.max_len) {
    throw ConfigError("max_node_len exceeds the encoder's positions");
  }
  if (top_k < 1) throw ConfigError("top_k must be at least 1");
}

// ---- Heads ----

HeadOutputs ApplyHeads(ParamBinder& P, ad::Var summaries) {
  if (summaries.rows() < 1) throw ValidationError("heads need at least one node");
  HeadOutputs out;
  ad::Var label_logits = ad::AddRow(ad::MatMul(summaries, P("head.label.w")),
                                    P("head.label.b"));
  out.node_label_probs = ad::SoftmaxRows(label_logits);
  ad::Var importance_logits = ad::AddRow(
      ad::MatMul(summaries, P("head.importance.w")), P("head.importance.b"));
  out.log_importance = ad::LogSoftmaxRows(ad::Transpose(importance_logits));
  out.importance = ad::Exp(out.log_importance);
  out.label_dist = ad::MatMul(out.importance, out.node_label_probs);
  return out;
}

LabelDist AggregateLabel(const std::vector<LabelDist>& node_label_dists,
                         const std::vector<double>& importance) {
  if (node_label_dists.size() != importance.size()) {
    throw ValidationError("label distributions and importance differ in length");
  }
  if (node_label_dists.empty()) throw ValidationError("no nodes to aggregate");
  LabelDist out{};
  for (size_t n = 0; n < importance.size(); ++n) {
    for (int l = 0; l < kNumLabels; ++l) {
      out[l] += importance[n] * node_label_dists[n][l];
    }
  }
  return out;
}

// ---- Hop layers ----

namespace {

std::string HopName(int layer, int head, const char* part) {
  return "hop" + std::to_string(layer) + ".head" + std::to_string(head) + "." +
         part;
}

HopLayerVars HopLayerImpl(ad::Var summaries,
                          const std::vector<ad::Var>& project,
                          const std::vector<ad::Var>& query,
                          const std::vector<ad::Var>& key) {
  const int heads = static_cast<int>(project.size());
  std::vector<ad::Var> outputs;
  ad::Var attention_sum{};
  for (int h = 0; h < heads; ++h) {
    ad::Var z = ad::MatMul(summaries, project[h]);
    ad::Var q = ad::MatMul(z, query[h]);
    ad::Var k = ad::MatMul(z, key[h]);
    ad::Var scores = ad::Scale(ad::MatMul(q, ad::Transpose(k)),
                               1.0 / std::sqrt(static_cast<double>(q.cols())));
    ad::Var alpha = ad::SoftmaxRows(scores);
    outputs.push_back(ad::MatMul(alpha, z));
    attention_sum = h == 0 ? alpha : ad::Add(attention_sum, alpha);
  }
  HopLayerVars out;
  out.summaries = ad::Elu(heads == 1 ? outputs[0] : ad::ConcatCols(outputs));
  out.attention =
      heads == 1 ? attention_sum : ad::Scale(attention_sum, 1.0 / heads);
  return out;
}

}  // namespace

HopLayerVars ExtraHopLayer(ParamBinder& P, int layer, ad::Var summaries,
                           int heads) {
  std::vector<ad::Var> project, query, key;
  for (int h = 0; h < heads; ++h) {
    project.push_back(P(HopName(layer, h, "project")));
    query.push_back(P(HopName(layer, h, "query")));
    key.push_back(P(HopName(layer, h, "key")));
  }
  return HopLayerImpl(summaries, project, query, key);
}

HopLayerOutput ExtraHopLayer(const Eigen::MatrixXd& summaries,
                             const HopLayerParams& params) {
  const size_t heads = params.project.size();
  if (heads == 0 || params.query.size() != heads ||
      params.key.size() != heads) {
    throw ConfigError("hop layer parameters are inconsistent");
  }
  ad::Tape tape;
  std::vector<ad::Var> project, query, key;
  for (size_t h = 0; h < heads; ++h) {
    project.push_back(tape.Constant(params.project[h]));
    query.push_back(tape.Constant(params.query[h]));
    key.push_back(tape.Constant(params.key[h]));
  }
  HopLayerVars vars =
      HopLayerImpl(tape.Constant(summaries), project, query, key);
  return {vars.summaries.value(), vars.attention.value()};
}

std::vector<int> SelectEvidence(const std::vector<double>& importance, int k) {
  if (k < 1) throw ConfigError("k must be at least 1");
  std::vector<int> order(importance.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return importance[a] > importance[b];
  });
  order.resize(std::min<size_t>(k, order.size()));
  std::sort(order.begin(), order.end());
  return order;
}

// ---- Verifier ----

Prediction ToPrediction(const HeadOutputs& heads,
                        const std::vector<ad::Var>& attention, int top_k) {
  Prediction p;
  const Eigen::MatrixXd& dist = heads.label_dist.value();
  for (int l = 0; l < kNumLabels; ++l) p.label_dist[l] = dist(0, l);
  const Eigen::MatrixXd& imp = heads.importance.value();
  p.importance.assign(imp.data(), imp.data() + imp.size());
  p.evidence = SelectEvidence(p.importance, top_k);
  for (const ad::Var& a : attention) p.hop_attention.push_back(a.value());
  return p;
}

void Verifier::InitParameters(const ModelConfig& config,
                              const EncoderBackend& encoder,
                              ParameterStore& store, Rng& rng) {
  encoder.InitParameters(store, rng);
  const int h = config.encoder.hidden;
  const int d = config.hops.hidden;
  const int head_dim = d / config.hops.heads;
  for (int l = 0; l < config.hops.num_hops; ++l) {
    const int in = l == 0 ? h : d;
    for (int k = 0; k < config.hops.heads; ++k) {
      store.CreateUniform(HopName(l, k, "project"), in, head_dim,
                          std::sqrt(6.0 / (in + head_dim)), rng);
      store.CreateUniform(HopName(l, k, "query"), head_dim, head_dim,
                          std::sqrt(3.0 / head_dim), rng);
      store.CreateUniform(HopName(l, k, "key"), head_dim, head_dim,
                          std::sqrt(3.0 / head_dim), rng);
    }
  }
  const int head_in = config.hops.num_hops > 0 ? d : h;
  store.CreateUniform("head.label.w", head_in, kNumLabels,
                      std::sqrt(6.0 / (head_in + kNumLabels)), rng);
  store.Create("head.label.b", 1, kNumLabels);
  store.CreateUniform("head.importance.w", head_in, 1,
                      std::sqrt(6.0 / (head_in + 1)), rng);
  store.Create("head.importance.b", 1, 1);
}

Verifier::Verifier(ModelConfig config, Tokenizer tokenizer, uint64_t seed)
    : config_(std::move(config)), tokenizer_(std::move(tokenizer)) {
  config_.Validate();
  encoder_ = MakeBackend(config_.encoder);
  Rng rng(seed);
  InitParameters(config_, *encoder_, params_, rng);
}

Verifier::Verifier(ModelConfig config, Tokenizer tokenizer,
                   ParameterStore params)
    : config_(std::move(config)),
      tokenizer_(std::move(tokenizer)),
      params_(std::move(params)) {
  config_.Validate();
  encoder_ = MakeBackend(config_.encoder);
  // Shape check against a freshly shaped store.
  ParameterStore shape;
  Rng rng(0);
  InitParameters(config_, *encoder_, shape, rng);
  for (const Parameter* p : shape.All()) {
    if (!params_.Has(p->name)) {
      throw ConfigError("checkpoint lacks parameter " + p->name);
    }
    const Parameter& q = params_.Get(p->name);
    if (q.value.rows() != p->value.rows() ||
        q.value.cols() != p->value.cols()) {
      throw ConfigError("checkpoint parameter " + p->name +
                        " has the wrong shape");
    }
  }
}

NodeBatch Verifier::Nodes(const Example& example) const {
  return BuildNodes(tokenizer_, example, config_.max_node_len,
                    config_.sentence_ids);
}

GraphOutputs Verifier::ForwardGraph(ad::Tape& tape, const NodeBatch& batch,
                                    bool trainable) {
  if (batch.size() < 1) throw ValidationError("instance has no sentences");
  ParamBinder binder(tape, params_, trainable);
  std::vector<ad::Var> encoded = encoder_->Encode(binder, batch);
  std::vector<ad::Var> summary_rows;
  for (const ad::Var& e : encoded) summary_rows.push_back(ad::RowSlice(e, 0, 1));
  ad::Var summaries = ad::ConcatRows(summary_rows);
  GraphOutputs out;
  for (int l = 0; l < config_.hops.num_hops; ++l) {
    HopLayerVars hop =
        ExtraHopLayer(binder, l, summaries, config_.hops.heads);
    summaries = hop.summaries;
    out.attention.push_back(hop.attention);
  }
  out.heads = ApplyHeads(binder, summaries);
  return out;
}

Prediction Verifier::Forward(const NodeBatch& batch) const {
  ad::Tape tape;
  GraphOutputs g = const_cast<Verifier*>(this)->ForwardGraph(
      tape, batch, /*trainable=*/false);
  return ToPrediction(g.heads, g.attention, config_.top_k);
}

Prediction SingleStepModel::Forward(const NodeBatch& batch) const {
  if (batch.size() < 1) throw ValidationError("instance has no sentences");
  ad::Tape tape;
  ParamBinder binder(tape, const_cast<ParameterStore&>(params_),
                     /*trainable=*/false);
  std::vector<ad::Var> rows;
  for (const ad::Var& e : encoder_.Encode(binder, batch)) {
    rows.push_back(ad::RowSlice(e, 0, 1));
  }
  HeadOutputs heads = ApplyHeads(binder, ad::ConcatRows(rows));
  return ToPrediction(heads, {}, top_k_);
}

}  // namespace factcheck
