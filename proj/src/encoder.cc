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

#include "factcheck/encoder.h"

#include <algorithm>
#include <cmath>

#include "factcheck/error.h"

namespace factcheck {

// ---- Node construction ----

NodeBatch BuildNodes(const Tokenizer& tokenizer, const std::string& claim,
                     const std::string& speaker,
                     const std::vector<std::string>& sentences,
                     int max_node_len, bool sentence_ids,
                     const std::vector<int>& origin) {
  if (max_node_len < kMinNodeLen) {
    throw ConfigError("max_node_len must be at least " +
                      std::to_string(kMinNodeLen));
  }
  if (!origin.empty() && origin.size() != sentences.size()) {
    throw ValidationError("origin length differs from sentence count");
  }
  NodeBatch batch;
  batch.max_node_len = max_node_len;
  const std::vector<int> claim_ids = tokenizer.Encode(claim);
  const std::vector<int> speaker_ids = tokenizer.Encode(speaker);
  std::vector<int> left = claim_ids;
  left.push_back(tokenizer.sep_id());
  left.insert(left.end(), speaker_ids.begin(), speaker_ids.end());
  left.push_back(tokenizer.sep_id());

  for (size_t j = 0; j < sentences.size(); ++j) {
    std::vector<int> body = tokenizer.Encode(sentences[j]);
    const int id_tokens = sentence_ids ? 1 : 0;
    // Budget after [CLS].
    const int budget = max_node_len - 1;
    int right_len = id_tokens + static_cast<int>(body.size()) + 1;
    int left_len = static_cast<int>(left.size());
    if (left_len + right_len > budget) {
      const int body_keep = std::max(0, budget - left_len - id_tokens - 1);
      if (body_keep < static_cast<int>(body.size())) body.resize(body_keep);
      right_len = id_tokens + static_cast<int>(body.size()) + 1;
      left_len = std::min(left_len, budget - right_len);
    }
    std::vector<int> tokens = {tokenizer.cls_id()};
    tokens.insert(tokens.end(), left.begin(), left.begin() + left_len);
    std::vector<int> segments(tokens.size(), 0);
    if (sentence_ids) {
      tokens.push_back(tokenizer.PositionTokenId(static_cast<int>(j)));
    }
    tokens.insert(tokens.end(), body.begin(), body.end());
    tokens.push_back(tokenizer.sep_id());
    segments.resize(tokens.size(), 1);
    batch.tokens.push_back(std::move(tokens));
    batch.segments.push_back(std::move(segments));
    batch.origin.push_back(origin.empty() ? static_cast<int>(j) : origin[j]);
  }
  return batch;
}

NodeBatch BuildNodes(const Tokenizer& tokenizer, const Example& example,
                     int max_node_len, bool sentence_ids) {
  return BuildNodes(tokenizer, example.claim, example.speaker,
                    example.sentences, max_node_len, sentence_ids);
}

Eigen::MatrixXd NodeRepresentations::Summaries() const {
  Eigen::MatrixXd out(size(), hidden());
  for (int i = 0; i < size(); ++i) out.row(i) = sequences[i].row(0);
  return out;
}

// ---- Binder ----

ad::Var ParamBinder::operator()(const std::string& name) {
  auto it = bound_.find(name);
  if (it != bound_.end()) return it->second;
  Parameter& p = store_.Get(name);
  ad::Var v = trainable_ ? tape_.Param(p)
                         : tape_.Param(static_cast<const Parameter&>(p));
  bound_.emplace(name, v);
  return v;
}

// ---- Configs ----

void EncoderConfig::Validate() const {
  if (vocab_size <= 0) throw ConfigError("encoder vocab_size must be positive");
  if (hidden <= 0 || layers < 0 || heads <= 0 || ffn <= 0 || max_len <= 0) {
    throw ConfigError("encoder sizes must be positive");
  }
  if (hidden % heads != 0) {
    throw ConfigError("encoder hidden size must be divisible by heads");
  }
}

EncoderConfig TinyEncoderConfig(int vocab_size, int layers, int hidden,
                                int heads, int ffn) {
  EncoderConfig c;
  c.name = "tiny";
  c.vocab_size = vocab_size;
  c.layers = layers;
  c.hidden = hidden;
  c.heads = heads;
  c.ffn = ffn;
  c.max_len = 512;
  c.trainable = true;
  return c;
}

EncoderConfig PretrainedEncoderConfig(int vocab_size) {
  EncoderConfig c;
  c.name = "pretrained-12x768";
  c.vocab_size = vocab_size;
  c.layers = 12;
  c.hidden = 768;
  c.heads = 12;
  c.ffn = 3072;
  c.max_len = 512;
  c.trainable = true;
  return c;
}

// ---- Backend base ----

void EncoderBackend::CheckIds(const NodeBatch& batch, int vocab_size) const {
  const int max_len = info().max_len;
  for (int n = 0; n < batch.size(); ++n) {
    if (static_cast<int>(batch.tokens[n].size()) > max_len) {
      throw ValidationError("node " + std::to_string(n) + " is longer than " +
                            std::to_string(max_len) + " positions");
    }
    for (size_t p = 0; p < batch.tokens[n].size(); ++p) {
      const int id = batch.tokens[n][p];
      if (id < 0 || id >= vocab_size) {
        throw ValidationError("node " + std::to_string(n) + " position " +
                              std::to_string(p) + ": token id " +
                              std::to_string(id) + " outside vocabulary");
      }
    }
  }
}

NodeRepresentations EncoderBackend::EncodeNodes(const ParameterStore& store,
                                                const NodeBatch& batch) const {
  ad::Tape tape;
  ParamBinder binder(tape, const_cast<ParameterStore&>(store),
                     /*trainable=*/false);
  NodeRepresentations reps;
  for (const ad::Var& v : Encode(binder, batch)) {
    reps.sequences.push_back(v.value());
  }
  return reps;
}

// ---- Transformer ----

TransformerEncoder::TransformerEncoder(EncoderConfig config)
    : config_(std::move(config)) {
  config_.Validate();
}

BackendInfo TransformerEncoder::info() const {
  return {config_.name, config_.hidden, config_.max_len, config_.trainable};
}

void TransformerEncoder::InitParameters(ParameterStore& store,
                                        Rng& rng) const {
  const int h = config_.hidden;
  auto linear = [&](const std::string& name, int in, int out) {
    const double scale = std::sqrt(6.0 / (in + out));
    store.CreateUniform(name + ".w", in, out, scale, rng);
    store.Create(name + ".b", 1, out);
  };
  auto norm = [&](const std::string& name) {
    store.CreateConstant(name + ".gamma", 1, h, 1.0);
    store.Create(name + ".beta", 1, h);
  };
  store.CreateUniform("encoder.embed.token", config_.vocab_size, h, 0.1, rng);
  store.CreateUniform("encoder.embed.position", config_.max_len, h, 0.1, rng);
  store.CreateUniform("encoder.embed.segment", 2, h, 0.1, rng);
  norm("encoder.embed.norm");
  for (int l = 0; l < config_.layers; ++l) {
    const std::string p = "encoder.layer" + std::to_string(l);
    linear(p + ".attn.query", h, h);
    linear(p + ".attn.key", h, h);
    linear(p + ".attn.value", h, h);
    linear(p + ".attn.output", h, h);
    norm(p + ".attn.norm");
    linear(p + ".ffn.in", h, config_.ffn);
    linear(p + ".ffn.out", config_.ffn, h);
    norm(p + ".ffn.norm");
  }
}

ad::Var TransformerEncoder::EncodeOne(ParamBinder& P,
                                      const std::vector<int>& tokens,
                                      const std::vector<int>& segments) const {
  const double eps = config_.layer_norm_eps;
  std::vector<int> positions(tokens.size());
  for (size_t i = 0; i < positions.size(); ++i) positions[i] = i;
  ad::Var x = ad::Add(ad::Gather(P("encoder.embed.token"), tokens),
                      ad::Gather(P("encoder.embed.position"), positions));
  x = ad::Add(x, ad::Gather(P("encoder.embed.segment"), segments));
  x = ad::LayerNormRows(x, P("encoder.embed.norm.gamma"),
                        P("encoder.embed.norm.beta"), eps);

  auto linear = [&](ad::Var in, const std::string& name) {
    return ad::AddRow(ad::MatMul(in, P(name + ".w")), P(name + ".b"));
  };
  const int head_dim = config_.hidden / config_.heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));
  for (int l = 0; l < config_.layers; ++l) {
    const std::string p = "encoder.layer" + std::to_string(l);
    ad::Var q = linear(x, p + ".attn.query");
    ad::Var k = linear(x, p + ".attn.key");
    ad::Var v = linear(x, p + ".attn.value");
    std::vector<ad::Var> heads;
    for (int h = 0; h < config_.heads; ++h) {
      ad::Var qh = ad::ColSlice(q, h * head_dim, head_dim);
      ad::Var kh = ad::ColSlice(k, h * head_dim, head_dim);
      ad::Var vh = ad::ColSlice(v, h * head_dim, head_dim);
      ad::Var scores = ad::Scale(ad::MatMul(qh, ad::Transpose(kh)), scale);
      heads.push_back(ad::MatMul(ad::SoftmaxRows(scores), vh));
    }
    ad::Var attended =
        heads.size() == 1 ? heads[0] : ad::ConcatCols(heads);
    x = ad::LayerNormRows(ad::Add(x, linear(attended, p + ".attn.output")),
                          P(p + ".attn.norm.gamma"), P(p + ".attn.norm.beta"),
                          eps);
    ad::Var f = linear(ad::Gelu(linear(x, p + ".ffn.in")), p + ".ffn.out");
    x = ad::LayerNormRows(ad::Add(x, f), P(p + ".ffn.norm.gamma"),
                          P(p + ".ffn.norm.beta"), eps);
  }
  return x;
}

std::vector<ad::Var> TransformerEncoder::Encode(ParamBinder& params,
                                                const NodeBatch& batch) const {
  CheckIds(batch, config_.vocab_size);
  std::vector<ad::Var> out;
  out.reserve(batch.size());
  for (int n = 0; n < batch.size(); ++n) {
    out.push_back(EncodeOne(params, batch.tokens[n], batch.segments[n]));
  }
  return out;
}

std::unique_ptr<EncoderBackend> MakeBackend(const EncoderConfig& config) {
  if (config.name == "tiny" || config.name == "pretrained-12x768") {
    return std::make_unique<TransformerEncoder>(config);
  }
  throw ConfigError("unknown encoder backend '" + config.name + "'");
}

}  // namespace factcheck
