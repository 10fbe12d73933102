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

#ifndef FACTCHECK_TRAIN_H_
#define FACTCHECK_TRAIN_H_

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "factcheck/corpus.h"
#include "factcheck/evaluate.h"
#include "factcheck/import.h"
#include "factcheck/reasoner.h"
#include "json.hpp"

namespace factcheck {

enum class LossMode { kJoint, kEvi, kLab };

std::optional<LossMode> ParseLossMode(std::string_view name);
std::string_view LossModeName(LossMode mode);

enum class DatasetSetting { kFull, kEven, kAdversarial };

std::optional<DatasetSetting> ParseDatasetSetting(std::string_view name);
std::string_view DatasetSettingName(DatasetSetting setting);

// ---- Losses ----

struct LossValue {
  double label = 0.0;
  double evidence = 0.0;
  double total = 0.0;
};

// label    = -log label_dist[gold]
// evidence = -(1/|G|) sum_{g in G} log importance[g]
// The unused term is reported as 0. Throws ValidationError when evidence is
// needed and gold_evidence is empty or out of range.
LossValue ComputeLoss(const LabelDist& label_dist,
                      const std::vector<double>& importance,
                      VeracityLabel gold_label,
                      const std::vector<int>& gold_evidence, LossMode mode);

struct LossVars {
  ad::Var total;
  LossValue value;
};

LossVars ComputeLoss(const HeadOutputs& heads, VeracityLabel gold_label,
                     const std::vector<int>& gold_evidence, LossMode mode);

// ---- Configuration ----

struct Stage {
  std::string dataset;
  int epochs = 1;

  bool operator==(const Stage&) const = default;
};

// "fever:2,liar_plus:4"
std::vector<Stage> ParseStages(std::string_view text);
std::string FormatStages(const std::vector<Stage>& stages);

// liar_only, politihop_only, liar_then_politihop, fever_liar_politihop
// (also spelled fever+liar+politihop).
std::optional<std::vector<Stage>> PresetStages(std::string_view name);
std::vector<std::string> PresetNames();

inline constexpr int kConfigSchemaVersion = 1;

struct ExperimentConfig {
  std::string preset;  // empty when stages were given directly
  std::vector<Stage> stages;
  LossMode loss = LossMode::kJoint;
  int hops = 3;
  int hop_hidden = 64;
  int hop_heads = 1;
  int top_k = kDefaultTopK;
  uint64_t seed = 42;
  std::optional<double> learning_rate;  // backend default when unset
  std::string backend = "tiny";
  bool sentence_ids = false;
  DatasetSetting setting = DatasetSetting::kFull;
  int encoder_layers = 2;
  int encoder_hidden = 32;
  int encoder_heads = 2;
  int encoder_ffn = 64;
  int max_node_len = kDefaultMaxNodeLen;
  // Dataset whose dev split drives model selection; last stage's if empty.
  std::string dev_dataset;

  // Keys: schema_version, preset, stages, loss, hops, hop_hidden, hop_heads,
  // topk, seed, lr, backend, sentence_ids, setting, encoder_layers,
  // encoder_hidden, encoder_heads, encoder_ffn, max_node_len, dev_dataset.
  static ExperimentConfig FromKeyValue(const KeyValueConfig& config);
  KeyValueConfig ToKeyValue() const;

  void Validate() const;
  double EffectiveLearningRate() const;
  const std::string& SelectionDataset() const;
  std::string Hash() const;
};

// Empty when the stages equal a named preset; otherwise one message per
// difference from the closest preset.
std::vector<std::string> PresetDeviations(const ExperimentConfig& config);

// Model shape implied by the config for a given vocabulary.
ModelConfig MakeModelConfig(const ExperimentConfig& config, int vocab_size);

// ---- Regime ----

struct DatasetSplits {
  std::vector<Example> train;
  std::vector<Example> dev;
};

using DatasetMap = std::map<std::string, DatasetSplits>;

struct EpochRecord {
  int stage = 0;
  std::string dataset;
  int epoch = 0;  // 1-based within the stage
  double mean_loss = 0.0;
  double mean_label_loss = 0.0;
  double mean_evidence_loss = 0.0;
  MetricsReport dev;
  double selection_metric = 0.0;
  bool selected = false;
};

nlohmann::json ToJson(const EpochRecord& record);

// Adam with bias correction.
class Adam {
 public:
  explicit Adam(double lr, double beta1 = 0.9, double beta2 = 0.999,
                double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void Step(ParameterStore& params);
  int steps() const { return t_; }

 private:
  double lr_, beta1_, beta2_, eps_;
  int t_ = 0;
  std::map<std::string, std::pair<Eigen::MatrixXd, Eigen::MatrixXd>> moments_;
};

// One optimization step on one example; returns its loss.
LossValue TrainStep(Verifier& model, const Example& example, LossMode mode,
                    Adam& optimizer);

MetricsReport EvaluateModel(const Verifier& model,
                            const std::vector<Example>& examples);

// Called after every epoch; returning false stops the regime.
using EpochCallback = std::function<bool(const EpochRecord&)>;

struct RegimeResult {
  std::unique_ptr<Verifier> best;
  std::vector<EpochRecord> history;
  int best_epoch_index = -1;  // into history
};

// Tokenizer for the configured backend: built from the training texts for
// "tiny", loaded from the asset directory for the pretrained backend.
Tokenizer MakeTokenizer(const ExperimentConfig& config,
                        const DatasetMap& datasets);

// Throws before training if a stage dataset or the selection dev split is
// missing or empty.
RegimeResult RunRegime(const ExperimentConfig& config,
                       const DatasetMap& datasets,
                       const EpochCallback& on_epoch = {});

// ---- Checkpoints ----

inline constexpr std::string_view kCheckpointFormat = "factcheck-checkpoint";
inline constexpr int kCheckpointVersion = 1;

// Writes manifest.json, vocab.txt and params.bin into dir.
void SaveCheckpoint(const std::filesystem::path& dir,
                    const ExperimentConfig& config, const Verifier& model);

struct Checkpoint {
  ExperimentConfig config;
  std::unique_ptr<Verifier> model;
};

Checkpoint LoadCheckpoint(const std::filesystem::path& dir);

// Parameters for the pretrained backend under AssetDir().
std::filesystem::path PretrainedDir();

}  // namespace factcheck

#endif  // FACTCHECK_TRAIN_H_
