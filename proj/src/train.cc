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

#include "factcheck/train.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "factcheck/error.h"
#include "factcheck/text.h"

namespace factcheck {

using nlohmann::json;

std::optional<LossMode> ParseLossMode(std::string_view name) {
  if (name == "joint") return LossMode::kJoint;
  if (name == "evi") return LossMode::kEvi;
  if (name == "lab") return LossMode::kLab;
  return std::nullopt;
}

std::string_view LossModeName(LossMode mode) {
  switch (mode) {
    case LossMode::kJoint:
      return "joint";
    case LossMode::kEvi:
      return "evi";
    case LossMode::kLab:
      return "lab";
  }
  return "";
}

std::optional<DatasetSetting> ParseDatasetSetting(std::string_view name) {
  if (name == "full") return DatasetSetting::kFull;
  if (name == "even") return DatasetSetting::kEven;
  if (name == "adversarial") return DatasetSetting::kAdversarial;
  return std::nullopt;
}

std::string_view DatasetSettingName(DatasetSetting setting) {
  switch (setting) {
    case DatasetSetting::kFull:
      return "full";
    case DatasetSetting::kEven:
      return "even";
    case DatasetSetting::kAdversarial:
      return "adversarial";
  }
  return "";
}

// ---- Losses ----

namespace {

bool UsesLabel(LossMode mode) { return mode != LossMode::kEvi; }
bool UsesEvidence(LossMode mode) { return mode != LossMode::kLab; }

void CheckEvidence(const std::vector<int>& gold, size_t num_nodes) {
  if (gold.empty()) {
    throw ValidationError("evidence loss needs at least one gold sentence");
  }
  for (int g : gold) {
    if (g < 0 || static_cast<size_t>(g) >= num_nodes) {
      throw ValidationError("gold evidence index " + std::to_string(g) +
                            " outside the instance");
    }
  }
}

}  // namespace

LossValue ComputeLoss(const LabelDist& label_dist,
                      const std::vector<double>& importance,
                      VeracityLabel gold_label,
                      const std::vector<int>& gold_evidence, LossMode mode) {
  const int g = LabelIndex(gold_label);
  if (g < 0 || g >= kNumLabels) throw ValidationError("gold label out of range");
  LossValue v;
  if (UsesLabel(mode)) v.label = -std::log(label_dist[g]);
  if (UsesEvidence(mode)) {
    CheckEvidence(gold_evidence, importance.size());
    for (int e : gold_evidence) v.evidence -= std::log(importance[e]);
    v.evidence /= static_cast<double>(gold_evidence.size());
  }
  v.total = v.label + v.evidence;
  return v;
}

LossVars ComputeLoss(const HeadOutputs& heads, VeracityLabel gold_label,
                     const std::vector<int>& gold_evidence, LossMode mode) {
  const int g = LabelIndex(gold_label);
  if (g < 0 || g >= kNumLabels) throw ValidationError("gold label out of range");
  std::vector<ad::Var> terms;
  LossVars out;
  if (UsesLabel(mode)) {
    ad::Var label = ad::Scale(ad::Log(ad::Pick(heads.label_dist, 0, g)), -1.0);
    out.value.label = label.value()(0, 0);
    terms.push_back(label);
  }
  if (UsesEvidence(mode)) {
    CheckEvidence(gold_evidence, heads.importance.cols());
    ad::Var sum{};
    for (size_t i = 0; i < gold_evidence.size(); ++i) {
      ad::Var term = ad::Pick(heads.log_importance, 0, gold_evidence[i]);
      sum = i == 0 ? term : ad::Add(sum, term);
    }
    ad::Var evidence = ad::Scale(sum, -1.0 / gold_evidence.size());
    out.value.evidence = evidence.value()(0, 0);
    terms.push_back(evidence);
  }
  out.total = terms.size() == 1 ? terms[0] : ad::Add(terms[0], terms[1]);
  out.value.total = out.total.value()(0, 0);
  return out;
}

// ---- Configuration ----

std::vector<Stage> ParseStages(std::string_view text) {
  std::vector<Stage> stages;
  std::stringstream in{std::string(text)};
  std::string item;
  while (std::getline(in, item, ',')) {
    item = Trim(item);
    if (item.empty()) continue;
    const size_t colon = item.find(':');
    if (colon == std::string::npos) {
      throw ConfigError("stage '" + item + "' must be dataset:epochs");
    }
    Stage s;
    s.dataset = Trim(item.substr(0, colon));
    try {
      size_t used = 0;
      const std::string count = Trim(item.substr(colon + 1));
      s.epochs = std::stoi(count, &used);
      if (used != count.size()) throw std::invalid_argument(count);
    } catch (const std::logic_error&) {
      throw ConfigError("stage '" + item + "' has an invalid epoch count");
    }
    if (s.dataset.empty()) throw ConfigError("stage '" + item + "' has no dataset");
    stages.push_back(std::move(s));
  }
  return stages;
}

std::string FormatStages(const std::vector<Stage>& stages) {
  std::string out;
  for (const Stage& s : stages) {
    if (!out.empty()) out += ",";
    out += s.dataset + ":" + std::to_string(s.epochs);
  }
  return out;
}

namespace {

const std::vector<std::pair<std::string, std::vector<Stage>>>& Presets() {
  static const auto* presets =
      new std::vector<std::pair<std::string, std::vector<Stage>>>{
          {"liar_only", {{"liar_plus", 4}}},
          {"politihop_only", {{"politihop", 8}}},
          {"liar_then_politihop", {{"liar_plus", 4}, {"politihop", 4}}},
          {"fever_liar_politihop",
           {{"fever", 2}, {"liar_plus", 4}, {"politihop", 4}}},
      };
  return *presets;
}

}  // namespace

std::optional<std::vector<Stage>> PresetStages(std::string_view name) {
  const std::string key =
      name == "fever+liar+politihop" ? "fever_liar_politihop" : std::string(name);
  for (const auto& [n, stages] : Presets()) {
    if (n == key) return stages;
  }
  return std::nullopt;
}

std::vector<std::string> PresetNames() {
  std::vector<std::string> names;
  for (const auto& [n, stages] : Presets()) names.push_back(n);
  return names;
}

std::vector<std::string> PresetDeviations(const ExperimentConfig& config) {
  for (const auto& [n, stages] : Presets()) {
    if (stages == config.stages) return {};
  }
  // Closest preset: same dataset sequence if any, else the first one with
  // the most shared datasets.
  const std::pair<std::string, std::vector<Stage>>* best = nullptr;
  int best_score = -1;
  for (const auto& preset : Presets()) {
    int score = 0;
    const auto& stages = preset.second;
    if (stages.size() == config.stages.size()) {
      bool same = true;
      for (size_t i = 0; i < stages.size(); ++i) {
        same = same && stages[i].dataset == config.stages[i].dataset;
      }
      if (same) score += 100;
    }
    for (const Stage& s : config.stages) {
      for (const Stage& p : stages) score += s.dataset == p.dataset;
    }
    if (score > best_score) {
      best_score = score;
      best = &preset;
    }
  }
  std::vector<std::string> out;
  out.push_back("stages " + FormatStages(config.stages) +
                " match no named preset; closest is " + best->first + " (" +
                FormatStages(best->second) + ")");
  const auto& stages = best->second;
  for (size_t i = 0; i < std::min(stages.size(), config.stages.size()); ++i) {
    if (stages[i].dataset == config.stages[i].dataset &&
        stages[i].epochs != config.stages[i].epochs) {
      out.push_back("stage " + std::to_string(i + 1) + " (" +
                    stages[i].dataset + ") runs " +
                    std::to_string(config.stages[i].epochs) +
                    " epochs instead of " + std::to_string(stages[i].epochs));
    }
  }
  return out;
}

namespace {

int IntValue(const KeyValueConfig& kv, const std::string& key, int fallback) {
  auto v = kv.Get(key);
  if (!v) return fallback;
  try {
    size_t used = 0;
    const int out = std::stoi(*v, &used);
    if (used != v->size()) throw std::invalid_argument(*v);
    return out;
  } catch (const std::logic_error&) {
    throw ConfigError("config key '" + key + "' must be an integer, got '" +
                      *v + "'");
  }
}

bool BoolValue(const KeyValueConfig& kv, const std::string& key,
               bool fallback) {
  auto v = kv.Get(key);
  if (!v) return fallback;
  const std::string s = ToLower(*v);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("config key '" + key + "' must be a boolean, got '" + *v +
                    "'");
}

}  // namespace

ExperimentConfig ExperimentConfig::FromKeyValue(const KeyValueConfig& kv) {
  static const std::set<std::string> kKnown = {
      "schema_version", "preset",       "stages",         "loss",
      "hops",           "hop_hidden",   "hop_heads",      "topk",
      "seed",           "lr",           "backend",        "sentence_ids",
      "setting",        "encoder_layers", "encoder_hidden", "encoder_heads",
      "encoder_ffn",    "max_node_len", "dev_dataset"};
  for (const auto& [key, value] : kv.entries()) {
    if (!kKnown.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  const int version = IntValue(kv, "schema_version", kConfigSchemaVersion);
  if (version != kConfigSchemaVersion) {
    throw ConfigError("unsupported config schema_version " +
                      std::to_string(version));
  }
  ExperimentConfig c;
  if (auto preset = kv.Get("preset")) {
    auto stages = PresetStages(*preset);
    if (!stages) throw ConfigError("unknown preset '" + *preset + "'");
    c.preset = *preset == "fever+liar+politihop" ? "fever_liar_politihop"
                                                 : *preset;
    c.stages = *stages;
  }
  if (auto stages = kv.Get("stages")) {
    c.stages = ParseStages(*stages);
    if (!c.preset.empty() && PresetStages(c.preset) != c.stages) c.preset.clear();
  }
  if (auto loss = kv.Get("loss")) {
    auto mode = ParseLossMode(*loss);
    if (!mode) throw ConfigError("unknown loss mode '" + *loss + "'");
    c.loss = *mode;
  }
  c.hops = IntValue(kv, "hops", c.hops);
  c.hop_hidden = IntValue(kv, "hop_hidden", c.hop_hidden);
  c.hop_heads = IntValue(kv, "hop_heads", c.hop_heads);
  c.top_k = IntValue(kv, "topk", c.top_k);
  if (auto seed = kv.Get("seed")) {
    try {
      size_t used = 0;
      c.seed = std::stoull(*seed, &used);
      if (used != seed->size()) throw std::invalid_argument(*seed);
    } catch (const std::logic_error&) {
      throw ConfigError("config key 'seed' must be a non-negative integer");
    }
  }
  if (auto lr = kv.Get("lr")) {
    try {
      size_t used = 0;
      c.learning_rate = std::stod(*lr, &used);
      if (used != lr->size()) throw std::invalid_argument(*lr);
    } catch (const std::logic_error&) {
      throw ConfigError("config key 'lr' must be a number");
    }
  }
  c.backend = kv.GetOr("backend", c.backend);
  c.sentence_ids = BoolValue(kv, "sentence_ids", c.sentence_ids);
  if (auto setting = kv.Get("setting")) {
    auto s = ParseDatasetSetting(*setting);
    if (!s) throw ConfigError("unknown dataset setting '" + *setting + "'");
    c.setting = *s;
  }
  c.encoder_layers = IntValue(kv, "encoder_layers", c.encoder_layers);
  c.encoder_hidden = IntValue(kv, "encoder_hidden", c.encoder_hidden);
  c.encoder_heads = IntValue(kv, "encoder_heads", c.encoder_heads);
  c.encoder_ffn = IntValue(kv, "encoder_ffn", c.encoder_ffn);
  c.max_node_len = IntValue(kv, "max_node_len", c.max_node_len);
  c.dev_dataset = kv.GetOr("dev_dataset", "");
  return c;
}

KeyValueConfig ExperimentConfig::ToKeyValue() const {
  KeyValueConfig kv;
  kv.Set("schema_version", std::to_string(kConfigSchemaVersion));
  if (!preset.empty()) kv.Set("preset", preset);
  kv.Set("stages", FormatStages(stages));
  kv.Set("loss", std::string(LossModeName(loss)));
  kv.Set("hops", std::to_string(hops));
  kv.Set("hop_hidden", std::to_string(hop_hidden));
  kv.Set("hop_heads", std::to_string(hop_heads));
  kv.Set("topk", std::to_string(top_k));
  kv.Set("seed", std::to_string(seed));
  if (learning_rate) {
    std::ostringstream lr;
    lr.precision(17);
    lr << *learning_rate;
    kv.Set("lr", lr.str());
  }
  kv.Set("backend", backend);
  kv.Set("sentence_ids", sentence_ids ? "true" : "false");
  kv.Set("setting", std::string(DatasetSettingName(setting)));
  kv.Set("encoder_layers", std::to_string(encoder_layers));
  kv.Set("encoder_hidden", std::to_string(encoder_hidden));
  kv.Set("encoder_heads", std::to_string(encoder_heads));
  kv.Set("encoder_ffn", std::to_string(encoder_ffn));
  kv.Set("max_node_len", std::to_string(max_node_len));
  if (!dev_dataset.empty()) kv.Set("dev_dataset", dev_dataset);
  return kv;
}

void ExperimentConfig::Validate() const {
  if (stages.empty()) throw ConfigError("config has no training stages");
  for (const Stage& s : stages) {
    if (s.epochs < 1) {
      throw ConfigError("stage " + s.dataset + " must run at least one epoch");
    }
  }
  if (backend != "tiny" && backend != "pretrained-12x768") {
    throw ConfigError("unknown backend '" + backend + "'");
  }
  if (learning_rate && !(*learning_rate > 0.0)) {
    throw ConfigError("learning rate must be positive");
  }
  HopStackConfig{hops, hop_hidden, hop_heads}.Validate();
  if (top_k < 1) throw ConfigError("topk must be at least 1");
  if (max_node_len < kMinNodeLen) {
    throw ConfigError("max_node_len must be at least " +
                      std::to_string(kMinNodeLen));
  }
}

double ExperimentConfig::EffectiveLearningRate() const {
  if (learning_rate) return *learning_rate;
  return backend == "tiny" ? 1e-3 : 1e-5;
}

const std::string& ExperimentConfig::SelectionDataset() const {
  if (!dev_dataset.empty()) return dev_dataset;
  if (stages.empty()) throw ConfigError("config has no training stages");
  return stages.back().dataset;
}

std::string ExperimentConfig::Hash() const {
  return Fingerprint(ToKeyValue().Serialize());
}

ModelConfig MakeModelConfig(const ExperimentConfig& config, int vocab_size) {
  ModelConfig m;
  if (config.backend == "tiny") {
    m.encoder = TinyEncoderConfig(vocab_size, config.encoder_layers,
                                  config.encoder_hidden, config.encoder_heads,
                                  config.encoder_ffn);
  } else {
    m.encoder = PretrainedEncoderConfig(vocab_size);
  }
  m.hops = {config.hops, config.hop_hidden, config.hop_heads};
  m.max_node_len = config.max_node_len;
  m.sentence_ids = config.sentence_ids;
  m.top_k = config.top_k;
  return m;
}

json ToJson(const EpochRecord& r) {
  return json{{"stage", r.stage},
              {"dataset", r.dataset},
              {"epoch", r.epoch},
              {"mean_loss", r.mean_loss},
              {"mean_label_loss", r.mean_label_loss},
              {"mean_evidence_loss", r.mean_evidence_loss},
              {"dev", ToJson(r.dev)},
              {"selection_metric", r.selection_metric},
              {"selected", r.selected}};
}

// ---- Optimization ----

void Adam::Step(ParameterStore& params) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, t_);
  const double c2 = 1.0 - std::pow(beta2_, t_);
  for (Parameter* p : params.All()) {
    if (p->grad.size() == 0) continue;
    auto [it, inserted] = moments_.try_emplace(p->name);
    auto& [m, v] = it->second;
    if (inserted) {
      m.setZero(p->value.rows(), p->value.cols());
      v.setZero(p->value.rows(), p->value.cols());
    }
    m = beta1_ * m + (1.0 - beta1_) * p->grad;
    v = beta2_ * v + (1.0 - beta2_) * p->grad.cwiseProduct(p->grad);
    p->value.array() -=
        lr_ * (m.array() / c1) / ((v.array() / c2).sqrt() + eps_);
  }
}

LossValue TrainStep(Verifier& model, const Example& example, LossMode mode,
                    Adam& optimizer) {
  // Instances without chains can only supervise the label.
  const LossMode effective = example.chains.empty() ? LossMode::kLab : mode;
  model.params().ZeroGrad();
  ad::Tape tape;
  const bool trainable = true;
  GraphOutputs g = model.ForwardGraph(tape, model.Nodes(example), trainable);
  LossVars loss = ComputeLoss(g.heads, example.label,
                              ChainUnion(example.chains), effective);
  tape.Backward(loss.total);
  if (!model.config().encoder.trainable) {
    for (Parameter* p : model.params().All()) {
      if (p->name.rfind("encoder.", 0) == 0) p->grad.resize(0, 0);
    }
  }
  optimizer.Step(model.params());
  return loss.value;
}

MetricsReport EvaluateModel(const Verifier& model,
                            const std::vector<Example>& examples) {
  std::vector<Prediction> preds;
  preds.reserve(examples.size());
  for (const Example& e : examples) preds.push_back(model.Predict(e));
  return Evaluate(preds, examples, model.config().top_k);
}

// ---- Regime ----

std::filesystem::path PretrainedDir() {
  return AssetDir() / "pretrained-12x768";
}

Tokenizer MakeTokenizer(const ExperimentConfig& config,
                        const DatasetMap& datasets) {
  if (config.backend != "tiny") {
    const auto vocab = PretrainedDir() / "vocab.txt";
    if (!std::filesystem::exists(vocab)) {
      throw ConfigError("pretrained backend needs " + vocab.string());
    }
    return Tokenizer::Load(vocab);
  }
  std::vector<std::string> texts;
  std::set<std::string> seen;
  for (const Stage& s : config.stages) {
    if (!seen.insert(s.dataset).second) continue;
    auto it = datasets.find(s.dataset);
    if (it == datasets.end()) continue;
    for (const Example& e : it->second.train) {
      texts.push_back(e.claim);
      texts.push_back(e.speaker);
      texts.insert(texts.end(), e.sentences.begin(), e.sentences.end());
    }
  }
  return Tokenizer::Build(texts);
}

namespace {

double SelectionMetric(LossMode mode, const MetricsReport& dev) {
  return mode == LossMode::kEvi ? dev.evidence_f1 : dev.label_macro_f1;
}

}  // namespace

RegimeResult RunRegime(const ExperimentConfig& config,
                       const DatasetMap& datasets,
                       const EpochCallback& on_epoch) {
  config.Validate();
  for (const Stage& s : config.stages) {
    auto it = datasets.find(s.dataset);
    if (it == datasets.end()) {
      throw ConfigError("dataset '" + s.dataset + "' is not loaded");
    }
    if (it->second.train.empty()) {
      throw ConfigError("dataset '" + s.dataset + "' has no training instances");
    }
  }
  const std::string& dev_name = config.SelectionDataset();
  auto dev_it = datasets.find(dev_name);
  if (dev_it == datasets.end() || dev_it->second.dev.empty()) {
    throw ConfigError("dataset '" + dev_name + "' has no dev split for model "
                      "selection");
  }
  const std::vector<Example>& dev = dev_it->second.dev;

  Tokenizer tokenizer = MakeTokenizer(config, datasets);
  const ModelConfig model_config = MakeModelConfig(config, tokenizer.size());
  Verifier model(model_config, tokenizer, config.seed);
  if (config.backend != "tiny") {
    const auto blob = PretrainedDir() / "params.bin";
    if (!std::filesystem::exists(blob)) {
      throw ConfigError("pretrained backend needs " + blob.string());
    }
    model.params().CopyValuesFrom(ParameterStore::Load(blob));
  }

  RegimeResult result;
  double best_metric = -1.0;
  for (size_t s = 0; s < config.stages.size(); ++s) {
    const Stage& stage = config.stages[s];
    const std::vector<Example>& train = datasets.at(stage.dataset).train;
    Adam optimizer(config.EffectiveLearningRate());
    for (int epoch = 1; epoch <= stage.epochs; ++epoch) {
      std::vector<int> order(train.size());
      std::iota(order.begin(), order.end(), 0);
      Rng rng(config.seed, (s << 16) + static_cast<uint64_t>(epoch));
      rng.Shuffle(order);
      EpochRecord record;
      record.stage = static_cast<int>(s);
      record.dataset = stage.dataset;
      record.epoch = epoch;
      for (int i : order) {
        const LossValue loss = TrainStep(model, train[i], config.loss, optimizer);
        record.mean_loss += loss.total;
        record.mean_label_loss += loss.label;
        record.mean_evidence_loss += loss.evidence;
      }
      const double n = static_cast<double>(train.size());
      record.mean_loss /= n;
      record.mean_label_loss /= n;
      record.mean_evidence_loss /= n;
      record.dev = EvaluateModel(model, dev);
      record.selection_metric = SelectionMetric(config.loss, record.dev);
      if (record.selection_metric > best_metric) {
        best_metric = record.selection_metric;
        record.selected = true;
        result.best = std::make_unique<Verifier>(model_config, tokenizer,
                                                 model.params());
        result.best_epoch_index = static_cast<int>(result.history.size());
      }
      result.history.push_back(record);
      if (on_epoch && !on_epoch(record)) return result;
    }
  }
  return result;
}

// ---- Checkpoints ----

void SaveCheckpoint(const std::filesystem::path& dir,
                    const ExperimentConfig& config, const Verifier& model) {
  std::filesystem::create_directories(dir);
  const std::string vocab = model.tokenizer().Serialize();
  const std::string params = model.params().Serialize();
  WriteFile(dir / "vocab.txt", vocab);
  WriteFile(dir / "params.bin", params);
  json manifest = {{"format", std::string(kCheckpointFormat)},
                   {"version", kCheckpointVersion},
                   {"config", config.ToKeyValue().entries()},
                   {"seed", config.seed},
                   {"vocab_fingerprint", model.tokenizer().Fingerprint()},
                   {"params_fingerprint", Fingerprint(params)}};
  WriteFile(dir / "manifest.json", manifest.dump(2) + "\n");
}

Checkpoint LoadCheckpoint(const std::filesystem::path& dir) {
  json manifest;
  try {
    manifest = json::parse(ReadFile(dir / "manifest.json"));
  } catch (const json::exception& e) {
    throw ParseError("checkpoint manifest: " + std::string(e.what()));
  }
  if (manifest.value("format", "") != kCheckpointFormat ||
      manifest.value("version", 0) != kCheckpointVersion) {
    throw ConfigError(dir.string() + " is not a version " +
                      std::to_string(kCheckpointVersion) + " checkpoint");
  }
  KeyValueConfig kv;
  for (const auto& [key, value] : manifest.at("config").items()) {
    kv.Set(key, value.get<std::string>());
  }
  Checkpoint out;
  out.config = ExperimentConfig::FromKeyValue(kv);
  Tokenizer tokenizer = Tokenizer::Load(dir / "vocab.txt");
  if (tokenizer.Fingerprint() != manifest.value("vocab_fingerprint", "")) {
    throw ValidationError("checkpoint vocabulary does not match its manifest");
  }
  const std::string params = ReadFile(dir / "params.bin");
  if (Fingerprint(params) != manifest.value("params_fingerprint", "")) {
    throw ValidationError("checkpoint parameters do not match their manifest");
  }
  const ModelConfig model_config =
      MakeModelConfig(out.config, tokenizer.size());
  out.model = std::make_unique<Verifier>(model_config, std::move(tokenizer),
                                         ParameterStore::Deserialize(params));
  return out;
}

}  // namespace factcheck
