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

#include "factcheck/cli.h"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "factcheck/baselines.h"
#include "factcheck/corpus.h"
#include "factcheck/error.h"
#include "factcheck/evaluate.h"
#include "factcheck/import.h"
#include "factcheck/perturb.h"
#include "factcheck/prediction.h"
#include "factcheck/text.h"
#include "factcheck/train.h"

#ifndef FACTCHECK_VERSION
#define FACTCHECK_VERSION "0.0.0"
#endif

namespace factcheck {

using nlohmann::json;
namespace fs = std::filesystem;

std::string ToolVersion() { return FACTCHECK_VERSION; }

namespace {

std::string NowUtc() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

json ToJson(const RunManifest& m) {
  return json{{"command", m.command},
              {"arguments", m.arguments},
              {"config_hash", m.config_hash},
              {"seed", m.seed},
              {"dataset_fingerprints", m.dataset_fingerprints},
              {"preset_deviations", m.preset_deviations},
              {"tool_version", m.tool_version},
              {"started_at", m.started_at},
              {"finished_at", m.finished_at},
              {"extra", m.extra}};
}

void WriteManifest(const fs::path& out_dir, const RunManifest& manifest) {
  WriteFile(out_dir / "manifest.json", ToJson(manifest).dump(2) + "\n");
}

namespace {

enum class Level { kArticle, kChain };

struct Flags {
  std::string config;
  uint64_t seed = 42;
  std::string out;
  std::vector<std::string> datasets;
  std::string setting = "full";
  int hops = -1;
  int topk = -1;
  std::string loss;
  std::string backend;
  bool sentence_ids = false;
  std::string pool;

  std::string split;
  std::string level = "article";
  std::string source;
  std::string input;
  std::string method = "random";
  std::string train_split = "train";
  std::string checkpoint;
  std::string predictions;
  std::string preset;
  std::string stages;
  double lr = 0.0;
  int dev_count = -1;
  int k_min = 1;
  int k_max = 10;
  bool with_attention = false;
  std::string scores_a;
  std::string scores_b;
  std::string annotations;
  std::string mode = "item";
};

// Per-command context shared by the handlers.
struct Run {
  std::string command;
  const std::vector<std::string>* args = nullptr;
  Flags flags;
  RunManifest manifest;
  std::ostream* out = nullptr;

  fs::path OutDir() const {
    if (flags.out.empty()) throw ConfigError(command + " needs --out");
    return flags.out;
  }

  void Track(const fs::path& path) {
    manifest.dataset_fingerprints[path.string()] = FileFingerprint(path);
  }
};

std::optional<Split> SplitFilter(const std::string& name) {
  if (name.empty() || name == "all") return std::nullopt;
  auto s = ParseSplit(name);
  if (!s) throw ConfigError("unknown split '" + name + "'");
  return s;
}

std::vector<ArticleInstance> FilterSplit(
    const std::vector<ArticleInstance>& articles, std::optional<Split> split) {
  if (!split) return articles;
  std::vector<ArticleInstance> out;
  for (const auto& a : articles) {
    if (a.split == *split) out.push_back(a);
  }
  return out;
}

Level ParseLevel(const std::string& name) {
  if (name == "article") return Level::kArticle;
  if (name == "chain") return Level::kChain;
  throw ConfigError("unknown level '" + name + "'");
}

DatasetSetting SettingOf(const Flags& f) {
  auto s = ParseDatasetSetting(f.setting);
  if (!s) throw ConfigError("unknown setting '" + f.setting + "'");
  return *s;
}

uint64_t InstanceSeed(uint64_t seed, size_t index) {
  return Rng(seed, index).Next();
}

const std::string& SingleDataset(const Run& run) {
  if (run.flags.datasets.size() != 1) {
    throw ConfigError(run.command + " needs exactly one --dataset");
  }
  return run.flags.datasets[0];
}

std::vector<ArticleInstance> LoadTracked(Run& run, const fs::path& path) {
  auto articles = LoadCanonical(path);
  run.Track(path);
  return articles;
}

ReplacementPool LoadPool(Run& run,
                         const std::vector<ArticleInstance>& fallback) {
  if (run.flags.pool.empty()) return ReplacementPool::FromDataset(fallback);
  run.Track(run.flags.pool);
  return ReplacementPool::Load(run.flags.pool);
}

// Applies the dataset setting and returns model-facing examples.
std::vector<Example> PrepareExamples(const std::vector<ArticleInstance>& articles,
                                     Level level, DatasetSetting setting,
                                     uint64_t seed, const ReplacementPool* pool,
                                     std::vector<FallbackRecord>* fallbacks) {
  std::vector<Example> out;
  if (level == Level::kChain) {
    const auto chains = SplitChains(articles);
    for (size_t i = 0; i < chains.size(); ++i) {
      if (setting == DatasetSetting::kFull) {
        out.push_back(ToExample(chains[i]));
        continue;
      }
      ChainInstance even = BuildEvenSplit(chains[i], InstanceSeed(seed, i));
      if (setting == DatasetSetting::kAdversarial) {
        auto adv = BuildAdversarial(even, *pool, InstanceSeed(seed + 1, i));
        if (fallbacks) {
          fallbacks->insert(fallbacks->end(), adv.fallbacks.begin(),
                            adv.fallbacks.end());
        }
        even = std::move(adv.instance);
      }
      out.push_back(ToExample(even));
    }
    return out;
  }
  for (size_t i = 0; i < articles.size(); ++i) {
    if (setting == DatasetSetting::kFull) {
      out.push_back(ToExample(articles[i]));
      continue;
    }
    PerturbedArticle even = BuildEvenSplit(articles[i], InstanceSeed(seed, i));
    if (setting == DatasetSetting::kAdversarial) {
      auto adv = BuildAdversarial(even, *pool, InstanceSeed(seed + 1, i));
      if (fallbacks) {
        fallbacks->insert(fallbacks->end(), adv.fallbacks.begin(),
                          adv.fallbacks.end());
      }
      even = std::move(adv.instance);
    }
    out.push_back(ToExample(even.article));
  }
  return out;
}

std::vector<Example> PrepareFromFlags(Run& run,
                                      const std::vector<ArticleInstance>& all,
                                      const std::vector<ArticleInstance>& part,
                                      std::vector<FallbackRecord>* fallbacks) {
  const DatasetSetting setting = SettingOf(run.flags);
  ReplacementPool pool;
  if (setting == DatasetSetting::kAdversarial) pool = LoadPool(run, all);
  return PrepareExamples(part, ParseLevel(run.flags.level), setting,
                         run.flags.seed, &pool, fallbacks);
}

void WriteJson(const fs::path& path, const json& value) {
  WriteFile(path, value.dump(2) + "\n");
}

std::string JsonLines(const std::vector<json>& records) {
  std::string out;
  for (const json& r : records) out += r.dump() + "\n";
  return out;
}

// ---- Commands ----

void CmdImport(Run& run) {
  const Flags& f = run.flags;
  auto source = ParseSourceFormat(f.source);
  if (!source) throw ConfigError("unknown source '" + f.source + "'");
  if (f.input.empty()) throw ConfigError("import needs --input");
  AdapterConfig adapter = AdapterConfig::Defaults(*source);
  if (!f.config.empty()) {
    adapter = AdapterConfig::FromConfig(*source, KeyValueConfig::Load(f.config));
  }
  run.Track(f.input);
  ImportResult result = ImportDataset(*source, f.input, adapter);
  const fs::path out = run.OutDir();
  WriteCanonical(out / "dataset.jsonl", result.dataset);
  std::string rejected;
  for (const auto& id : result.rejected_ids) rejected += id + "\n";
  WriteFile(out / "rejected.txt", rejected);
  json labels = json::object();
  for (const auto& [from, to] : adapter.label_map) {
    labels[from] = std::string(LabelName(to));
  }
  run.manifest.extra = {{"source", f.source},
                        {"label_map", labels},
                        {"imported", result.dataset.size()},
                        {"rejected", result.rejected_ids.size()}};
  *run.out << "imported " << result.dataset.size() << " records, rejected "
           << result.rejected_ids.size() << "\n";
}

int CmdValidate(Run& run) {
  const fs::path path = SingleDataset(run);
  run.Track(path);
  // Violations are reported rather than thrown, so parse leniently.
  std::vector<ArticleInstance> articles;
  std::vector<Violation> violations;
  std::istringstream in(ReadFile(path));
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    try {
      articles.push_back(ArticleFromJson(json::parse(line)));
    } catch (const std::exception& e) {
      violations.push_back({"line " + std::to_string(line_no), "parse",
                            e.what()});
    }
  }
  for (auto& v : ValidateDataset(articles)) violations.push_back(std::move(v));
  json report = json::array();
  for (const Violation& v : violations) {
    report.push_back(
        {{"instance_id", v.instance_id}, {"rule", v.rule}, {"detail", v.detail}});
    *run.out << FormatViolation(v) << "\n";
  }
  WriteJson(run.OutDir() / "violations.json", report);
  run.manifest.extra = {{"violations", violations.size()}};
  return violations.empty() ? kExitOk : kExitFailure;
}

void CmdStats(Run& run) {
  const auto all = LoadTracked(run, SingleDataset(run));
  const auto part = FilterSplit(all, SplitFilter(run.flags.split));
  const StatsReport report = ComputeStats(part);
  const json j = ToJson(report);
  WriteJson(run.OutDir() / "stats.json", j);
  *run.out << j.dump(2) << "\n";
}

void CmdSplitChains(Run& run) {
  const auto all = LoadTracked(run, SingleDataset(run));
  const auto part = FilterSplit(all, SplitFilter(run.flags.split));
  auto chains = SplitChains(part);
  const fs::path out = run.OutDir();
  json summary = {{"chain_instances", chains.size()}};
  if (run.flags.dev_count > 0) {
    TrainDevSplit split = MakeDevSplit(chains, run.flags.dev_count,
                                       run.flags.seed);
    WriteChainInstances(out / "train.jsonl", split.train);
    WriteChainInstances(out / "dev.jsonl", split.dev);
    summary["train"] = split.train.size();
    summary["dev"] = split.dev.size();
  } else {
    WriteChainInstances(out / "chains.jsonl", chains);
  }
  run.manifest.extra = summary;
  *run.out << summary.dump() << "\n";
}

void CmdPerturb(Run& run, bool adversarial) {
  const auto all = LoadTracked(run, SingleDataset(run));
  const auto part = FilterSplit(all, SplitFilter(run.flags.split));
  const Level level = ParseLevel(run.flags.level);
  ReplacementPool pool;
  if (adversarial) pool = LoadPool(run, all);
  std::vector<json> records;
  std::vector<FallbackRecord> fallbacks;
  auto collect = [&](const std::vector<FallbackRecord>& more) {
    fallbacks.insert(fallbacks.end(), more.begin(), more.end());
  };
  const uint64_t seed = run.flags.seed;
  if (level == Level::kChain) {
    const auto chains = SplitChains(part);
    for (size_t i = 0; i < chains.size(); ++i) {
      ChainInstance even = BuildEvenSplit(chains[i], InstanceSeed(seed, i));
      if (adversarial) {
        auto adv = BuildAdversarial(even, pool, InstanceSeed(seed + 1, i));
        collect(adv.fallbacks);
        even = std::move(adv.instance);
      }
      records.push_back(ToJson(even));
    }
  } else {
    for (size_t i = 0; i < part.size(); ++i) {
      PerturbedArticle even = BuildEvenSplit(part[i], InstanceSeed(seed, i));
      if (adversarial) {
        auto adv = BuildAdversarial(even, pool, InstanceSeed(seed + 1, i));
        collect(adv.fallbacks);
        even = std::move(adv.instance);
      }
      records.push_back(ToJson(even));
    }
  }
  const fs::path out = run.OutDir();
  WriteFile(out / "instances.jsonl", JsonLines(records));
  if (adversarial) {
    std::string log;
    for (const auto& fb : fallbacks) log += FormatFallback(fb) + "\n";
    WriteFile(out / "fallbacks.txt", log);
  }
  run.manifest.extra = {{"instances", records.size()},
                        {"fallbacks", fallbacks.size()},
                        {"level", run.flags.level}};
  *run.out << "wrote " << records.size() << " instances";
  if (adversarial) *run.out << ", " << fallbacks.size() << " fallbacks";
  *run.out << "\n";
}

void WriteEvaluation(Run& run, const std::vector<Example>& gold,
                     const std::vector<Prediction>& preds, int k) {
  json metrics = {{"overall", ToJson(Evaluate(preds, gold, k))}};
  json buckets = json::object();
  for (BucketRule rule : {BucketRule::kChainLength, BucketRule::kNeOverlap,
                          BucketRule::kConfidence}) {
    buckets[std::string(BucketRuleName(rule))] =
        ToJson(BucketedEvaluate(preds, gold, rule, k));
  }
  metrics["buckets"] = buckets;
  WriteJson(run.OutDir() / "metrics.json", metrics);
  *run.out << metrics["overall"].dump(2) << "\n";
}

void WritePredictionFile(Run& run, const std::vector<Example>& gold,
                         const std::vector<Prediction>& preds) {
  std::vector<PredictionRecord> records;
  for (size_t i = 0; i < gold.size(); ++i) records.push_back({gold[i].id, preds[i]});
  WritePredictions(run.OutDir() / "predictions.jsonl", records,
                   run.flags.with_attention);
}

void CmdBaseline(Run& run) {
  const auto all = LoadTracked(run, SingleDataset(run));
  const std::string eval_split = run.flags.split.empty() ? "test" : run.flags.split;
  const auto eval_articles = FilterSplit(all, SplitFilter(eval_split));
  const auto gold = PrepareFromFlags(run, all, eval_articles, nullptr);
  if (gold.empty()) throw ValidationError("no instances in split " + eval_split);
  std::vector<Prediction> preds;
  if (run.flags.method == "random") {
    Rng rng(run.flags.seed);
    for (const Example& e : gold) {
      preds.push_back(RandomPredict(static_cast<int>(e.sentences.size()), rng));
    }
  } else if (run.flags.method == "tfidf-nb") {
    const auto train_articles =
        FilterSplit(all, SplitFilter(run.flags.train_split));
    const auto train = PrepareFromFlags(run, all, train_articles, nullptr);
    if (train.empty()) throw ValidationError("no training instances");
    std::vector<std::string> claims, docs;
    std::vector<VeracityLabel> labels;
    for (const Example& e : train) {
      claims.push_back(e.claim);
      docs.push_back(JoinSentences(e.sentences));
      labels.push_back(e.label);
    }
    const auto space = TfidfFeatureSpace::Fit(claims, docs, DefaultStopWords());
    std::vector<SparseVector> train_x, test_x;
    for (size_t i = 0; i < train.size(); ++i) {
      train_x.push_back(space.Vectorize(claims[i], docs[i]));
    }
    for (const Example& e : gold) {
      test_x.push_back(space.Vectorize(e.claim, JoinSentences(e.sentences)));
    }
    const NaiveBayes nb = NaiveBayes::Fit(train_x, labels);
    for (const SparseVector& x : test_x) {
      Prediction p;
      p.label_dist = nb.Posterior(x);
      preds.push_back(std::move(p));
    }
    space.Save(run.OutDir() / "tfidf.json");
  } else {
    throw ConfigError("unknown baseline method '" + run.flags.method + "'");
  }
  WritePredictionFile(run, gold, preds);
  WriteEvaluation(run, gold, preds, 0);
  run.manifest.extra = {{"method", run.flags.method}, {"split", eval_split}};
}

// Splits the loaded articles of one dataset into training and dev examples.
DatasetSplits MakeSplits(Run& run, const std::vector<ArticleInstance>& all) {
  const DatasetSetting setting = SettingOf(run.flags);
  ReplacementPool pool;
  if (setting == DatasetSetting::kAdversarial) pool = LoadPool(run, all);
  const auto train_articles = FilterSplit(all, Split::kTrain);
  const auto dev_articles = FilterSplit(all, Split::kDev);
  DatasetSplits out;
  if (!dev_articles.empty()) {
    out.train = PrepareExamples(train_articles, Level::kChain, setting,
                                run.flags.seed, &pool, nullptr);
    out.dev = PrepareExamples(dev_articles, Level::kChain, setting,
                              run.flags.seed, &pool, nullptr);
    return out;
  }
  // No dev articles: carve an article-grouped dev split out of train.
  const auto chains = SplitChains(train_articles);
  int dev_count = run.flags.dev_count;
  if (dev_count <= 0) {
    dev_count = std::max(1, static_cast<int>(chains.size() * 0.19 + 0.5));
  }
  std::optional<TrainDevSplit> split;
  for (int c = dev_count; c >= 1 && !split; --c) {
    try {
      split = MakeDevSplit(chains, c, run.flags.seed);
    } catch (const ConfigError&) {
      if (run.flags.dev_count > 0) throw;
    }
  }
  if (!split) throw ConfigError("could not form a dev split");
  auto convert = [&](const std::vector<ChainInstance>& part) {
    std::vector<Example> examples;
    for (size_t i = 0; i < part.size(); ++i) {
      ChainInstance inst = part[i];
      if (setting != DatasetSetting::kFull) {
        inst = BuildEvenSplit(inst, InstanceSeed(run.flags.seed, i));
        if (setting == DatasetSetting::kAdversarial) {
          inst = BuildAdversarial(inst, pool, InstanceSeed(run.flags.seed + 1, i))
                     .instance;
        }
      }
      examples.push_back(ToExample(inst));
    }
    return examples;
  };
  out.train = convert(split->train);
  out.dev = convert(split->dev);
  return out;
}

void CmdTrain(Run& run) {
  const Flags& f = run.flags;
  KeyValueConfig kv;
  if (!f.config.empty()) kv = KeyValueConfig::Load(f.config);
  if (!f.preset.empty()) kv.Set("preset", f.preset);
  if (!f.stages.empty()) kv.Set("stages", f.stages);
  if (f.hops >= 0) kv.Set("hops", std::to_string(f.hops));
  if (f.topk >= 0) kv.Set("topk", std::to_string(f.topk));
  if (!f.loss.empty()) kv.Set("loss", f.loss);
  if (!f.backend.empty()) kv.Set("backend", f.backend);
  if (f.sentence_ids) kv.Set("sentence_ids", "true");
  if (f.lr > 0.0) {
    std::ostringstream lr;
    lr.precision(17);
    lr << f.lr;
    kv.Set("lr", lr.str());
  }
  kv.Set("setting", f.setting);
  kv.Set("seed", std::to_string(f.seed));
  const ExperimentConfig config = ExperimentConfig::FromKeyValue(kv);
  config.Validate();

  DatasetMap datasets;
  for (const std::string& spec : f.datasets) {
    const size_t eq = spec.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("train datasets are given as name=path, got '" + spec +
                        "'");
    }
    const std::string name = spec.substr(0, eq);
    const fs::path path = spec.substr(eq + 1);
    if (!fs::exists(path)) {
      throw ConfigError("dataset '" + name + "' not found at " + path.string());
    }
    datasets[name] = MakeSplits(run, LoadTracked(run, path));
  }
  run.manifest.config_hash = config.Hash();
  run.manifest.preset_deviations = PresetDeviations(config);
  for (const auto& d : run.manifest.preset_deviations) {
    *run.out << "deviation: " << d << "\n";
  }

  const fs::path out = run.OutDir();
  std::vector<json> history;
  RegimeResult result =
      RunRegime(config, datasets, [&](const EpochRecord& record) {
        *run.out << record.dataset << " epoch " << record.epoch << " loss "
                 << record.mean_loss << " dev_selection "
                 << record.selection_metric << "\n";
        return true;
      });
  for (const EpochRecord& r : result.history) history.push_back(ToJson(r));
  WriteFile(out / "history.jsonl", JsonLines(history));
  SaveCheckpoint(out / "checkpoint", config, *result.best);
  WriteFile(out / "config.txt", config.ToKeyValue().Serialize());
  run.manifest.extra = {
      {"best_epoch_index", result.best_epoch_index},
      {"learning_rate", config.EffectiveLearningRate()},
      {"vocab_fingerprint", result.best->tokenizer().Fingerprint()}};
}

// Predictions for gold examples from --checkpoint or --predictions.
std::vector<Prediction> ObtainPredictions(Run& run,
                                          const std::vector<Example>& gold,
                                          int* k) {
  const Flags& f = run.flags;
  std::vector<Prediction> preds;
  if (!f.checkpoint.empty()) {
    Checkpoint ckpt = LoadCheckpoint(f.checkpoint);
    run.manifest.dataset_fingerprints[f.checkpoint + "/params.bin"] =
        FileFingerprint(fs::path(f.checkpoint) / "params.bin");
    for (const Example& e : gold) preds.push_back(ckpt.model->Predict(e));
    *k = ckpt.model->config().top_k;
  } else if (!f.predictions.empty()) {
    run.Track(f.predictions);
    preds = AlignPredictions(LoadPredictions(f.predictions), gold);
    *k = kDefaultTopK;
    if (!preds.empty()) *k = static_cast<int>(preds[0].evidence.size());
  } else {
    throw ConfigError(run.command + " needs --checkpoint or --predictions");
  }
  if (f.topk > 0) {
    *k = f.topk;
    for (Prediction& p : preds) {
      if (!p.importance.empty()) p.evidence = SelectEvidence(p.importance, f.topk);
    }
  }
  return preds;
}

std::vector<Example> EvalGold(Run& run) {
  const auto all = LoadTracked(run, SingleDataset(run));
  const std::string split = run.flags.split.empty() ? "test" : run.flags.split;
  const auto part = FilterSplit(all, SplitFilter(split));
  auto gold = PrepareFromFlags(run, all, part, nullptr);
  if (gold.empty()) throw ValidationError("no instances in split " + split);
  return gold;
}

void CmdEvaluate(Run& run) {
  const auto gold = EvalGold(run);
  int k = 0;
  const auto preds = ObtainPredictions(run, gold, &k);
  WritePredictionFile(run, gold, preds);
  WriteEvaluation(run, gold, preds, k);
}

void CmdSweepK(Run& run) {
  const auto gold = EvalGold(run);
  int k = 0;
  const auto preds = ObtainPredictions(run, gold, &k);
  std::vector<std::vector<double>> importance;
  std::vector<std::vector<Chain>> chains;
  for (size_t i = 0; i < gold.size(); ++i) {
    if (preds[i].importance.size() != gold[i].sentences.size()) {
      throw ValidationError(gold[i].id + ": prediction has no importance scores");
    }
    importance.push_back(preds[i].importance);
    chains.push_back(gold[i].chains);
  }
  json rows = json::array();
  for (const SweepRow& row :
       SweepTopK(importance, chains, run.flags.k_min, run.flags.k_max)) {
    rows.push_back({{"k", row.k},
                    {"evidence_f1", row.metrics.f1},
                    {"evidence_precision", row.metrics.precision},
                    {"evidence_recall", row.metrics.recall}});
    *run.out << "k=" << row.k << " f1=" << row.metrics.f1 << "\n";
  }
  WriteJson(run.OutDir() / "sweep.json", rows);
}

std::vector<double> ReadNumbers(const fs::path& path) {
  std::istringstream in(ReadFile(path));
  std::vector<double> values;
  std::string token;
  while (in >> token) {
    try {
      values.push_back(std::stod(token));
    } catch (const std::logic_error&) {
      throw ParseError(path.string() + ": '" + token + "' is not a number");
    }
  }
  return values;
}

void CmdAnalyze(Run& run) {
  const Flags& f = run.flags;
  json report = json::object();
  if (!f.scores_a.empty() || !f.scores_b.empty()) {
    if (f.scores_a.empty() || f.scores_b.empty()) {
      throw ConfigError("analyze needs both --scores-a and --scores-b");
    }
    run.Track(f.scores_a);
    run.Track(f.scores_b);
    const TTestResult t = WelchTTest(ReadNumbers(f.scores_a),
                                     ReadNumbers(f.scores_b));
    report["welch_t_test"] = {{"t", t.t}, {"df", t.df}, {"p", t.p}};
  }
  if (!f.datasets.empty()) {
    const auto gold = EvalGold(run);
    int k = 0;
    const auto preds = ObtainPredictions(run, gold, &k);
    std::vector<Eigen::MatrixXd> attention;
    std::vector<std::vector<bool>> masks;
    for (size_t i = 0; i < gold.size(); ++i) {
      if (preds[i].hop_attention.empty()) continue;
      attention.push_back(preds[i].hop_attention.back());
      std::vector<bool> mask(gold[i].sentences.size(), false);
      for (int s : ChainUnion(gold[i].chains)) mask[s] = true;
      masks.push_back(std::move(mask));
    }
    if (attention.empty()) {
      throw ValidationError("predictions carry no hop attention");
    }
    report["attention_ratios"] = ToJson(ComputeAttentionRatios(attention, masks));
    report["graphs"] = attention.size();
  }
  if (report.empty()) {
    throw ConfigError("analyze needs --dataset with --checkpoint/--predictions, "
                      "or --scores-a and --scores-b");
  }
  WriteJson(run.OutDir() / "analysis.json", report);
  *run.out << report.dump(2) << "\n";
}

void CmdDivergence(Run& run) {
  if (run.flags.datasets.size() < 2) {
    throw ConfigError("divergence needs at least two --dataset name=path");
  }
  std::vector<std::pair<std::string, std::vector<std::string>>> corpora;
  for (const std::string& spec : run.flags.datasets) {
    const size_t eq = spec.find('=');
    const std::string name = eq == std::string::npos ? spec : spec.substr(0, eq);
    const fs::path path = eq == std::string::npos ? spec : spec.substr(eq + 1);
    const auto all = LoadTracked(run, path);
    std::vector<std::string> texts;
    for (const auto& a : FilterSplit(all, SplitFilter(run.flags.split))) {
      texts.push_back(a.claim);
      texts.insert(texts.end(), a.sentences.begin(), a.sentences.end());
    }
    corpora.emplace_back(name, std::move(texts));
  }
  json rows = json::array();
  for (size_t i = 0; i < corpora.size(); ++i) {
    for (size_t j = i + 1; j < corpora.size(); ++j) {
      const double jsd = CorpusJsDivergence(corpora[i].second,
                                            corpora[j].second,
                                            DefaultStopWords());
      rows.push_back({{"a", corpora[i].first},
                      {"b", corpora[j].first},
                      {"jsd", jsd}});
      *run.out << corpora[i].first << " vs " << corpora[j].first << ": " << jsd
               << "\n";
    }
  }
  WriteJson(run.OutDir() / "divergence.json",
            {{"preprocessing", "lowercased word tokens, stop words removed, "
                               "claims and article sentences"},
             {"pairs", rows}});
}

void CmdAgreement(Run& run) {
  const Flags& f = run.flags;
  if (f.annotations.empty()) throw ConfigError("agreement needs --annotations");
  run.Track(f.annotations);
  const auto rows = ParseTsv(ReadFile(f.annotations));
  AgreementResult result;
  if (f.mode == "item") {
    // item <TAB> code <TAB> code ...
    std::vector<std::vector<std::string>> table;
    for (const auto& row : rows) {
      if (row.size() < 2) continue;
      table.emplace_back(row.begin() + 1, row.end());
    }
    result = Agreement(table);
  } else if (f.mode == "sentence") {
    // article <TAB> sentence <TAB> code <TAB> code ...
    std::vector<std::string> order;
    std::map<std::string, std::vector<std::vector<std::string>>> by_article;
    for (const auto& row : rows) {
      if (row.size() < 3) continue;
      if (!by_article.count(row[0])) order.push_back(row[0]);
      by_article[row[0]].emplace_back(row.begin() + 2, row.end());
    }
    std::vector<std::vector<std::vector<std::string>>> articles;
    for (const auto& id : order) articles.push_back(by_article[id]);
    result = SentenceAgreement(articles);
  } else {
    throw ConfigError("unknown agreement mode '" + f.mode + "'");
  }
  const json j = ToJson(result);
  WriteJson(run.OutDir() / "agreement.json", j);
  *run.out << j.dump(2) << "\n";
}

std::string ConfigHash(const Flags& f, const std::vector<std::string>& args) {
  std::string material;
  for (const auto& a : args) material += a + '\x1f';
  if (!f.config.empty() && fs::exists(f.config)) material += ReadFile(f.config);
  return Fingerprint(material);
}

}  // namespace

int Dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Multi-hop fact checking toolkit", "factcheck"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", ToolVersion());
  Flags f;

  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--config", f.config, "Key/value config file");
    cmd->add_option("--seed", f.seed, "Random seed")->capture_default_str();
    cmd->add_option("--out", f.out, "Output directory");
  };
  auto dataset = [&](CLI::App* cmd) {
    cmd->add_option("--dataset", f.datasets, "Canonical dataset file");
    cmd->add_option("--split", f.split, "train, dev, test or all");
  };
  auto setting = [&](CLI::App* cmd) {
    cmd->add_option("--setting", f.setting, "full, even or adversarial")
        ->check(CLI::IsMember({"full", "even", "adversarial"}));
    cmd->add_option("--pool", f.pool, "Replacement sentence pool");
    cmd->add_option("--level", f.level, "article or chain")
        ->check(CLI::IsMember({"article", "chain"}));
  };
  auto model = [&](CLI::App* cmd) {
    cmd->add_option("--checkpoint", f.checkpoint, "Checkpoint directory");
    cmd->add_option("--predictions", f.predictions, "Prediction file");
    cmd->add_option("--topk", f.topk, "Evidence set size");
    cmd->add_flag("--with-attention", f.with_attention,
                  "Write hop attention into predictions");
  };

  std::map<std::string, CLI::App*> cmds;
  auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* cmd = app.add_subcommand(name, help);
    common(cmd);
    cmds[name] = cmd;
    return cmd;
  };

  CLI::App* c = add("import", "Convert a source dataset to canonical records");
  c->add_option("--source", f.source, "politihop, liar_plus or fever")
      ->required();
  c->add_option("--input", f.input, "Source file")->required();

  c = add("validate", "Check canonical records");
  dataset(c);
  c = add("stats", "Dataset statistics");
  dataset(c);
  c = add("split-chains", "One instance per evidence chain");
  dataset(c);
  c->add_option("--dev-count", f.dev_count, "Chain instances moved to dev");
  c = add("even-split", "Even-split perturbation");
  dataset(c);
  c->add_option("--level", f.level, "article or chain")
      ->check(CLI::IsMember({"article", "chain"}));
  c = add("adversarial", "Adversarial named-entity replacement");
  dataset(c);
  c->add_option("--level", f.level, "article or chain")
      ->check(CLI::IsMember({"article", "chain"}));
  c->add_option("--pool", f.pool, "Replacement sentence pool");
  c = add("baseline", "Random or TF-IDF + naive Bayes baseline");
  dataset(c);
  setting(c);
  c->add_option("--method", f.method, "random or tfidf-nb")
      ->check(CLI::IsMember({"random", "tfidf-nb"}));
  c->add_option("--train-split", f.train_split, "Split used for fitting");
  c->add_flag("--with-attention", f.with_attention, "Unused by baselines");
  c = add("train", "Run a training regime");
  c->add_option("--dataset", f.datasets, "name=path, repeatable");
  c->add_option("--setting", f.setting, "full, even or adversarial")
      ->check(CLI::IsMember({"full", "even", "adversarial"}));
  c->add_option("--pool", f.pool, "Replacement sentence pool");
  c->add_option("--hops", f.hops, "Number of eXtra hop layers");
  c->add_option("--topk", f.topk, "Evidence set size");
  c->add_option("--loss", f.loss, "joint, evi or lab")
      ->check(CLI::IsMember({"joint", "evi", "lab"}));
  c->add_option("--backend", f.backend, "tiny or pretrained-12x768")
      ->check(CLI::IsMember({"tiny", "pretrained-12x768"}));
  c->add_flag("--sentence-ids", f.sentence_ids, "Prefix sentence position tokens");
  c->add_option("--preset", f.preset, "Named regime");
  c->add_option("--stages", f.stages, "dataset:epochs,...");
  c->add_option("--lr", f.lr, "Learning rate");
  c->add_option("--dev-count", f.dev_count,
                "Dev chain instances when the data has no dev split");
  c = add("evaluate", "Score predictions or a checkpoint");
  dataset(c);
  setting(c);
  model(c);
  c = add("sweep-k", "Evidence metrics over a range of k");
  dataset(c);
  setting(c);
  model(c);
  c->add_option("--k-min", f.k_min, "Smallest k");
  c->add_option("--k-max", f.k_max, "Largest k");
  c = add("analyze", "Attention ratios and significance tests");
  dataset(c);
  setting(c);
  model(c);
  c->add_option("--scores-a", f.scores_a, "Scores of system A");
  c->add_option("--scores-b", f.scores_b, "Scores of system B");
  c = add("divergence", "Jensen-Shannon divergence between corpora");
  c->add_option("--dataset", f.datasets, "name=path, repeatable");
  c->add_option("--split", f.split, "train, dev, test or all");
  c = add("agreement", "Inter-annotator agreement");
  c->add_option("--annotations", f.annotations, "Tab-separated codings");
  c->add_option("--mode", f.mode, "item or sentence")
      ->check(CLI::IsMember({"item", "sentence"}));

  std::vector<std::string> argv_storage = {"factcheck"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << ToolVersion() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    err << app.help();
    return kExitUsage;
  }

  Run run;
  for (const auto& [name, cmd] : cmds) {
    if (cmd->parsed()) run.command = name;
  }
  run.args = &args;
  run.flags = f;
  run.out = &out;
  run.manifest.command = run.command;
  run.manifest.arguments = args;
  run.manifest.seed = f.seed;
  run.manifest.tool_version = ToolVersion();
  run.manifest.started_at = NowUtc();
  int status = kExitOk;
  try {
    const fs::path out_dir = run.OutDir();
    run.manifest.config_hash = ConfigHash(f, args);
    const std::string& cmd = run.command;
    if (cmd == "import") {
      CmdImport(run);
    } else if (cmd == "validate") {
      status = CmdValidate(run);
    } else if (cmd == "stats") {
      CmdStats(run);
    } else if (cmd == "split-chains") {
      CmdSplitChains(run);
    } else if (cmd == "even-split") {
      CmdPerturb(run, /*adversarial=*/false);
    } else if (cmd == "adversarial") {
      CmdPerturb(run, /*adversarial=*/true);
    } else if (cmd == "baseline") {
      CmdBaseline(run);
    } else if (cmd == "train") {
      CmdTrain(run);
    } else if (cmd == "evaluate") {
      CmdEvaluate(run);
    } else if (cmd == "sweep-k") {
      CmdSweepK(run);
    } else if (cmd == "analyze") {
      CmdAnalyze(run);
    } else if (cmd == "divergence") {
      CmdDivergence(run);
    } else if (cmd == "agreement") {
      CmdAgreement(run);
    }
    run.manifest.finished_at = NowUtc();
    WriteManifest(out_dir, run.manifest);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return status;
}

}  // namespace factcheck
