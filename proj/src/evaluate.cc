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

#include "factcheck/evaluate.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include <boost/math/distributions/students_t.hpp>

#include "factcheck/error.h"
#include "factcheck/reasoner.h"

namespace factcheck {

using nlohmann::json;

// ---- Label metrics ----

LabelMetrics ComputeLabelMetrics(const std::vector<VeracityLabel>& predicted,
                                 const std::vector<VeracityLabel>& gold) {
  if (predicted.size() != gold.size()) {
    throw ValidationError("predicted and gold label counts differ");
  }
  if (gold.empty()) throw ValidationError("no labels to score");
  std::array<int, kNumLabels> tp{}, fp{}, fn{};
  int correct = 0;
  for (size_t i = 0; i < gold.size(); ++i) {
    const int p = LabelIndex(predicted[i]);
    const int g = LabelIndex(gold[i]);
    if (p == g) {
      ++tp[g];
      ++correct;
    } else {
      ++fp[p];
      ++fn[g];
    }
  }
  double f1_sum = 0.0;
  for (int c = 0; c < kNumLabels; ++c) {
    const double precision = tp[c] + fp[c] ? double(tp[c]) / (tp[c] + fp[c]) : 0.0;
    const double recall = tp[c] + fn[c] ? double(tp[c]) / (tp[c] + fn[c]) : 0.0;
    f1_sum += precision + recall > 0.0
                  ? 2.0 * precision * recall / (precision + recall)
                  : 0.0;
  }
  return {f1_sum / kNumLabels, double(correct) / gold.size()};
}

// ---- Evidence metrics ----

EvidenceMetrics ComputeEvidenceMetrics(
    const std::vector<std::vector<int>>& predicted,
    const std::vector<std::vector<Chain>>& gold_chains) {
  if (predicted.size() != gold_chains.size()) {
    throw ValidationError("predicted and gold evidence counts differ");
  }
  EvidenceMetrics sum;
  if (predicted.empty()) return sum;
  for (size_t i = 0; i < predicted.size(); ++i) {
    const std::vector<int> gold = ChainUnion(gold_chains[i]);
    const std::set<int> pred(predicted[i].begin(), predicted[i].end());
    int hits = 0;
    for (int g : gold) hits += pred.count(g);
    const double p = pred.empty() ? 0.0 : double(hits) / pred.size();
    const double r = gold.empty() ? 0.0 : double(hits) / gold.size();
    sum.precision += p;
    sum.recall += r;
    sum.f1 += p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
  }
  const double n = static_cast<double>(predicted.size());
  return {sum.f1 / n, sum.precision / n, sum.recall / n};
}

double FeverScore(const std::vector<VeracityLabel>& predicted_labels,
                  const std::vector<std::vector<int>>& predicted_evidence,
                  const std::vector<VeracityLabel>& gold_labels,
                  const std::vector<std::vector<Chain>>& gold_chains) {
  const size_t n = gold_labels.size();
  if (predicted_labels.size() != n || predicted_evidence.size() != n ||
      gold_chains.size() != n) {
    throw ValidationError("FEVER score inputs differ in length");
  }
  if (n == 0) return 0.0;
  int correct = 0;
  for (size_t i = 0; i < n; ++i) {
    if (predicted_labels[i] != gold_labels[i]) continue;
    const std::set<int> pred(predicted_evidence[i].begin(),
                             predicted_evidence[i].end());
    const bool covered = std::any_of(
        gold_chains[i].begin(), gold_chains[i].end(), [&](const Chain& c) {
          return std::all_of(c.begin(), c.end(),
                             [&](int s) { return pred.count(s) > 0; });
        });
    correct += covered;
  }
  return double(correct) / n;
}

// ---- Reports ----

MetricsReport Evaluate(const std::vector<Prediction>& predictions,
                       const std::vector<Example>& gold, int k) {
  if (predictions.size() != gold.size()) {
    throw ValidationError("prediction and gold counts differ");
  }
  MetricsReport r;
  r.count = static_cast<int>(gold.size());
  r.k = k;
  if (gold.empty()) return r;
  std::vector<VeracityLabel> pl, gl;
  std::vector<std::vector<int>> pe;
  std::vector<std::vector<Chain>> gc;
  for (size_t i = 0; i < gold.size(); ++i) {
    pl.push_back(predictions[i].label());
    gl.push_back(gold[i].label);
    pe.push_back(predictions[i].evidence);
    gc.push_back(gold[i].chains);
  }
  const LabelMetrics lm = ComputeLabelMetrics(pl, gl);
  const EvidenceMetrics em = ComputeEvidenceMetrics(pe, gc);
  r.label_macro_f1 = lm.macro_f1;
  r.label_accuracy = lm.accuracy;
  r.evidence_f1 = em.f1;
  r.evidence_precision = em.precision;
  r.evidence_recall = em.recall;
  r.fever_score = FeverScore(pl, pe, gl, gc);
  return r;
}

json ToJson(const MetricsReport& r) {
  return json{{"count", r.count},
              {"k", r.k},
              {"label_macro_f1", r.label_macro_f1},
              {"label_accuracy", r.label_accuracy},
              {"evidence_f1", r.evidence_f1},
              {"evidence_precision", r.evidence_precision},
              {"evidence_recall", r.evidence_recall},
              {"fever_score", r.fever_score}};
}

std::vector<Prediction> AlignPredictions(
    const std::vector<PredictionRecord>& records,
    const std::vector<Example>& gold) {
  std::unordered_map<std::string, const Prediction*> by_id;
  for (const auto& r : records) by_id[r.id] = &r.prediction;
  std::vector<Prediction> out;
  out.reserve(gold.size());
  for (const Example& g : gold) {
    auto it = by_id.find(g.id);
    if (it == by_id.end()) {
      throw ValidationError("no prediction for instance " + g.id);
    }
    out.push_back(*it->second);
  }
  return out;
}

std::vector<SweepRow> SweepTopK(
    const std::vector<std::vector<double>>& importance,
    const std::vector<std::vector<Chain>>& gold_chains, int k_min, int k_max) {
  if (k_min < 1 || k_max < k_min) throw ConfigError("invalid k range");
  std::vector<SweepRow> rows;
  for (int k = k_min; k <= k_max; ++k) {
    std::vector<std::vector<int>> selected;
    selected.reserve(importance.size());
    for (const auto& imp : importance) selected.push_back(SelectEvidence(imp, k));
    rows.push_back({k, ComputeEvidenceMetrics(selected, gold_chains)});
  }
  return rows;
}

// ---- Buckets ----

std::optional<BucketRule> ParseBucketRule(std::string_view name) {
  if (name == "chain_length_1or2_vs_3plus") return BucketRule::kChainLength;
  if (name == "ne_overlap_lt40_vs_ge40") return BucketRule::kNeOverlap;
  if (name == "confidence_lt90_vs_ge90") return BucketRule::kConfidence;
  return std::nullopt;
}

std::string_view BucketRuleName(BucketRule rule) {
  switch (rule) {
    case BucketRule::kChainLength:
      return "chain_length_1or2_vs_3plus";
    case BucketRule::kNeOverlap:
      return "ne_overlap_lt40_vs_ge40";
    case BucketRule::kConfidence:
      return "confidence_lt90_vs_ge90";
  }
  return "";
}

namespace {

std::array<std::string, 2> BucketNames(BucketRule rule) {
  switch (rule) {
    case BucketRule::kChainLength:
      return {"1-2", "3+"};
    case BucketRule::kNeOverlap:
      return {"<40%", ">=40%"};
    case BucketRule::kConfidence:
      return {"<90%", ">=90%"};
  }
  return {"", ""};
}

}  // namespace

int BucketOf(BucketRule rule, const Prediction& prediction,
             const Example& gold, const EntityRecognizer& recognizer) {
  switch (rule) {
    case BucketRule::kChainLength: {
      if (gold.chains.empty()) throw ValidationError(gold.id + ": no chains");
      size_t shortest = gold.chains[0].size();
      for (const Chain& c : gold.chains) shortest = std::min(shortest, c.size());
      return shortest <= 2 ? 0 : 1;
    }
    case BucketRule::kNeOverlap: {
      const std::vector<int> evidence = ChainUnion(gold.chains);
      const std::set<int> evidence_set(evidence.begin(), evidence.end());
      std::vector<std::string> evi, non;
      for (size_t s = 0; s < gold.sentences.size(); ++s) {
        (evidence_set.count(static_cast<int>(s)) ? evi : non)
            .push_back(gold.sentences[s]);
      }
      return NeOverlap(evi, non, recognizer) >= 0.40 ? 1 : 0;
    }
    case BucketRule::kConfidence: {
      const double top = *std::max_element(prediction.label_dist.begin(),
                                           prediction.label_dist.end());
      return top >= 0.90 ? 1 : 0;
    }
  }
  return 0;
}

BucketedReport BucketedEvaluate(const std::vector<Prediction>& predictions,
                                const std::vector<Example>& gold,
                                BucketRule rule, int k,
                                const EntityRecognizer& recognizer) {
  if (predictions.size() != gold.size()) {
    throw ValidationError("prediction and gold counts differ");
  }
  std::array<std::vector<Prediction>, 2> preds;
  std::array<std::vector<Example>, 2> golds;
  for (size_t i = 0; i < gold.size(); ++i) {
    const int b = BucketOf(rule, predictions[i], gold[i], recognizer);
    preds[b].push_back(predictions[i]);
    golds[b].push_back(gold[i]);
  }
  BucketedReport report;
  report.rule = rule;
  const auto names = BucketNames(rule);
  for (int b = 0; b < 2; ++b) {
    report.buckets[b].name = names[b];
    report.buckets[b].count = static_cast<int>(golds[b].size());
    if (!golds[b].empty()) {
      report.buckets[b].metrics = Evaluate(preds[b], golds[b], k);
    }
  }
  return report;
}

json ToJson(const BucketedReport& report) {
  json buckets = json::array();
  for (const Bucket& b : report.buckets) {
    buckets.push_back(json{{"name", b.name},
                           {"count", b.count},
                           {"metrics", b.metrics ? ToJson(*b.metrics)
                                                 : json(nullptr)}});
  }
  return json{{"rule", std::string(BucketRuleName(report.rule))},
              {"buckets", buckets}};
}

// ---- Attention ----

double AttentionRatios::Mean(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double x : v) s += x;
  return s / v.size();
}

AttentionRatios ComputeAttentionRatios(
    const std::vector<Eigen::MatrixXd>& attention,
    const std::vector<std::vector<bool>>& evidence_masks) {
  if (attention.size() != evidence_masks.size()) {
    throw ValidationError("attention and mask counts differ");
  }
  AttentionRatios out;
  for (size_t g = 0; g < attention.size(); ++g) {
    const Eigen::MatrixXd& a = attention[g];
    const auto& mask = evidence_masks[g];
    if (a.rows() != a.cols() || a.rows() != static_cast<Eigen::Index>(mask.size())) {
      throw ValidationError("attention matrix " + std::to_string(g) +
                            " does not match its mask");
    }
    if (a.size() == 0) continue;
    const double mean = a.sum() / static_cast<double>(a.size());
    for (Eigen::Index u = 0; u < a.rows(); ++u) {
      for (Eigen::Index v = 0; v < a.cols(); ++v) {
        const double ratio = a(u, v) / mean;
        if (mask[u]) {
          (mask[v] ? out.evi_to_evi : out.evi_to_non).push_back(ratio);
        } else {
          (mask[v] ? out.non_to_evi : out.non_to_non).push_back(ratio);
        }
      }
    }
  }
  return out;
}

json ToJson(const AttentionRatios& r) {
  auto value = [](double x) { return std::isnan(x) ? json(nullptr) : json(x); };
  return json{{"evi_to_non_evi", value(r.mean_evi_to_non())},
              {"evi_to_evi", value(r.mean_evi_to_evi())},
              {"non_evi_to_non_evi", value(r.mean_non_to_non())},
              {"non_evi_to_evi", value(r.mean_non_to_evi())},
              {"edges", json{{"evi_to_non_evi", r.evi_to_non.size()},
                             {"evi_to_evi", r.evi_to_evi.size()},
                             {"non_evi_to_non_evi", r.non_to_non.size()},
                             {"non_evi_to_evi", r.non_to_evi.size()}}}};
}

// ---- Statistics ----

TTestResult WelchTTest(const std::vector<double>& a,
                       const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2) {
    throw ValidationError("Welch t-test needs at least two values per sample");
  }
  auto moments = [](const std::vector<double>& x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= x.size();
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return std::pair{mean, ss / (x.size() - 1)};
  };
  const auto [ma, va] = moments(a);
  const auto [mb, vb] = moments(b);
  const double sa = va / a.size();
  const double sb = vb / b.size();
  if (sa + sb <= 0.0) {
    throw ValidationError("Welch t-test: both samples have zero variance");
  }
  TTestResult r;
  r.t = (ma - mb) / std::sqrt(sa + sb);
  r.df = (sa + sb) * (sa + sb) /
         (sa * sa / (a.size() - 1) + sb * sb / (b.size() - 1));
  boost::math::students_t dist(r.df);
  r.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t)));
  r.p = std::min(r.p, 1.0);
  return r;
}

double JsDivergence(const std::vector<double>& p,
                    const std::vector<double>& q) {
  if (p.size() != q.size()) throw ValidationError("support sizes differ");
  double jsd = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0.0) jsd += 0.5 * p[i] * std::log2(p[i] / m);
    if (q[i] > 0.0) jsd += 0.5 * q[i] * std::log2(q[i] / m);
  }
  return std::clamp(jsd, 0.0, 1.0);
}

double CorpusJsDivergence(const std::vector<std::string>& corpus_a,
                          const std::vector<std::string>& corpus_b,
                          const StopWords& stop_words) {
  std::map<std::string, std::pair<double, double>> counts;
  double total_a = 0.0, total_b = 0.0;
  for (const auto& text : corpus_a) {
    for (const auto& w : RemoveStopWords(WordTokens(text), stop_words)) {
      counts[w].first += 1.0;
      total_a += 1.0;
    }
  }
  for (const auto& text : corpus_b) {
    for (const auto& w : RemoveStopWords(WordTokens(text), stop_words)) {
      counts[w].second += 1.0;
      total_b += 1.0;
    }
  }
  if (total_a == 0.0 || total_b == 0.0) {
    throw ValidationError("a corpus is empty after preprocessing");
  }
  std::vector<double> p, q;
  p.reserve(counts.size());
  q.reserve(counts.size());
  for (const auto& [w, c] : counts) {
    p.push_back(c.first / total_a);
    q.push_back(c.second / total_b);
  }
  return JsDivergence(p, q);
}

// ---- Agreement ----

AgreementResult Agreement(const std::vector<std::vector<std::string>>& table) {
  AgreementResult result;
  result.items = static_cast<int>(table.size());
  if (table.empty()) throw ValidationError("agreement needs at least one item");
  size_t raters = table[0].size();
  for (const auto& row : table) raters = std::max(raters, row.size());
  if (raters < 2) throw ValidationError("agreement needs at least two raters");

  // Fleiss: complete items only.
  std::map<std::string, double> category_totals;
  double p_bar = 0.0;
  int complete = 0;
  for (const auto& row : table) {
    if (row.size() != raters ||
        std::any_of(row.begin(), row.end(),
                    [](const std::string& v) { return v.empty(); })) {
      continue;
    }
    std::map<std::string, int> counts;
    for (const auto& v : row) ++counts[v];
    double agree = 0.0;
    for (const auto& [c, n] : counts) {
      agree += double(n) * n;
      category_totals[c] += n;
    }
    const double n = static_cast<double>(raters);
    p_bar += (agree - n) / (n * (n - 1.0));
    ++complete;
  }
  if (complete > 0) {
    p_bar /= complete;
    double p_e = 0.0;
    const double total = static_cast<double>(complete) * raters;
    for (const auto& [c, n] : category_totals) p_e += (n / total) * (n / total);
    if (p_e < 1.0) result.fleiss_kappa = (p_bar - p_e) / (1.0 - p_e);
  }

  // Krippendorff: coincidences over pairable values.
  std::map<std::pair<std::string, std::string>, double> coincidence;
  std::map<std::string, double> marginal;
  for (const auto& row : table) {
    std::vector<std::string> values;
    for (const auto& v : row) {
      if (!v.empty()) values.push_back(v);
    }
    const size_t m = values.size();
    if (m < 2) continue;
    for (size_t i = 0; i < m; ++i) {
      for (size_t j = 0; j < m; ++j) {
        if (i == j) continue;
        coincidence[{values[i], values[j]}] += 1.0 / (m - 1.0);
      }
    }
  }
  double n = 0.0;
  for (const auto& [pair, o] : coincidence) {
    marginal[pair.first] += o;
    n += o;
  }
  if (n > 1.0) {
    double observed = 0.0;
    for (const auto& [pair, o] : coincidence) {
      if (pair.first != pair.second) observed += o;
    }
    observed /= n;
    double expected = 0.0;
    for (const auto& [c, nc] : marginal) {
      for (const auto& [k, nk] : marginal) {
        if (c != k) expected += nc * nk;
      }
    }
    expected /= n * (n - 1.0);
    if (expected > 0.0) result.krippendorff_alpha = 1.0 - observed / expected;
  }
  return result;
}

AgreementResult SentenceAgreement(
    const std::vector<std::vector<std::vector<std::string>>>& articles) {
  if (articles.empty()) throw ValidationError("no articles to score");
  AgreementResult out;
  double kappa_sum = 0.0, alpha_sum = 0.0;
  for (const auto& table : articles) {
    AgreementResult r = Agreement(table);
    out.items += r.items;
    if (r.fleiss_kappa) {
      kappa_sum += *r.fleiss_kappa;
      ++out.kappa_units;
    }
    if (r.krippendorff_alpha) {
      alpha_sum += *r.krippendorff_alpha;
      ++out.alpha_units;
    }
  }
  if (out.kappa_units) out.fleiss_kappa = kappa_sum / out.kappa_units;
  if (out.alpha_units) out.krippendorff_alpha = alpha_sum / out.alpha_units;
  return out;
}

json ToJson(const AgreementResult& r) {
  auto opt = [](const std::optional<double>& v) {
    return v ? json(*v) : json("undefined");
  };
  return json{{"fleiss_kappa", opt(r.fleiss_kappa)},
              {"krippendorff_alpha", opt(r.krippendorff_alpha)},
              {"items", r.items},
              {"kappa_units", r.kappa_units},
              {"alpha_units", r.alpha_units}};
}

}  // namespace factcheck
