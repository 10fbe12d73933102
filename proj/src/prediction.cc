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

#include "factcheck/prediction.h"

#include <sstream>

#include "factcheck/error.h"

namespace factcheck {

using nlohmann::json;

VeracityLabel Prediction::label() const {
  int best = 0;
  for (int i = 1; i < kNumLabels; ++i) {
    if (label_dist[i] > label_dist[best]) best = i;
  }
  return LabelFromIndex(best);
}

json ToJson(const PredictionRecord& record, bool with_attention) {
  const Prediction& p = record.prediction;
  json out = json::object();
  out["id"] = record.id;
  out["label"] = std::string(LabelName(p.label()));
  out["label_dist"] = std::vector<double>(p.label_dist.begin(),
                                          p.label_dist.end());
  out["evidence"] = p.evidence;
  out["importance"] = p.importance;
  if (with_attention && !p.hop_attention.empty()) {
    const Eigen::MatrixXd& a = p.hop_attention.back();
    json rows = json::array();
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      std::vector<double> row(a.cols());
      for (Eigen::Index c = 0; c < a.cols(); ++c) row[c] = a(r, c);
      rows.push_back(row);
    }
    out["attention"] = rows;
  }
  return out;
}

PredictionRecord PredictionRecordFromJson(const json& j) {
  PredictionRecord r;
  try {
    r.id = j.at("id").get<std::string>();
    auto dist = j.at("label_dist").get<std::vector<double>>();
    if (dist.size() != kNumLabels) {
      throw ParseError(r.id + ": label_dist must have 3 entries");
    }
    for (int i = 0; i < kNumLabels; ++i) r.prediction.label_dist[i] = dist[i];
    r.prediction.evidence = j.at("evidence").get<std::vector<int>>();
    r.prediction.importance = j.at("importance").get<std::vector<double>>();
    if (auto it = j.find("attention"); it != j.end()) {
      auto rows = it->get<std::vector<std::vector<double>>>();
      Eigen::MatrixXd a(rows.size(), rows.size());
      for (size_t u = 0; u < rows.size(); ++u) {
        if (rows[u].size() != rows.size()) {
          throw ParseError(r.id + ": attention matrix must be square");
        }
        for (size_t v = 0; v < rows.size(); ++v) a(u, v) = rows[u][v];
      }
      r.prediction.hop_attention.push_back(std::move(a));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("prediction record: ") + e.what());
  }
  return r;
}

void WritePredictions(const std::filesystem::path& path,
                      const std::vector<PredictionRecord>& records,
                      bool with_attention) {
  std::string out;
  for (const auto& r : records) {
    out += ToJson(r, with_attention).dump();
    out += '\n';
  }
  WriteFile(path, out);
}

std::vector<PredictionRecord> LoadPredictions(
    const std::filesystem::path& path) {
  std::vector<PredictionRecord> out;
  std::istringstream in(ReadFile(path));
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(PredictionRecordFromJson(json::parse(line)));
    } catch (const json::exception& e) {
      throw ParseError("line " + std::to_string(line_number) + ": " +
                       e.what());
    }
  }
  return out;
}

}  // namespace factcheck
