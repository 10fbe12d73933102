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

#ifndef FACTCHECK_PREDICTION_H_
#define FACTCHECK_PREDICTION_H_

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "factcheck/corpus.h"
#include "json.hpp"

namespace factcheck {

// Output of any verifier for one example.
struct Prediction {
  std::array<double, kNumLabels> label_dist{};
  // Distribution over nodes (sentences).
  std::vector<double> importance;
  // Sorted selected sentence indices.
  std::vector<int> evidence;
  // One node x node row-stochastic matrix per hop layer.
  std::vector<Eigen::MatrixXd> hop_attention;

  // Argmax of label_dist; ties resolve to the lower label index.
  VeracityLabel label() const;
};

// Line-delimited prediction record as consumed by the evaluation tools.
struct PredictionRecord {
  std::string id;
  Prediction prediction;
};

// {id, label, label_dist, evidence, importance[, attention]}; attention is
// the last hop layer only, written when present and requested.
nlohmann::json ToJson(const PredictionRecord& record,
                      bool with_attention = false);
PredictionRecord PredictionRecordFromJson(const nlohmann::json& record);

void WritePredictions(const std::filesystem::path& path,
                      const std::vector<PredictionRecord>& records,
                      bool with_attention = false);
std::vector<PredictionRecord> LoadPredictions(
    const std::filesystem::path& path);

}  // namespace factcheck

#endif  // FACTCHECK_PREDICTION_H_
