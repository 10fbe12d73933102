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

#ifndef FACTCHECK_PARAMS_H_
#define FACTCHECK_PARAMS_H_

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "factcheck/random.h"

namespace factcheck {

struct Parameter {
  std::string name;
  Eigen::MatrixXd value;
  Eigen::MatrixXd grad;  // same shape as value once touched

  void ZeroGrad() { grad.setZero(value.rows(), value.cols()); }
};

// Named parameters with stable addresses. Iteration is in name order, which
// fixes the serialization layout.
class ParameterStore {
 public:
  ParameterStore() = default;
  ParameterStore(const ParameterStore& other);
  ParameterStore& operator=(const ParameterStore& other);
  ParameterStore(ParameterStore&&) = default;
  ParameterStore& operator=(ParameterStore&&) = default;

  // Creates a zero-initialized parameter; throws if the name exists.
  Parameter& Create(const std::string& name, int rows, int cols);
  // Uniform in [-scale, scale].
  Parameter& CreateUniform(const std::string& name, int rows, int cols,
                           double scale, Rng& rng);
  Parameter& CreateConstant(const std::string& name, int rows, int cols,
                            double value);

  Parameter& Get(const std::string& name);
  const Parameter& Get(const std::string& name) const;
  bool Has(const std::string& name) const { return params_.count(name) > 0; }

  std::vector<Parameter*> All();
  std::vector<const Parameter*> All() const;
  size_t size() const { return params_.size(); }
  size_t NumScalars() const;

  void ZeroGrad();
  // Copies values from other for every shared name; shapes must match.
  void CopyValuesFrom(const ParameterStore& other);

  // Binary blob: "FCPARAM1", count, then per parameter name, shape and raw
  // little-endian doubles. Round-trips bit-exactly.
  std::string Serialize() const;
  static ParameterStore Deserialize(std::string_view bytes);
  void Save(const std::filesystem::path& path) const;
  static ParameterStore Load(const std::filesystem::path& path);

 private:
  std::map<std::string, std::unique_ptr<Parameter>> params_;
};

}  // namespace factcheck

#endif  // FACTCHECK_PARAMS_H_
