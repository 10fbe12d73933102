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

#include "factcheck/params.h"

#include <cstring>

#include "factcheck/corpus.h"
#include "factcheck/error.h"

namespace factcheck {

namespace {

constexpr char kMagic[8] = {'F', 'C', 'P', 'A', 'R', 'A', 'M', '1'};

template <typename T>
void Put(std::string* out, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out->append(bytes, sizeof(T));
}

template <typename T>
T Take(std::string_view bytes, size_t* pos) {
  if (*pos + sizeof(T) > bytes.size()) {
    throw ParseError("truncated parameter blob");
  }
  T value;
  std::memcpy(&value, bytes.data() + *pos, sizeof(T));
  *pos += sizeof(T);
  return value;
}

}  // namespace

ParameterStore::ParameterStore(const ParameterStore& other) {
  for (const auto& [name, p] : other.params_) {
    params_[name] = std::make_unique<Parameter>(*p);
  }
}

ParameterStore& ParameterStore::operator=(const ParameterStore& other) {
  if (this != &other) {
    params_.clear();
    for (const auto& [name, p] : other.params_) {
      params_[name] = std::make_unique<Parameter>(*p);
    }
  }
  return *this;
}

Parameter& ParameterStore::Create(const std::string& name, int rows,
                                  int cols) {
  if (params_.count(name)) throw ConfigError("duplicate parameter " + name);
  auto p = std::make_unique<Parameter>();
  p->name = name;
  p->value = Eigen::MatrixXd::Zero(rows, cols);
  p->ZeroGrad();
  Parameter& ref = *p;
  params_[name] = std::move(p);
  return ref;
}

Parameter& ParameterStore::CreateUniform(const std::string& name, int rows,
                                         int cols, double scale, Rng& rng) {
  Parameter& p = Create(name, rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      p.value(r, c) = (2.0 * rng.UniformDouble() - 1.0) * scale;
    }
  }
  return p;
}

Parameter& ParameterStore::CreateConstant(const std::string& name, int rows,
                                          int cols, double value) {
  Parameter& p = Create(name, rows, cols);
  p.value.setConstant(value);
  return p;
}

Parameter& ParameterStore::Get(const std::string& name) {
  auto it = params_.find(name);
  if (it == params_.end()) throw ConfigError("unknown parameter " + name);
  return *it->second;
}

const Parameter& ParameterStore::Get(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) throw ConfigError("unknown parameter " + name);
  return *it->second;
}

std::vector<Parameter*> ParameterStore::All() {
  std::vector<Parameter*> out;
  for (auto& [name, p] : params_) out.push_back(p.get());
  return out;
}

std::vector<const Parameter*> ParameterStore::All() const {
  std::vector<const Parameter*> out;
  for (const auto& [name, p] : params_) out.push_back(p.get());
  return out;
}

size_t ParameterStore::NumScalars() const {
  size_t n = 0;
  for (const auto& [name, p] : params_) n += p->value.size();
  return n;
}

void ParameterStore::ZeroGrad() {
  for (auto& [name, p] : params_) p->ZeroGrad();
}

void ParameterStore::CopyValuesFrom(const ParameterStore& other) {
  for (auto& [name, p] : params_) {
    if (!other.Has(name)) continue;
    const Parameter& src = other.Get(name);
    if (src.value.rows() != p->value.rows() ||
        src.value.cols() != p->value.cols()) {
      throw ConfigError("shape mismatch for parameter " + name);
    }
    p->value = src.value;
  }
}

std::string ParameterStore::Serialize() const {
  std::string out(kMagic, sizeof(kMagic));
  Put<uint64_t>(&out, params_.size());
  for (const auto& [name, p] : params_) {
    Put<uint64_t>(&out, name.size());
    out += name;
    Put<int64_t>(&out, p->value.rows());
    Put<int64_t>(&out, p->value.cols());
    // Row-major element order.
    for (Eigen::Index r = 0; r < p->value.rows(); ++r) {
      for (Eigen::Index c = 0; c < p->value.cols(); ++c) {
        Put<double>(&out, p->value(r, c));
      }
    }
  }
  return out;
}

ParameterStore ParameterStore::Deserialize(std::string_view bytes) {
  if (bytes.size() < sizeof(kMagic) ||
      std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw ParseError("not a parameter blob");
  }
  size_t pos = sizeof(kMagic);
  ParameterStore store;
  const uint64_t count = Take<uint64_t>(bytes, &pos);
  for (uint64_t i = 0; i < count; ++i) {
    const uint64_t len = Take<uint64_t>(bytes, &pos);
    if (pos + len > bytes.size()) throw ParseError("truncated parameter name");
    std::string name(bytes.substr(pos, len));
    pos += len;
    const int64_t rows = Take<int64_t>(bytes, &pos);
    const int64_t cols = Take<int64_t>(bytes, &pos);
    if (rows < 0 || cols < 0) throw ParseError("negative parameter shape");
    Parameter& p = store.Create(name, static_cast<int>(rows),
                                static_cast<int>(cols));
    for (int64_t r = 0; r < rows; ++r) {
      for (int64_t c = 0; c < cols; ++c) {
        p.value(r, c) = Take<double>(bytes, &pos);
      }
    }
  }
  if (pos != bytes.size()) throw ParseError("trailing bytes in parameter blob");
  return store;
}

void ParameterStore::Save(const std::filesystem::path& path) const {
  WriteFile(path, Serialize());
}

ParameterStore ParameterStore::Load(const std::filesystem::path& path) {
  return Deserialize(ReadFile(path));
}

}  // namespace factcheck
