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

#ifndef FACTCHECK_CLI_H_
#define FACTCHECK_CLI_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace factcheck {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Written as manifest.json next to the outputs of every command.
struct RunManifest {
  std::string command;
  std::vector<std::string> arguments;
  std::string config_hash;
  uint64_t seed = 42;
  std::map<std::string, std::string> dataset_fingerprints;  // path -> hash
  std::vector<std::string> preset_deviations;
  std::string tool_version;
  std::string started_at;   // UTC, ISO 8601
  std::string finished_at;
  nlohmann::json extra = nlohmann::json::object();
};

nlohmann::json ToJson(const RunManifest& manifest);
void WriteManifest(const std::filesystem::path& out_dir,
                   const RunManifest& manifest);

std::string ToolVersion();

// Runs one command. args excludes the program name. Returns 0 on success, 1
// when the operation fails (message on err) and 2 on usage errors.
int Dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace factcheck

#endif  // FACTCHECK_CLI_H_
