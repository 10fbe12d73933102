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

#ifndef FACTCHECK_TEXT_H_
#define FACTCHECK_TEXT_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace factcheck {

std::string Trim(std::string_view text);
std::string ToLower(std::string_view text);

// Lowercased runs of two or more word characters (ASCII letters, digits,
// underscore; bytes >= 0x80 count as word characters so UTF-8 words stay
// whole).
std::vector<std::string> WordTokens(std::string_view text);

// Asset directory: $FACTCHECK_ASSET_DIR if set, else the build-time default.
std::filesystem::path AssetDir();

using StopWords = std::unordered_set<std::string>;

// Versioned English stop-word list shipped as assets/stopwords_en_v1.txt.
inline constexpr std::string_view kStopWordsAsset = "stopwords_en_v1.txt";
const StopWords& DefaultStopWords();
StopWords LoadStopWords(const std::filesystem::path& path);

std::vector<std::string> RemoveStopWords(std::vector<std::string> tokens,
                                         const StopWords& stop_words);

}  // namespace factcheck

#endif  // FACTCHECK_TEXT_H_
