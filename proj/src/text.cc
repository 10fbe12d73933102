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

#include "factcheck/text.h"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>

#include "factcheck/corpus.h"
#include "factcheck/error.h"

#ifndef FACTCHECK_DEFAULT_ASSET_DIR
#define FACTCHECK_DEFAULT_ASSET_DIR "assets"
#endif

namespace factcheck {

std::string Trim(std::string_view text) {
  size_t begin = 0;
  size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin])))
    ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1])))
    --end;
  return std::string(text.substr(begin, end - begin));
}

std::string ToLower(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

namespace {

bool IsWordByte(unsigned char c) {
  return std::isalnum(c) || c == '_' || c >= 0x80;
}

}  // namespace

std::vector<std::string> WordTokens(std::string_view text) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < text.size()) {
    if (!IsWordByte(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < text.size() && IsWordByte(static_cast<unsigned char>(text[j])))
      ++j;
    if (j - i >= 2) out.push_back(ToLower(text.substr(i, j - i)));
    i = j;
  }
  return out;
}

std::filesystem::path AssetDir() {
  if (const char* env = std::getenv("FACTCHECK_ASSET_DIR"); env && *env) {
    return env;
  }
  return FACTCHECK_DEFAULT_ASSET_DIR;
}

StopWords LoadStopWords(const std::filesystem::path& path) {
  StopWords words;
  std::istringstream in(ReadFile(path));
  std::string line;
  while (std::getline(in, line)) {
    std::string w = Trim(line);
    if (!w.empty() && w[0] != '#') words.insert(ToLower(w));
  }
  return words;
}

const StopWords& DefaultStopWords() {
  static const StopWords words =
      LoadStopWords(AssetDir() / std::string(kStopWordsAsset));
  return words;
}

std::vector<std::string> RemoveStopWords(std::vector<std::string> tokens,
                                         const StopWords& stop_words) {
  tokens.erase(std::remove_if(tokens.begin(), tokens.end(),
                              [&](const std::string& t) {
                                return stop_words.count(t) > 0;
                              }),
               tokens.end());
  return tokens;
}

}  // namespace factcheck
