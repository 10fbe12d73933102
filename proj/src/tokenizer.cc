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

#include "factcheck/tokenizer.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "factcheck/corpus.h"
#include "factcheck/error.h"

namespace factcheck {

Tokenizer Tokenizer::FromTokens(std::vector<std::string> tokens) {
  Tokenizer t;
  t.tokens_ = std::move(tokens);
  t.Index();
  return t;
}

Tokenizer Tokenizer::Load(const std::filesystem::path& path) {
  std::istringstream in(ReadFile(path));
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    tokens.push_back(line);
  }
  return FromTokens(std::move(tokens));
}

void Tokenizer::Index() {
  ids_.clear();
  position_ids_.clear();
  for (size_t i = 0; i < tokens_.size(); ++i) {
    ids_.emplace(tokens_[i], static_cast<int>(i));
  }
  auto require = [&](std::string_view token) {
    auto it = ids_.find(std::string(token));
    if (it == ids_.end()) {
      throw ConfigError("vocabulary lacks " + std::string(token));
    }
    return it->second;
  };
  pad_id_ = require(kPad);
  unk_id_ = require(kUnk);
  cls_id_ = require(kCls);
  sep_id_ = require(kSep);
  for (int n = 0;; ++n) {
    auto it = ids_.find("[unused" + std::to_string(n) + "]");
    if (it == ids_.end()) break;
    position_ids_.push_back(it->second);
  }
}

Tokenizer Tokenizer::Build(const std::vector<std::string>& texts,
                           int min_count, int max_words,
                           int num_position_tokens) {
  Tokenizer probe;
  std::map<std::string, int> counts;
  for (const auto& text : texts) {
    for (auto& w : probe.BasicTokens(text)) ++counts[w];
  }
  std::vector<std::pair<std::string, int>> words(counts.begin(), counts.end());
  std::stable_sort(words.begin(), words.end(),
                   [](const auto& a, const auto& b) {
                     return a.second > b.second;
                   });
  std::vector<std::string> tokens = {std::string(kPad)};
  for (int n = 0; n < num_position_tokens; ++n) {
    tokens.push_back("[unused" + std::to_string(n) + "]");
  }
  for (auto t : {kUnk, kCls, kSep, kMask}) tokens.emplace_back(t);
  int added = 0;
  for (const auto& [w, c] : words) {
    if (c < min_count || added >= max_words) break;
    if (w.front() == '[' && w.back() == ']') continue;
    tokens.push_back(w);
    ++added;
  }
  return FromTokens(std::move(tokens));
}

std::vector<std::string> Tokenizer::BasicTokens(std::string_view text) const {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) out.push_back(std::move(current));
    current.clear();
  };
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      flush();
    } else if (c < 0x80 && std::ispunct(c)) {
      flush();
      out.emplace_back(1, static_cast<char>(c));
    } else {
      current += static_cast<char>(std::tolower(c));
    }
  }
  flush();
  return out;
}

std::vector<int> Tokenizer::Encode(std::string_view text) const {
  std::vector<int> ids;
  for (const std::string& word : BasicTokens(text)) {
    // Greedy longest-match WordPiece.
    std::vector<int> pieces;
    size_t start = 0;
    bool bad = false;
    while (start < word.size()) {
      size_t end = word.size();
      int found = -1;
      while (end > start) {
        std::string sub = word.substr(start, end - start);
        if (start > 0) sub = "##" + sub;
        auto it = ids_.find(sub);
        if (it != ids_.end()) {
          found = it->second;
          break;
        }
        --end;
      }
      if (found < 0) {
        bad = true;
        break;
      }
      pieces.push_back(found);
      start = end;
    }
    if (bad) {
      ids.push_back(unk_id_);
    } else {
      ids.insert(ids.end(), pieces.begin(), pieces.end());
    }
  }
  return ids;
}

int Tokenizer::Id(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  return it == ids_.end() ? unk_id_ : it->second;
}

bool Tokenizer::Contains(std::string_view token) const {
  return ids_.count(std::string(token)) > 0;
}

int Tokenizer::PositionTokenId(int position) const {
  if (position_ids_.empty()) {
    throw ConfigError("vocabulary has no [unusedN] position tokens");
  }
  const int n = std::clamp(position, 0,
                           static_cast<int>(position_ids_.size()) - 1);
  return position_ids_[n];
}

std::string Tokenizer::Serialize() const {
  std::string out;
  for (const auto& t : tokens_) out += t + "\n";
  return out;
}

void Tokenizer::Save(const std::filesystem::path& path) const {
  WriteFile(path, Serialize());
}

std::string Tokenizer::Fingerprint() const {
  return factcheck::Fingerprint(Serialize());
}

}  // namespace factcheck
