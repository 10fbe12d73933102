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

#ifndef FACTCHECK_TOKENIZER_H_
#define FACTCHECK_TOKENIZER_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace factcheck {

// WordPiece tokenizer over a BERT-style vocabulary file (one token per line,
// line number = id). Text is lowercased and split on whitespace and
// punctuation before greedy longest-match subword lookup.
class Tokenizer {
 public:
  static constexpr std::string_view kPad = "[PAD]";
  static constexpr std::string_view kUnk = "[UNK]";
  static constexpr std::string_view kCls = "[CLS]";
  static constexpr std::string_view kSep = "[SEP]";
  static constexpr std::string_view kMask = "[MASK]";

  static Tokenizer FromTokens(std::vector<std::string> tokens);
  static Tokenizer Load(const std::filesystem::path& path);

  // Builds a whole-word vocabulary laid out like BERT's: [PAD], then
  // num_position_tokens [unusedN] entries, [UNK], [CLS], [SEP], [MASK], then
  // words with count >= min_count in descending frequency (ties
  // alphabetical), at most max_words of them.
  static Tokenizer Build(const std::vector<std::string>& texts,
                         int min_count = 1, int max_words = 30000,
                         int num_position_tokens = 128);

  std::vector<std::string> BasicTokens(std::string_view text) const;
  std::vector<int> Encode(std::string_view text) const;

  int Id(std::string_view token) const;  // kUnk id when absent
  bool Contains(std::string_view token) const;
  const std::string& Token(int id) const { return tokens_.at(id); }
  int size() const { return static_cast<int>(tokens_.size()); }

  int pad_id() const { return pad_id_; }
  int unk_id() const { return unk_id_; }
  int cls_id() const { return cls_id_; }
  int sep_id() const { return sep_id_; }
  // Reserved token for sentence position n: "[unusedN]", clamped to the
  // highest available position token. Throws if the vocabulary has none.
  int PositionTokenId(int position) const;
  int num_position_tokens() const {
    return static_cast<int>(position_ids_.size());
  }

  std::string Serialize() const;
  void Save(const std::filesystem::path& path) const;
  std::string Fingerprint() const;

 private:
  void Index();

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
  std::vector<int> position_ids_;
  int pad_id_ = -1;
  int unk_id_ = -1;
  int cls_id_ = -1;
  int sep_id_ = -1;
};

}  // namespace factcheck

#endif  // FACTCHECK_TOKENIZER_H_
