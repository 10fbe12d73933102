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

#ifndef FACTCHECK_IMPORT_H_
#define FACTCHECK_IMPORT_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "factcheck/corpus.h"

namespace factcheck {

enum class SourceFormat { kPolitiHop, kLiarPlus, kFever };

std::optional<SourceFormat> ParseSourceFormat(std::string_view name);

// Parsed "key = value" file. Lines starting with '#' are comments.
class KeyValueConfig {
 public:
  static KeyValueConfig Parse(std::string_view text);
  static KeyValueConfig Load(const std::filesystem::path& path);

  bool Has(const std::string& key) const;
  std::optional<std::string> Get(const std::string& key) const;
  std::string GetOr(const std::string& key, std::string fallback) const;
  void Set(const std::string& key, std::string value);
  // Keys starting with prefix, prefix stripped.
  std::map<std::string, std::string> WithPrefix(std::string_view prefix) const;
  const std::map<std::string, std::string>& entries() const {
    return entries_;
  }
  std::string Serialize() const;

 private:
  std::map<std::string, std::string> entries_;
};

// Describes how to read one source file into canonical records.
//
//   format = jsonl | tsv
//   header = true | false         (tsv only; false means columns are indices)
//   field.<canonical> = <column>  canonical in {id, claim, speaker, label,
//                                 sentences, evidence, split}
//   split = train|dev|test        constant split when no split column
//   label.<source value> = false|half-true|true   (matched case-insensitively)
//
// Missing optional columns (speaker) import as empty text. A sentences value
// that is a JSON list is used as is; plain text is sentence-split. Evidence
// may be a list of chains or an object whose values are chains; a chain
// element may be an integer, a numeric string, or a list whose last element
// is the sentence index (FEVER evidence tuples).
struct AdapterConfig {
  SourceFormat source = SourceFormat::kPolitiHop;
  bool tsv = false;
  bool header = true;
  std::map<std::string, std::string> fields;
  std::optional<Split> constant_split;
  std::map<std::string, VeracityLabel> label_map;  // keys lowercased

  // Defaults for a source: identity field names and the built-in label
  // table (FEVER: supports->true, refutes->false, not enough info->half-true).
  static AdapterConfig Defaults(SourceFormat source);
  // Overlays config entries on the source defaults; throws ConfigError on
  // unknown canonical fields or labels.
  static AdapterConfig FromConfig(SourceFormat source,
                                  const KeyValueConfig& config);
};

struct ImportResult {
  std::vector<ArticleInstance> dataset;
  // Records dropped because they carried no evidence chain.
  std::vector<std::string> rejected_ids;
};

ImportResult ImportText(std::string_view text, const AdapterConfig& adapter);
ImportResult ImportDataset(SourceFormat source,
                           const std::filesystem::path& path,
                           const AdapterConfig& adapter);

// Splits running text at '.', '!' or '?' followed by whitespace and an
// uppercase letter, digit or quote.
std::vector<std::string> SplitSentences(std::string_view text);

// Tab-separated rows with double-quote escaping.
std::vector<std::vector<std::string>> ParseTsv(std::string_view text);

}  // namespace factcheck

#endif  // FACTCHECK_IMPORT_H_
