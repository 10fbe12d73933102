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

#include "factcheck/import.h"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "factcheck/error.h"
#include "factcheck/text.h"

namespace factcheck {

using nlohmann::json;

std::optional<SourceFormat> ParseSourceFormat(std::string_view name) {
  if (name == "politihop") return SourceFormat::kPolitiHop;
  if (name == "liar_plus" || name == "liar-plus") return SourceFormat::kLiarPlus;
  if (name == "fever") return SourceFormat::kFever;
  return std::nullopt;
}

// ---- KeyValueConfig ----

KeyValueConfig KeyValueConfig::Parse(std::string_view text) {
  KeyValueConfig config;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::string trimmed = Trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    const size_t eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ParseError("config line " + std::to_string(line_number) +
                       ": expected key = value");
    }
    std::string key = Trim(trimmed.substr(0, eq));
    if (key.empty()) {
      throw ParseError("config line " + std::to_string(line_number) +
                       ": empty key");
    }
    config.entries_[key] = Trim(trimmed.substr(eq + 1));
  }
  return config;
}

KeyValueConfig KeyValueConfig::Load(const std::filesystem::path& path) {
  return Parse(ReadFile(path));
}

bool KeyValueConfig::Has(const std::string& key) const {
  return entries_.count(key) > 0;
}

std::optional<std::string> KeyValueConfig::Get(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::GetOr(const std::string& key,
                                  std::string fallback) const {
  auto v = Get(key);
  return v ? *v : std::move(fallback);
}

void KeyValueConfig::Set(const std::string& key, std::string value) {
  entries_[key] = std::move(value);
}

std::map<std::string, std::string> KeyValueConfig::WithPrefix(
    std::string_view prefix) const {
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : entries_) {
    if (k.size() > prefix.size() && k.compare(0, prefix.size(), prefix) == 0) {
      out[k.substr(prefix.size())] = v;
    }
  }
  return out;
}

std::string KeyValueConfig::Serialize() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
  return out;
}

// ---- AdapterConfig ----

namespace {

const std::set<std::string> kCanonicalFields = {
    "id", "claim", "speaker", "label", "sentences", "evidence", "split"};

}  // namespace

AdapterConfig AdapterConfig::Defaults(SourceFormat source) {
  AdapterConfig a;
  a.source = source;
  a.fields = {{"id", "id"},           {"claim", "claim"},
              {"speaker", "speaker"}, {"label", "label"},
              {"sentences", "sentences"}, {"evidence", "evidence_chains"},
              {"split", "split"}};
  for (VeracityLabel l : kAllLabels) a.label_map[std::string(LabelName(l))] = l;
  if (source == SourceFormat::kFever) {
    a.label_map["supports"] = VeracityLabel::kTrue;
    a.label_map["refutes"] = VeracityLabel::kFalse;
    a.label_map["not enough info"] = VeracityLabel::kHalfTrue;
    a.label_map["not-enough-info"] = VeracityLabel::kHalfTrue;
  }
  return a;
}

AdapterConfig AdapterConfig::FromConfig(SourceFormat source,
                                        const KeyValueConfig& config) {
  AdapterConfig a = Defaults(source);
  const std::string format = config.GetOr("format", "jsonl");
  if (format == "tsv") {
    a.tsv = true;
  } else if (format != "jsonl") {
    throw ConfigError("unknown adapter format '" + format + "'");
  }
  const std::string header = config.GetOr("header", "true");
  if (header != "true" && header != "false") {
    throw ConfigError("header must be true or false");
  }
  a.header = header == "true";
  for (const auto& [field, column] : config.WithPrefix("field.")) {
    if (!kCanonicalFields.count(field)) {
      throw ConfigError("unknown canonical field '" + field + "'");
    }
    a.fields[field] = column;
  }
  if (auto split = config.Get("split")) {
    auto parsed = ParseSplit(*split);
    if (!parsed) throw ConfigError("unknown split '" + *split + "'");
    a.constant_split = parsed;
  }
  for (const auto& [source_label, target] : config.WithPrefix("label.")) {
    auto parsed = ParseLabel(target);
    if (!parsed) {
      throw ConfigError("label mapping target '" + target +
                        "' is not a canonical label");
    }
    a.label_map[ToLower(source_label)] = *parsed;
  }
  return a;
}

// ---- Text helpers ----

std::vector<std::string> SplitSentences(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (size_t i = 0; i < text.size(); ++i) {
    current += text[i];
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    size_t j = i + 1;
    while (j < text.size() && (text[j] == '"' || text[j] == '\'' ||
                               text[j] == ')')) {
      current += text[j];
      ++j;
    }
    if (j >= text.size()) {
      i = j - 1;
      continue;
    }
    if (!std::isspace(static_cast<unsigned char>(text[j]))) {
      i = j - 1;
      continue;
    }
    size_t k = j;
    while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k])))
      ++k;
    if (k < text.size()) {
      const unsigned char next = static_cast<unsigned char>(text[k]);
      if (std::isupper(next) || std::isdigit(next) || next == '"' ||
          next == '\'') {
        std::string s = Trim(current);
        if (!s.empty()) out.push_back(s);
        current.clear();
      }
    }
    i = j - 1;
  }
  std::string s = Trim(current);
  if (!s.empty()) out.push_back(s);
  return out;
}

std::vector<std::vector<std::string>> ParseTsv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool row_has_content = false;
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      in_quotes = true;
      row_has_content = true;
    } else if (c == '\t') {
      row.push_back(std::move(field));
      field.clear();
      row_has_content = true;
    } else if (c == '\n') {
      if (!field.empty() && field.back() == '\r') field.pop_back();
      if (row_has_content || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      row_has_content = false;
    } else {
      field += c;
      row_has_content = true;
    }
  }
  if (in_quotes) throw ParseError("unterminated quoted TSV field");
  if (row_has_content || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---- Import ----

namespace {

// A source record viewed through the field mapping, independent of format.
class SourceRecord {
 public:
  SourceRecord(const json* object, const std::vector<std::string>* row,
               const std::map<std::string, int>* columns)
      : object_(object), row_(row), columns_(columns) {}

  // nullopt when the column is absent.
  std::optional<json> Get(const std::string& column) const {
    if (object_) {
      auto it = object_->find(column);
      if (it == object_->end() || it->is_null()) return std::nullopt;
      return *it;
    }
    int index = -1;
    if (columns_) {
      auto it = columns_->find(column);
      if (it == columns_->end()) return std::nullopt;
      index = it->second;
    } else {
      try {
        index = std::stoi(column);
      } catch (const std::exception&) {
        throw ConfigError("column '" + column +
                          "' must be an index for headerless TSV");
      }
    }
    if (index < 0 || index >= static_cast<int>(row_->size())) {
      return std::nullopt;
    }
    return json((*row_)[index]);
  }

 private:
  const json* object_;
  const std::vector<std::string>* row_;
  const std::map<std::string, int>* columns_;
};

std::string AsText(const json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) return std::to_string(value.get<long long>());
  return value.dump();
}

// Text cells may hold JSON (TSV exports of lists and dicts).
json MaybeParseJson(const json& value) {
  if (!value.is_string()) return value;
  const std::string s = Trim(value.get<std::string>());
  if (!s.empty() && (s[0] == '[' || s[0] == '{')) {
    try {
      return json::parse(s);
    } catch (const json::exception&) {
      // Python-style single quotes are common in pandas exports.
      std::string fixed = s;
      std::replace(fixed.begin(), fixed.end(), '\'', '"');
      try {
        return json::parse(fixed);
      } catch (const json::exception&) {
        return value;
      }
    }
  }
  return value;
}

int ChainElement(const json& v) {
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_string()) {
    const std::string s = Trim(v.get<std::string>());
    try {
      size_t used = 0;
      int value = std::stoi(s, &used);
      if (used == s.size()) return value;
    } catch (const std::exception&) {
    }
    throw ParseError("evidence element '" + s + "' is not an index");
  }
  if (v.is_array() && !v.empty()) return ChainElement(v.back());
  throw ParseError("evidence element " + v.dump() + " is not an index");
}

std::vector<Chain> ParseChains(const json& raw) {
  const json value = MaybeParseJson(raw);
  std::vector<Chain> chains;
  auto add_chain = [&](const json& chain_value) {
    const json c = MaybeParseJson(chain_value);
    std::set<int> indices;
    if (c.is_array()) {
      for (const json& e : c) indices.insert(ChainElement(e));
    } else {
      indices.insert(ChainElement(c));
    }
    if (!indices.empty()) chains.emplace_back(indices.begin(), indices.end());
  };
  if (value.is_array()) {
    for (const json& c : value) add_chain(c);
  } else if (value.is_object()) {
    for (const auto& [key, c] : value.items()) add_chain(c);
  } else if (value.is_string() && Trim(value.get<std::string>()).empty()) {
    // no evidence
  } else {
    throw ParseError("evidence must be a list or object of chains");
  }
  return chains;
}

std::vector<std::string> ParseSentences(const json& raw) {
  const json value = MaybeParseJson(raw);
  if (value.is_array()) {
    std::vector<std::string> out;
    for (const json& s : value) out.push_back(AsText(s));
    return out;
  }
  return SplitSentences(AsText(value));
}

ArticleInstance ConvertRecord(const SourceRecord& record,
                              const AdapterConfig& adapter, int row_number,
                              bool* no_chains) {
  auto column = [&](const char* field) -> const std::string& {
    return adapter.fields.at(field);
  };
  auto required = [&](const char* field) -> json {
    auto value = record.Get(column(field));
    if (!value) {
      throw ConfigError("record " + std::to_string(row_number) +
                        ": missing mapped column '" + column(field) +
                        "' for field " + field);
    }
    return *value;
  };
  ArticleInstance a;
  if (auto id = record.Get(column("id"))) {
    a.id = AsText(*id);
  } else {
    a.id = "row-" + std::to_string(row_number);
  }
  a.claim = AsText(required("claim"));
  if (auto speaker = record.Get(column("speaker"))) a.speaker = AsText(*speaker);
  const std::string label = Trim(AsText(required("label")));
  auto it = adapter.label_map.find(ToLower(label));
  if (it == adapter.label_map.end()) {
    throw ValidationError("record " + a.id + ": unknown source label '" +
                          label + "'");
  }
  a.label = it->second;
  a.sentences = ParseSentences(required("sentences"));
  a.evidence_chains = ParseChains(required("evidence"));
  if (adapter.constant_split) {
    a.split = *adapter.constant_split;
  } else if (auto split = record.Get(column("split"))) {
    auto parsed = ParseSplit(ToLower(Trim(AsText(*split))));
    if (!parsed) {
      throw ValidationError("record " + a.id + ": unknown split '" +
                            AsText(*split) + "'");
    }
    a.split = *parsed;
  }
  *no_chains = a.evidence_chains.empty();
  return a;
}

void Accept(ArticleInstance article, bool no_chains, ImportResult* result) {
  if (no_chains) {
    result->rejected_ids.push_back(article.id);
    return;
  }
  auto violations = ValidateInstance(article);
  if (!violations.empty()) {
    throw ValidationError(FormatViolation(violations.front()));
  }
  result->dataset.push_back(std::move(article));
}

}  // namespace

ImportResult ImportText(std::string_view text, const AdapterConfig& adapter) {
  ImportResult result;
  if (!adapter.tsv) {
    std::istringstream in{std::string(text)};
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
      ++line_number;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      json object;
      try {
        object = json::parse(line);
      } catch (const json::exception& e) {
        throw ParseError("line " + std::to_string(line_number) + ": " +
                         e.what());
      }
      if (!object.is_object()) {
        throw ParseError("line " + std::to_string(line_number) +
                         ": record is not an object");
      }
      bool no_chains = false;
      SourceRecord record(&object, nullptr, nullptr);
      ArticleInstance a;
      try {
        a = ConvertRecord(record, adapter, line_number, &no_chains);
      } catch (const ParseError& e) {
        throw ParseError("line " + std::to_string(line_number) + ": " +
                         e.what());
      }
      Accept(std::move(a), no_chains, &result);
    }
    return result;
  }
  auto rows = ParseTsv(text);
  std::map<std::string, int> columns;
  size_t first = 0;
  if (adapter.header) {
    if (rows.empty()) return result;
    for (size_t i = 0; i < rows[0].size(); ++i) {
      columns[Trim(rows[0][i])] = static_cast<int>(i);
    }
    first = 1;
  }
  for (size_t r = first; r < rows.size(); ++r) {
    SourceRecord record(nullptr, &rows[r], adapter.header ? &columns : nullptr);
    bool no_chains = false;
    ArticleInstance a;
    try {
      a = ConvertRecord(record, adapter, static_cast<int>(r + 1), &no_chains);
    } catch (const ParseError& e) {
      throw ParseError("row " + std::to_string(r + 1) + ": " + e.what());
    }
    Accept(std::move(a), no_chains, &result);
  }
  return result;
}

ImportResult ImportDataset(SourceFormat source,
                           const std::filesystem::path& path,
                           const AdapterConfig& adapter) {
  AdapterConfig effective = adapter;
  effective.source = source;
  return ImportText(ReadFile(path), effective);
}

}  // namespace factcheck
