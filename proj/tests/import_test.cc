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

#include "factcheck/error.h"
#include "gtest/gtest.h"

namespace factcheck {
namespace {

TEST(KeyValueConfigTest, ParsesCommentsAndPrefixes) {
  const auto kv = KeyValueConfig::Parse(
      "# adapter\nformat = tsv\nfield.claim = statement\nlabel.Pants-Fire = "
      "false\n");
  EXPECT_EQ(kv.GetOr("format", ""), "tsv");
  EXPECT_EQ(kv.WithPrefix("field.").at("claim"), "statement");
  EXPECT_FALSE(kv.Has("missing"));
  EXPECT_THROW(KeyValueConfig::Parse("no equals sign"), ParseError);
  EXPECT_EQ(KeyValueConfig::Parse(kv.Serialize()).entries(), kv.entries());
}

TEST(ImportTest, JsonlWithListEvidence) {
  const std::string text =
      R"({"id":"p1","claim":"C","speaker":"S","label":"half-true",)"
      R"("sentences":["a.","b.","c."],"evidence_chains":[[0,2],[1]],)"
      R"("split":"train"})"
      "\n";
  const auto r = ImportText(text, AdapterConfig::Defaults(SourceFormat::kPolitiHop));
  ASSERT_EQ(r.dataset.size(), 1u);
  EXPECT_EQ(r.dataset[0].label, VeracityLabel::kHalfTrue);
  EXPECT_EQ(r.dataset[0].evidence_chains, (std::vector<Chain>{{0, 2}, {1}}));
}

TEST(ImportTest, FeverLabelsAndEvidenceTuples) {
  const std::string text =
      R"({"id":7,"claim":"C","label":"NOT ENOUGH INFO","sentences":["a.","b."],)"
      R"("evidence_chains":[[["Page",1]]],"split":"train"})"
      "\n"
      R"({"id":8,"claim":"C","label":"SUPPORTS","sentences":["a.","b."],)"
      R"("evidence_chains":[[["Page",0],["Page",1]]],"split":"train"})"
      "\n";
  const auto r = ImportText(text, AdapterConfig::Defaults(SourceFormat::kFever));
  ASSERT_EQ(r.dataset.size(), 2u);
  EXPECT_EQ(r.dataset[0].label, VeracityLabel::kHalfTrue);
  EXPECT_EQ(r.dataset[1].label, VeracityLabel::kTrue);
  EXPECT_EQ(r.dataset[1].evidence_chains, (std::vector<Chain>{{0, 1}}));
}

TEST(ImportTest, RecordsWithoutChainsAreRejected) {
  const std::string text =
      R"({"id":"x","claim":"C","label":"true","sentences":["a."],"evidence_chains":[]})"
      "\n";
  const auto r = ImportText(text, AdapterConfig::Defaults(SourceFormat::kPolitiHop));
  EXPECT_TRUE(r.dataset.empty());
  EXPECT_EQ(r.rejected_ids, (std::vector<std::string>{"x"}));
}

TEST(ImportTest, UnknownLabelIsListed) {
  const std::string text =
      R"({"id":"x","claim":"C","label":"barely-true","sentences":["a."],"evidence_chains":[[0]]})"
      "\n";
  try {
    ImportText(text, AdapterConfig::Defaults(SourceFormat::kLiarPlus));
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("barely-true"), std::string::npos);
  }
}

TEST(ImportTest, TsvWithLabelMapAndMissingColumn) {
  KeyValueConfig kv = KeyValueConfig::Parse(
      "format = tsv\nfield.claim = statement\nfield.sentences = justification\n"
      "field.evidence = evidence\nlabel.barely-true = half-true\n"
      "label.pants-fire = false\nsplit = test\n");
  const auto adapter = AdapterConfig::FromConfig(SourceFormat::kLiarPlus, kv);
  const std::string text =
      "id\tstatement\tspeaker\tlabel\tjustification\tevidence\n"
      "l1\tTaxes rose.\tBob\tbarely-true\tFirst. Second! Third?\t[[0,1]]\n"
      "l2\tJobs fell.\t\tpants-fire\t\"One, quoted. Two.\"\t[[1]]\n";
  const auto r = ImportText(text, adapter);
  ASSERT_EQ(r.dataset.size(), 2u);
  EXPECT_EQ(r.dataset[0].sentences.size(), 3u);
  EXPECT_EQ(r.dataset[0].split, Split::kTest);
  EXPECT_EQ(r.dataset[1].label, VeracityLabel::kFalse);
  EXPECT_EQ(r.dataset[1].sentences.size(), 2u);

  kv.Set("field.claim", "nonexistent");
  EXPECT_THROW(
      ImportText(text, AdapterConfig::FromConfig(SourceFormat::kLiarPlus, kv)),
      ConfigError);
}

TEST(ImportTest, AdapterRejectsUnknownField) {
  EXPECT_THROW(AdapterConfig::FromConfig(
                   SourceFormat::kPolitiHop,
                   KeyValueConfig::Parse("field.verdict = x\n")),
               ConfigError);
}

TEST(SplitSentencesTest, SplitsOnTerminators) {
  EXPECT_EQ(SplitSentences("One. Two! Three?"),
            (std::vector<std::string>{"One.", "Two!", "Three?"}));
}

TEST(ParseTsvTest, QuotedFields) {
  const auto rows = ParseTsv("a\t\"b\tc\"\td\n");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"a", "b\tc", "d"}));
}

}  // namespace
}  // namespace factcheck
