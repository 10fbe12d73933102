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

#include "factcheck/cli.h"

#include <sstream>

#include "factcheck/corpus.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "testing/fixtures.h"

namespace factcheck {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result Invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int status = Dispatch(args, out, err);
  return {status, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = testing::TempDir("cli");
    data_ = (dir_ / "small.jsonl").string();
    WriteCanonical(data_, testing::SmallCorpus());
  }
  std::string Out(const std::string& name) { return (dir_ / name).string(); }

  fs::path dir_;
  std::string data_;
};

TEST_F(CliTest, ValidateCleanDataset) {
  const Result r = Invoke({"validate", "--dataset", data_, "--out", Out("v")});
  EXPECT_EQ(r.status, kExitOk) << r.err;
  const json v = json::parse(ReadFile(dir_ / "v" / "violations.json"));
  const json m = json::parse(ReadFile(dir_ / "v" / "manifest.json"));
  EXPECT_EQ(m["command"], "validate");
  EXPECT_EQ(m["seed"], 42);
  EXPECT_EQ(m["dataset_fingerprints"].size(), 1u);
}

TEST_F(CliTest, ValidateReportsViolations) {
  auto corpus = testing::SmallCorpus();
  corpus[0].evidence_chains.push_back({99});
  WriteCanonical(dir_ / "bad.jsonl", corpus);
  const Result r = Invoke({"validate", "--dataset", Out("bad.jsonl"), "--out",
                        Out("bad")});
  EXPECT_EQ(r.status, kExitFailure);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(Invoke({"frobnicate"}).status, kExitUsage);
  EXPECT_EQ(Invoke({"stats", "--no-such-flag"}).status, kExitUsage);
  EXPECT_EQ(Invoke({}).status, kExitUsage);
  EXPECT_EQ(Invoke({"even-split", "--level", "page"}).status, kExitUsage);
  EXPECT_EQ(Invoke({"--help"}).status, kExitOk);
  const Result v = Invoke({"--version"});
  EXPECT_EQ(v.status, kExitOk);
  EXPECT_EQ(v.out, ToolVersion() + "\n");
}

TEST_F(CliTest, OperationErrors) {
  EXPECT_EQ(Invoke({"stats", "--dataset", Out("missing.jsonl"), "--out", Out("s")})
                .status,
            kExitFailure);
  EXPECT_EQ(Invoke({"stats", "--dataset", data_}).status, kExitFailure);
  EXPECT_EQ(Invoke({"train", "--dataset", "x=" + data_, "--stages", "y:1", "--out",
                 Out("t")})
                .status,
            kExitFailure);
}

TEST_F(CliTest, StatsAndSplitChains) {
  ASSERT_EQ(Invoke({"stats", "--dataset", data_, "--out", Out("s")}).status, 0);
  const json stats = json::parse(ReadFile(dir_ / "s" / "stats.json"));
  EXPECT_EQ(stats["num_articles"], 5);
  ASSERT_EQ(Invoke({"split-chains", "--dataset", data_, "--out", Out("c")}).status,
            0);
  EXPECT_EQ(LoadChainInstances(dir_ / "c" / "chains.jsonl").size(), 8u);
}

TEST_F(CliTest, AdversarialIsReproducible) {
  for (const char* name : {"a1", "a2"}) {
    const Result r = Invoke({"adversarial", "--dataset", data_, "--level", "chain",
                          "--out", Out(name)});
    ASSERT_EQ(r.status, kExitOk) << r.err;
  }
  EXPECT_EQ(ReadFile(dir_ / "a1" / "instances.jsonl"),
            ReadFile(dir_ / "a2" / "instances.jsonl"));
  EXPECT_TRUE(fs::exists(dir_ / "a1" / "fallbacks.txt"));
}

TEST_F(CliTest, BaselineWritesPredictionsAndMetrics) {
  for (const char* method : {"random", "tfidf-nb"}) {
    const Result r = Invoke({"baseline", "--dataset", data_, "--method", method,
                          "--out", Out(method)});
    ASSERT_EQ(r.status, kExitOk) << method << ": " << r.err;
    const json m = json::parse(ReadFile(dir_ / method / "metrics.json"));
    EXPECT_TRUE(m.contains("overall"));
  }
}

TEST_F(CliTest, TrainThenEvaluateCheckpoint) {
  WriteFile(dir_ / "tiny.cfg",
            "hops = 1\nhop_hidden = 8\nencoder_layers = 1\nencoder_hidden = 8\n"
            "encoder_heads = 1\nencoder_ffn = 16\nmax_node_len = 24\n");
  const Result t = Invoke({"train", "--dataset", "politihop=" + data_, "--stages",
                        "politihop:1", "--config", Out("tiny.cfg"), "--out",
                        Out("t")});
  ASSERT_EQ(t.status, kExitOk) << t.err;
  EXPECT_NE(t.out.find("deviation:"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "t" / "checkpoint" / "params.bin"));
  const Result e = Invoke({"evaluate", "--dataset", data_, "--split", "test",
                        "--checkpoint", Out("t/checkpoint"), "--out", Out("e")});
  ASSERT_EQ(e.status, kExitOk) << e.err;
  const json m = json::parse(ReadFile(dir_ / "e" / "metrics.json"));
  EXPECT_LE(m["overall"]["fever_score"].get<double>(),
            m["overall"]["label_accuracy"].get<double>());
}

TEST_F(CliTest, Agreement) {
  WriteFile(dir_ / "ann.tsv", "i1\tA\tA\ni2\tA\tB\ni3\tB\tB\ni4\tB\tA\n");
  const Result r = Invoke({"agreement", "--annotations", Out("ann.tsv"), "--out",
                        Out("g")});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  const json j = json::parse(ReadFile(dir_ / "g" / "agreement.json"));
  EXPECT_NEAR(j["krippendorff_alpha"].get<double>(), 0.125, 1e-12);
}

}  // namespace
}  // namespace factcheck
