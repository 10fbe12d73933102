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

#include "factcheck/error.h"
#include "gtest/gtest.h"
#include "testing/fixtures.h"

namespace factcheck {
namespace {

TEST(ParameterStoreTest, SerializeRoundTripIsBitExact) {
  ParameterStore store;
  Rng rng(1);
  store.CreateUniform("w", 3, 4, 0.5, rng);
  store.CreateConstant("g", 1, 4, 1.0);
  store.Create("b", 1, 4);
  const std::string bytes = store.Serialize();
  const ParameterStore loaded = ParameterStore::Deserialize(bytes);
  EXPECT_EQ(loaded.Serialize(), bytes);
  EXPECT_EQ(loaded.Get("w").value, store.Get("w").value);
  EXPECT_EQ(store.NumScalars(), 20u);
}

TEST(ParameterStoreTest, RejectsCorruptBlob) {
  EXPECT_THROW(ParameterStore::Deserialize("not a blob"), Error);
}

TEST(ParameterStoreTest, CopyIsDeep) {
  ParameterStore a;
  a.CreateConstant("x", 1, 1, 2.0);
  ParameterStore b = a;
  b.Get("x").value(0, 0) = 5.0;
  EXPECT_EQ(a.Get("x").value(0, 0), 2.0);
  a.CopyValuesFrom(b);
  EXPECT_EQ(a.Get("x").value(0, 0), 5.0);
}

TEST(ParameterStoreTest, SaveLoad) {
  ParameterStore a;
  a.CreateConstant("x", 2, 2, 0.25);
  const auto dir = testing::TempDir("params");
  a.Save(dir / "p.bin");
  EXPECT_EQ(ParameterStore::Load(dir / "p.bin").Serialize(), a.Serialize());
}

}  // namespace
}  // namespace factcheck
