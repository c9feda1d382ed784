// Copyright 2026 The DPGT Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpgt/rng.h"

#include <cmath>
#include <vector>

#include "dpgt/engine.h"
#include "gtest/gtest.h"

namespace dpgt {
namespace {

TEST(KeyedStreamTest, SameKeySameSequence) {
  KeyedStream a(7, 2, 11, Role::kZeta), b(7, 2, 11, Role::kZeta);
  for (int t = 0; t < 100; ++t) EXPECT_EQ(a(), b());
}

TEST(KeyedStreamTest, KeysAreIndependentOfCallOrder) {
  KeyedStream first(3, 0, 0, Role::kEta);
  const uint64_t want = first();
  KeyedStream other(3, 1, 0, Role::kEta);
  for (int t = 0; t < 10; ++t) other();
  KeyedStream again(3, 0, 0, Role::kEta);
  EXPECT_EQ(again(), want);
}

TEST(KeyedStreamTest, DistinctRolesDiffer) {
  EXPECT_NE(HashKey(1, 0, 0, Role::kZeta), HashKey(1, 0, 0, Role::kEta));
  EXPECT_NE(HashKey(1, 0, 0, Role::kZeta), HashKey(1, 1, 0, Role::kZeta));
  EXPECT_NE(HashKey(1, 0, 0, Role::kZeta), HashKey(1, 0, 1, Role::kZeta));
}

TEST(KeyedStreamTest, FrozenFirstDraw) {
  // Guards the stream definition against accidental change.
  EXPECT_EQ(SplitMix64(0), 0xe220a8397b1dcdafULL);
}

TEST(KeyedStreamTest, BelowIsUniform) {
  KeyedStream s(5, 0, 0, Role::kMisc);
  std::vector<int> counts(7, 0);
  const int draws = 70000;
  for (int t = 0; t < draws; ++t) ++counts[s.Below(7)];
  for (int c : counts) EXPECT_NEAR(c, draws / 7.0, 5.0 * std::sqrt(draws / 7.0));
}

TEST(LaplaceTest, MomentsAtUnitScale) {
  KeyedStream s(11, 0, 0, Role::kMisc);
  const int draws = 1000000;
  double sum = 0.0, sum_abs = 0.0, sum_sq = 0.0;
  for (int t = 0; t < draws; ++t) {
    auto x = LaplaceSample(1.0, s);
    ASSERT_TRUE(x.ok());
    sum += *x;
    sum_abs += std::abs(*x);
    sum_sq += *x * *x;
  }
  EXPECT_NEAR(sum / draws, 0.0, 0.01);
  EXPECT_NEAR(sum_sq / draws, 2.0, 0.01);
  EXPECT_NEAR(sum_abs / draws, 1.0, 0.005);
}

TEST(LaplaceTest, RejectsNonPositiveScale) {
  KeyedStream s(1, 0, 0, Role::kMisc);
  EXPECT_FALSE(LaplaceSample(0.0, s).ok());
  EXPECT_FALSE(LaplaceSample(-1.0, s).ok());
}

TEST(LaplaceTest, ZeroScaleIsExactlyZeroAndConsumesADraw) {
  KeyedStream a(1, 0, 0, Role::kZeta), b(1, 0, 0, Role::kZeta);
  EXPECT_EQ(a.Laplace(0.0), 0.0);
  b();
  EXPECT_EQ(a(), b());
}

TEST(LaplaceTest, SmallScaleShrinks) {
  KeyedStream s(2, 0, 0, Role::kMisc);
  for (int t = 0; t < 1000; ++t) EXPECT_LE(std::abs(s.Laplace(1e-9)), 1e-7);
}

}  // namespace
}  // namespace dpgt
