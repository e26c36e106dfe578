/*
 * Copyright 2026 The mrlwe Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "mrlwe/params.h"

#include <cmath>
#include <set>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

namespace mrlwe {
namespace {

using ::testing::ElementsAre;

TEST(ParamsTest, SmallFieldTensorIsValid) {
  RingParams p = RingParams::Create({4, 4}, 13);
  EXPECT_TRUE(Validate(p).valid());
  EXPECT_EQ(p.total_degree(), 4u);
  EXPECT_THAT(p.degrees(), ElementsAre(2, 2));
}

TEST(ParamsTest, MissingCongruenceIsReported) {
  RingParams p = RingParams::Create({8, 4}, 7);
  ValidationReport report = Validate(p);
  EXPECT_FALSE(report.valid());
  bool mentions_congruence = false;
  for (const auto& f : report.failures) {
    if (f.find("mod 8") != std::string::npos) mentions_congruence = true;
  }
  EXPECT_TRUE(mentions_congruence);
}

TEST(ParamsTest, RootsMustHaveExactOrder) {
  RingParams p = RingParams::Create({8, 8}, 17);
  EXPECT_TRUE(Validate(p).valid());
  EXPECT_EQ(p.total_degree(), 16u);
  for (Uint64 w : p.roots()) EXPECT_EQ(MultiplicativeOrder(w, 17), 8u);
  // 3 generates (Z/17)^* and so has order 16, not 8.
  EXPECT_FALSE(Validate(RingParams::CreateWithRoots({8, 8}, 17, {3, 3})).valid());
  EXPECT_TRUE(Validate(RingParams::CreateWithRoots({8, 8}, 17, {9, 15})).valid());
}

TEST(ParamsTest, CompositeModulusIsRejected) {
  EXPECT_FALSE(Validate(RingParams::Create({4}, 21)).valid());
  EXPECT_FALSE(Validate(RingParams::Create({2}, 1)).valid());
}

TEST(ParamsTest, BadConductorsThrow) {
  EXPECT_THROW(RingParams::Create({}, 13), std::invalid_argument);
  EXPECT_THROW(RingParams::Create({4, 1}, 13), std::invalid_argument);
}

// x^m - 1 splits into distinct linear factors mod q iff it has m distinct
// roots in F_q.
bool SplitsCompletely(Uint64 m, Uint64 q) {
  Uint64 roots = 0;
  for (Uint64 x = 1; x < q; ++x) {
    if (PowMod(x, m, q) == 1) ++roots;
  }
  return roots == m;
}

TEST(ParamsTest, ValidityMatchesBruteForceSplitting) {
  for (Uint64 q = 2; q <= 100; ++q) {
    if (!IsPrime(q)) continue;
    for (Uint64 m1 = 2; m1 <= 12; ++m1) {
      for (Uint64 m2 = 2; m2 <= 12; ++m2) {
        bool expected = SplitsCompletely(m1, q) && SplitsCompletely(m2, q);
        EXPECT_EQ(Validate(RingParams::Create({m1, m2}, q)).valid(), expected)
            << m1 << "x" << m2 << " q=" << q;
      }
    }
  }
}

TEST(ParamsTest, CanonicalText) {
  RingParams p = RingParams::Create({4, 4}, 13);
  EXPECT_EQ(p.ToString(), "m=4x4;q=13");
  EXPECT_EQ(RingParams::Parse("m=4x4;q=13"), p);
  EXPECT_EQ(RingParams::Parse("m=8x4x3;q=97").ToString(), "m=8x4x3;q=97");
  EXPECT_EQ(RingParams::Parse("m=16;q=97").dims(), 1u);
  for (const char* bad : {"", "m=;q=13", "m=4x;q=13", "m=4x4", "q=13;m=4",
                          "m=4x4;q=13x", "m=ax4;q=13", "m=4x4;q="}) {
    EXPECT_THROW(RingParams::Parse(bad), std::invalid_argument) << bad;
  }
}

TEST(ParamsTest, IndexMapExamples) {
  MixedRadix r({2, 3});
  std::vector<size_t> first = {0, 0};
  EXPECT_EQ(r.Map(first), 0u);
  // One-based (2, 1) -> 2, i.e. zero-based (1, 0) -> 1.
  std::vector<size_t> v = {1, 0};
  EXPECT_EQ(r.Map(v), 1u);
  std::vector<size_t> bad = {2, 0};
  EXPECT_THROW(r.Map(bad), std::out_of_range);
  EXPECT_THROW(r.Unmap(6), std::out_of_range);
}

TEST(ParamsTest, IndexMapIsBijection) {
  for (const auto& radices : std::vector<std::vector<size_t>>{
           {2, 3, 2}, {4, 4}, {7}, {1, 5, 1}, {10, 10, 10, 10}}) {
    MixedRadix r(radices);
    std::set<size_t> seen;
    for (size_t j = 0; j < r.size(); ++j) {
      std::vector<size_t> multi = r.Unmap(j);
      EXPECT_EQ(r.Map(multi), j);
      seen.insert(j);
    }
    EXPECT_EQ(seen.size(), r.size());
  }
  // Exhaustive odometer enumeration of all 12 multi-indices.
  MixedRadix r({2, 3, 2});
  std::set<size_t> images;
  for (size_t a = 0; a < 2; ++a)
    for (size_t b = 0; b < 3; ++b)
      for (size_t c = 0; c < 2; ++c) {
        std::vector<size_t> v = {a, b, c};
        size_t j = r.Map(v);
        EXPECT_EQ(r.Unmap(j), v);
        images.insert(j);
      }
  EXPECT_EQ(images.size(), 12u);
}

TEST(ParamsTest, RateConditions) {
  RingParams p = RingParams::Create({8, 8}, 257);
  SecurityParams sec{.alpha = 0.1, .xi = 0.1, .sample_budget = 4};
  RateReport report = CheckRates(p, sec);
  EXPECT_TRUE(report.alpha_below_rate);
  EXPECT_NEAR(report.rate_bound, std::sqrt(std::log(16.0) / 16.0), 1e-12);
  EXPECT_NEAR(report.xi, 0.1 * std::pow(64.0 / std::log(64.0), 0.25), 1e-12);
  EXPECT_NEAR(report.alpha_q, 25.7, 1e-9);
  EXPECT_TRUE(report.alpha_q_above_floor);

  sec.alpha = 1.0;
  EXPECT_FALSE(CheckRates(p, sec).alpha_below_rate);
  sec.alpha = 0.0;
  EXPECT_THROW(CheckRates(p, sec), std::invalid_argument);
  EXPECT_THROW(sec.CheckValid(), std::invalid_argument);
  SecurityParams inverted{.alpha = 0.2, .xi = 0.1, .sample_budget = 1};
  EXPECT_THROW(inverted.CheckValid(), std::invalid_argument);
}

TEST(ParamsTest, FloorConstantIsConfigurable) {
  RingParams p = RingParams::Create({8, 8}, 17);
  SecurityParams sec{.alpha = 0.1, .xi = 1.0, .sample_budget = 1};
  // alpha q = 1.7 against sqrt(log 16) = 1.665.
  EXPECT_TRUE(CheckRates(p, sec, 1.0).alpha_q_above_floor);
  EXPECT_FALSE(CheckRates(p, sec, 2.0).alpha_q_above_floor);
}

}  // namespace
}  // namespace mrlwe
