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

#include "mrlwe/modarith.h"

#include <random>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

namespace mrlwe {
namespace {

using ::testing::ElementsAre;

bool TrialDivisionPrime(Uint64 n) {
  if (n < 2) return false;
  for (Uint64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

TEST(ModArithTest, PrimalityAgreesWithTrialDivision) {
  for (Uint64 n = 0; n < 20000; ++n) {
    EXPECT_EQ(IsPrime(n), TrialDivisionPrime(n)) << n;
  }
  EXPECT_TRUE(IsPrime(4611686018427387847ULL));  // 2^62 - 57
  EXPECT_FALSE(IsPrime(3215031751ULL));          // strong pseudoprime to 2,3,5,7
}

TEST(ModArithTest, InverseRoundTrips) {
  const Uint64 q = 1000003;
  for (Uint64 a = 1; a < 2000; ++a) {
    EXPECT_EQ(MulMod(a, InvMod(a, q), q), 1u);
  }
  EXPECT_THROW(InvMod(6, 9), std::invalid_argument);
}

TEST(ModArithTest, ReduceSignedAndCenteredLift) {
  EXPECT_EQ(ReduceSigned(-1, 13), 12u);
  EXPECT_EQ(ReduceSigned(-26, 13), 0u);
  EXPECT_EQ(ReduceSigned(INT64_MIN, 7), static_cast<Uint64>(
      ((INT64_MIN % 7) + 7) % 7));
  EXPECT_EQ(CenteredLift(6, 13), 6);
  EXPECT_EQ(CenteredLift(7, 13), -6);
  EXPECT_EQ(CenteredLift(2, 4), 2);
  EXPECT_EQ(CenteredLift(3, 4), -1);
}

TEST(ModArithTest, UnitsAndPhi) {
  EXPECT_THAT(Units(8), ElementsAre(1, 3, 5, 7));
  EXPECT_THAT(Units(9), ElementsAre(1, 2, 4, 5, 7, 8));
  for (Uint64 m = 2; m < 300; ++m) EXPECT_EQ(Units(m).size(), EulerPhi(m));
}

TEST(ModArithTest, OrdersAndGenerators) {
  EXPECT_EQ(MultiplicativeOrder(3, 17), 16u);
  EXPECT_EQ(MultiplicativeOrder(9, 17), 8u);
  EXPECT_EQ(MultiplicativeOrder(5, 13), 4u);
  EXPECT_EQ(FindGenerator(17), 3u);
  EXPECT_EQ(FindGenerator(13), 2u);
  for (Uint64 q : {7ULL, 97ULL, 257ULL, 7681ULL, 67108289ULL}) {
    EXPECT_EQ(MultiplicativeOrder(FindGenerator(q), q), q - 1);
  }
}

TEST(ModArithTest, CyclotomicPolynomials) {
  EXPECT_THAT(CyclotomicPolynomial(4), ElementsAre(1, 0, 1));
  EXPECT_THAT(CyclotomicPolynomial(3), ElementsAre(1, 1, 1));
  EXPECT_THAT(CyclotomicPolynomial(6), ElementsAre(1, -1, 1));
  EXPECT_THAT(CyclotomicPolynomial(9), ElementsAre(1, 0, 0, 1, 0, 0, 1));
  EXPECT_THAT(CyclotomicPolynomial(12), ElementsAre(1, 0, -1, 0, 1));
  std::vector<Int64> phi105 = CyclotomicPolynomial(105);
  ASSERT_EQ(phi105.size(), 49u);
  EXPECT_EQ(phi105[7], -2);  // first cyclotomic with a coefficient of magnitude 2
}

TEST(ModArithTest, CyclotomicRootsAreExactlyPrimitive) {
  // Over F_q with q = 1 mod m, Phi_m vanishes exactly at elements of order m.
  const Uint64 q = 37;
  for (Uint64 m : {2ULL, 3ULL, 4ULL, 6ULL, 9ULL, 12ULL, 18ULL, 36ULL}) {
    std::vector<Int64> phi = CyclotomicPolynomial(m);
    for (Uint64 x = 1; x < q; ++x) {
      Uint64 value = 0;
      for (size_t i = phi.size(); i-- > 0;) {
        value = AddMod(MulMod(value, x, q), ReduceSigned(phi[i], q), q);
      }
      EXPECT_EQ(value == 0, MultiplicativeOrder(x, q) == m) << m << " " << x;
    }
  }
}

TEST(ModArithTest, ShoupAndNarrowPathsAgreeWithWideProduct) {
  std::mt19937_64 gen(7);
  for (Uint64 q : {Uint64{13}, Uint64{257}, Uint64{67108289}, Uint64{4294967311},
                   (Uint64{1} << 61) - 1}) {
    for (int i = 0; i < 20000; ++i) {
      Uint64 a = gen() % q, w = gen() % q;
      Uint64 wide = static_cast<Uint64>(static_cast<Uint128>(a) * w % q);
      EXPECT_EQ(MulMod(a, w, q), wide);
      EXPECT_EQ(MulModShoup(a, w, ShoupPrecompute(w, q), q), wide);
    }
  }
}

}  // namespace
}  // namespace mrlwe
