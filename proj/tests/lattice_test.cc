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


#include "mrlwe/lattice.h"

#include <cmath>
#include <limits>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "mrlwe/rng.h"

namespace mrlwe {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

EmbeddingContextPtr Emb(std::vector<Uint64> m) {
  return EmbeddingContext::Create(RingParams::Create(std::move(m), 2));
}

// Minimum bound helpers for an ideal with norm N in an n-dimensional field
// with discriminant disc, in l_p.
double Lower(double p, size_t n, double norm) {
  double np = std::isinf(p) ? 1.0 : std::pow(static_cast<double>(n), 1.0 / p);
  return np * std::pow(norm, 1.0 / n);
}
double Upper(double p, size_t n, double norm, double disc) {
  return Lower(p, n, norm) * std::sqrt(std::pow(disc, 1.0 / n));
}

TEST(LatticeTest, IntegerLatticeMinimum) {
  for (size_t n : {1u, 2u, 4u, 8u}) {
    auto lat = LatticeInstance::Create(Eigen::MatrixXd::Identity(n, n), "Z^n");
    EXPECT_NEAR(BruteForceLambda1(lat, 2.0, 1.5).length, 1.0, 1e-12);
    EXPECT_NEAR(BruteForceLambda1(lat, kInf, 1.5).length, 1.0, 1e-12);
    EXPECT_NEAR(lat.Determinant(), 1.0, 1e-12);
  }
  EXPECT_THROW(LatticeInstance::Create(Eigen::MatrixXd::Zero(2, 2), "zero"),
               std::invalid_argument);
  auto lat = LatticeInstance::Create(Eigen::MatrixXd::Identity(2, 2) * 3.0, "3Z^2");
  EXPECT_THROW(BruteForceLambda1(lat, 2.0, 1.0), std::runtime_error);
}

TEST(LatticeTest, EnumerationCountsMatchGaussCircle) {
  auto basis = Eigen::MatrixXd::Identity(2, 2);
  size_t count = 0;
  EnumerateLattice(basis, Eigen::VectorXd::Zero(2), 5.0,
                   [&](const std::vector<Int64>&, const Eigen::VectorXd&) { ++count; });
  EXPECT_EQ(count, 81u);  // points of Z^2 with x^2 + y^2 <= 25
  EXPECT_THROW(EnumerateLattice(basis, Eigen::VectorXd::Zero(2), 100.0,
                                [](const std::vector<Int64>&, const Eigen::VectorXd&) {}, 1000),
               EnumerationOverflow);
}

TEST(LatticeTest, IdealTwoInGaussianIntegers) {
  auto ctx = Emb({4});
  IdealLattice ideal = BuildIdealLattice(*ctx, {{2, 0}}, "<2> in Z[i]");
  EXPECT_EQ(ideal.norm, 4);
  double lambda = BruteForceLambda1(ideal.lattice, 2.0, 10.0).length;
  EXPECT_NEAR(lambda, 2.0 * std::sqrt(2.0), 1e-9);
  IdealLattice ring = BuildIdealLattice(*ctx, {{1, 0}}, "Z[i]");
  EXPECT_NEAR(lambda, 2.0 * BruteForceLambda1(ring.lattice, 2.0, 10.0).length, 1e-9);
}

TEST(LatticeTest, UnimodularInvariance) {
  auto ctx = Emb({8});
  IdealLattice ideal = BuildIdealLattice(*ctx, {{17, 0, 0, 0}, {-2, 1, 0, 0}}, "<17, x - 2>");
  Eigen::MatrixXi u(4, 4);
  u << 1, 3, 0, 0, 0, 1, 0, 0, 2, -1, 1, 5, 0, 0, 0, 1;
  LatticeInstance other = ideal.lattice.Transform(u);
  for (double p : {2.0, kInf}) {
    EXPECT_NEAR(BruteForceLambda1(ideal.lattice, p, 20.0).length,
                BruteForceLambda1(other, p, 20.0).length, 1e-9);
  }
  EXPECT_NEAR(ideal.lattice.Determinant(), other.Determinant(), 1e-6);
}

TEST(LatticeTest, HermiteNormalForm) {
  auto hnf = HermiteNormalForm({{2, 4}, {3, 5}, {4, 6}});
  EXPECT_THAT(hnf, ::testing::ElementsAre(::testing::ElementsAre(1, 1),
                                          ::testing::ElementsAre(0, 2)));
  auto rank_deficient = HermiteNormalForm({{1, 2}, {2, 4}});
  EXPECT_EQ(rank_deficient.size(), 1u);
}

TEST(LatticeTest, DiscriminantOracle) {
  // |disc Q(zeta_m)| for m = 4, 8, 3, 5 is 4, 256, 3, 125.
  EXPECT_NEAR(Discriminant(*Emb({4})), 4.0, 1e-9);
  EXPECT_NEAR(Discriminant(*Emb({8})), 256.0, 1e-6);
  EXPECT_NEAR(Discriminant(*Emb({3})), 3.0, 1e-9);
  EXPECT_NEAR(Discriminant(*Emb({5})), 125.0, 1e-6);
  // Tensor rule disc_1^{n_2} disc_2^{n_1}.
  EXPECT_NEAR(Discriminant(*Emb({4, 4})), 16.0 * 16.0, 1e-6);
  EXPECT_NEAR(Discriminant(*Emb({4, 3})), std::pow(4.0, 2) * std::pow(3.0, 2), 1e-6);
}

struct IdealCase {
  std::vector<Uint64> m;
  std::vector<std::vector<Int64>> generators;
  std::string label;
};

std::vector<IdealCase> IdealSuite() {
  return {
      {{4}, {{2, 0}}, "<2> in Z[i]"},
      {{4}, {{1, 1}}, "<1+x> in Z[i]"},
      {{4}, {{2, 1}}, "<2+x> in Z[i]"},
      {{3}, {{7, 0}, {-2, 1}}, "<7, x-2> in Z[zeta_3]"},
      {{8}, {{1, 1, 0, 0}}, "<1+x> in Z[zeta_8]"},
      {{8}, {{17, 0, 0, 0}, {-2, 1, 0, 0}}, "<17, x-2> in Z[zeta_8]"},
      {{5}, {{11, 0, 0, 0}, {-3, 1, 0, 0}}, "<11, x-3> in Z[zeta_5]"},
      {{12}, {{13, 0, 0, 0}, {-2, 1, 0, 0}}, "<13, x-2> in Z[zeta_12]"},
      {{16}, {{1, 1, 0, 0, 0, 0, 0, 0}}, "<1+x> in Z[zeta_16]"},
      {{4, 4}, {{2, 0, 0, 0}}, "<2> in Z[i] x Z[i]"},
      {{4, 4}, {{1, 1, 0, 0}}, "<1+x> in Z[i] x Z[i]"},
      {{4, 4}, {{1, 1, 1, 1}}, "<(1+x)(1+y)> in Z[i] x Z[i]"},
      {{4, 4}, {{3, 0, 0, 0}}, "<3> in Z[i] x Z[i]"},
  };
}

TEST(LatticeTest, MinimumBoundsHoldOnSuite) {
  for (const IdealCase& c : IdealSuite()) {
    auto ctx = Emb(c.m);
    IdealLattice ideal = BuildIdealLattice(*ctx, c.generators, c.label);
    const size_t n = ctx->n();
    const double disc = Discriminant(*ctx);
    const double norm = static_cast<double>(ideal.norm);
    // Volume identity det sigma(I) = N(I) sqrt(disc).
    EXPECT_NEAR(ideal.lattice.Determinant(), norm * std::sqrt(disc),
                1e-6 * norm * std::sqrt(disc)) << c.label;
    for (double p : {2.0, kInf}) {
      double upper = Upper(p, n, norm, disc);
      double lambda = BruteForceLambda1(ideal.lattice, p, upper * 1.1).length;
      EXPECT_GE(lambda, Lower(p, n, norm) - 1e-9) << c.label << " p=" << p;
      EXPECT_LE(lambda, upper + 1e-9) << c.label << " p=" << p;
    }
  }
}

TEST(LatticeTest, ZeroDivisorIdealBreaksLowerBound) {
  // In Z[x, y] / (x^2 + 1, y^2 + 1) the prime <5, x - 2, y - 2> has norm 5
  // but contains the zero divisor x - y of l2 length sqrt 8 < 2 * 5^{1/4}.
  auto ctx = Emb({4, 4});
  IdealLattice ideal =
      BuildIdealLattice(*ctx, {{5, 0, 0, 0}, {-2, 1, 0, 0}, {-2, 0, 1, 0}}, "<5, x-2, y-2>");
  EXPECT_EQ(ideal.norm, 5);
  double lambda = BruteForceLambda1(ideal.lattice, 2.0, 10.0).length;
  EXPECT_NEAR(lambda, std::sqrt(8.0), 1e-9);
  EXPECT_LT(lambda, Lower(2.0, 4, 5.0));
  EXPECT_LE(lambda, Upper(2.0, 4, 5.0, Discriminant(*ctx)));
  // Its monomial multiples span only a rank-2 sublattice.
  RealVector shortest = {0, 1, -1, 0};
  Eigen::MatrixXd span(4, 4);
  for (size_t e = 0; e < 4; ++e) {
    RealVector mono(4, 0.0);
    mono[e] = 1.0;
    RealVector prod = ctx->Multiply(shortest, mono);
    for (size_t j = 0; j < 4; ++j) span(e, j) = prod[j];
  }
  EXPECT_EQ(Eigen::FullPivLU<Eigen::MatrixXd>(span).rank(), 2);
}

TEST(LatticeTest, MonomialMultiplesOfShortestVector) {
  for (const IdealCase& c : IdealSuite()) {
    bool power_of_two = true;
    for (Uint64 m : c.m) power_of_two = power_of_two && IsPowerOfTwo(m);
    if (!power_of_two) continue;
    auto ctx = Emb(c.m);
    IdealLattice ideal = BuildIdealLattice(*ctx, c.generators, c.label);
    const double bound = Upper(2.0, ctx->n(), static_cast<double>(ideal.norm), Discriminant(*ctx));
    LatticeVector v = BruteForceLambda1(ideal.lattice, 2.0, bound * 1.1);
    RealVector coeffs = ctx->HToCoefficients(RealVector(v.vector.data(), v.vector.data() + v.vector.size()));
    const size_t n = ctx->n();
    Eigen::MatrixXd rows(n, n);
    for (size_t e = 0; e < n; ++e) {
      RealVector mono(n, 0.0);
      mono[e] = 1.0;
      RealVector prod = ctx->Multiply(coeffs, mono);
      EXPECT_NEAR(LpNorm(*ctx, prod, 2.0), v.length, 1e-9) << c.label;
      for (size_t j = 0; j < n; ++j) rows(e, j) = prod[j];
    }
    EXPECT_EQ(Eigen::FullPivLU<Eigen::MatrixXd>(rows).rank(), static_cast<Eigen::Index>(n))
        << c.label;
    std::vector<LatticeVector> minima = SuccessiveMinima(ideal.lattice, v.length * 1.0001);
    EXPECT_NEAR(minima.back().length, v.length, 1e-9) << c.label;
  }
}

TEST(LatticeTest, SuccessiveMinimaOfSkewLattice) {
  Eigen::MatrixXd b(2, 2);
  b << 1, 0, 0.5, 2;
  auto lat = LatticeInstance::Create(b, "skew");
  std::vector<LatticeVector> minima = SuccessiveMinima(lat, 3.0);
  ASSERT_EQ(minima.size(), 2u);
  EXPECT_NEAR(minima[0].length, 1.0, 1e-12);
  EXPECT_NEAR(minima[1].length, std::sqrt(0.25 + 4.0), 1e-12);
  EXPECT_THROW(SuccessiveMinima(lat, 1.5), std::runtime_error);
}

TEST(LatticeTest, MinkowskiWitnessInCube) {
  for (size_t n : {2u, 4u, 8u}) {
    auto lat = LatticeInstance::Create(Eigen::MatrixXd::Identity(n, n), "Z^n");
    MinkowskiResult r = MinkowskiWitness(lat, std::vector<double>(n, 1.0 + 1e-3));
    ASSERT_TRUE(r.found);
    EXPECT_NEAR(r.witness.length, 1.0, 1e-12);
    EXPECT_THROW(MinkowskiWitness(lat, std::vector<double>(n, 1.0)), std::invalid_argument);
  }
}

TEST(LatticeTest, MinkowskiWitnessOnRandomIdeals) {
  Seed seed{};
  seed[0] = 77;
  Rng rng(seed);
  const std::vector<std::pair<std::vector<Uint64>, Int64>> shapes = {
      {{4, 4}, 13}, {{8}, 17}, {{4}, 29}, {{8, 2}, 41}, {{3, 4}, 13}};
  int found = 0;
  for (int t = 0; t < 100; ++t) {
    const auto& [m, p] = shapes[t % shapes.size()];
    auto ctx = Emb(m);
    const size_t n = ctx->n();
    std::vector<Int64> g(n);
    for (Int64& v : g) v = static_cast<Int64>(rng.UniformBelow(2 * p + 1)) - p;
    std::vector<Int64> pg(n, 0);
    pg[0] = p;
    IdealLattice ideal = BuildIdealLattice(*ctx, {pg, g}, "random");
    // Cube with volume 1.01 * 2^n det.
    double side = std::pow(1.01 * ideal.lattice.Determinant(), 1.0 / n);
    MinkowskiResult r = MinkowskiWitness(ideal.lattice, std::vector<double>(n, side));
    EXPECT_TRUE(r.found) << r.report;
    found += r.found ? 1 : 0;
  }
  EXPECT_EQ(found, 100);
}

TEST(LatticeTest, DualLatticeBasis) {
  Eigen::MatrixXd b(2, 2);
  b << 2, 0, 1, 3;
  auto lat = LatticeInstance::Create(b, "L");
  Eigen::MatrixXd prod = lat.basis() * lat.Dual().basis().transpose();
  EXPECT_LE((prod - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(lat.Determinant() * lat.Dual().Determinant(), 1.0, 1e-12);
}

}  // namespace
}  // namespace mrlwe
