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


#include "mrlwe/sigdemo.h"

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

namespace mrlwe {
namespace {

Rng MakeRng(uint8_t tag) {
  Seed seed{};
  seed[5] = tag;
  return Rng(seed);
}

Image RandomImage(size_t rows, size_t cols, Rng& rng) {
  Image image{rows, cols, 255, {}};
  for (size_t i = 0; i < rows * cols; ++i) image.pixels.push_back(rng.UniformBelow(256));
  return image;
}

std::filesystem::path TempPath(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("mrlwe_sigdemo_" + name);
}

TEST(SigdemoTest, RejectsBadParameters) {
  EXPECT_THROW(DemoScheme({.moduli = {32, 3}}), std::invalid_argument);
  EXPECT_THROW(DemoScheme({.moduli = {32}}), std::invalid_argument);
  EXPECT_THROW(DemoScheme({.q = 67108289, .t = 67108289}), std::invalid_argument);
  EXPECT_THROW(DemoScheme({.q = 67108291}), std::invalid_argument);
}

TEST(SigdemoTest, EncryptDecryptRoundTrip) {
  DemoScheme scheme({.moduli = {16, 16}});
  Rng rng = MakeRng(1);
  RingElement s = scheme.KeyGen(rng);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Uint64> msg = PackImage(scheme, RandomImage(8, 8, rng));
    ASSERT_EQ(scheme.Decrypt(scheme.Encrypt(msg, s, rng), s), msg);
  }
  std::vector<Uint64> zero(scheme.n(), 0);
  EXPECT_EQ(scheme.Decrypt(scheme.Encrypt(zero, s, rng), s), zero);
  Ciphertext c1 = scheme.Encrypt(zero, s, rng), c2 = scheme.Encrypt(zero, s, rng);
  EXPECT_FALSE(c1.components[0] == c2.components[0]);
}

TEST(SigdemoTest, TightParametersHaveNoBudget) {
  // Fresh bound 6 * 17 * sd_e is already above q / 2.
  DemoScheme tight({.moduli = {32, 32}, .q = 97, .t = 17});
  Rng rng = MakeRng(2);
  RingElement s = tight.KeyGen(rng);
  EXPECT_THROW(tight.Encrypt(std::vector<Uint64>(tight.n(), 0), s, rng), BudgetExhausted);
}

TEST(SigdemoTest, AdditionIsPointwise) {
  DemoScheme scheme({});
  Rng rng = MakeRng(3);
  RingElement s = scheme.KeyGen(rng);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Uint64> u = PackImage(scheme, RandomImage(16, 16, rng));
    std::vector<Uint64> v = PackImage(scheme, RandomImage(16, 16, rng));
    std::vector<Uint64> sum = scheme.Decrypt(scheme.Add(scheme.Encrypt(u, s, rng), scheme.Encrypt(v, s, rng)), s);
    for (size_t i = 0; i < u.size(); ++i) ASSERT_EQ(sum[i], (u[i] + v[i]) % 257);
  }
}

TEST(SigdemoTest, OracleSmallCases) {
  // x_1 * x_1 = x_1^2 = -1 when each axis has two coefficients.
  std::vector<Uint64> x1 = {0, 1, 0, 0};
  EXPECT_EQ(NegacyclicConvolve2D(x1, x1, 2, 2, 257), (std::vector<Uint64>{256, 0, 0, 0}));
  // (1 + x_2) * x_2 = x_2 - 1, row-major with rows indexed by x_2.
  std::vector<Uint64> a = {1, 0, 1, 0}, x2 = {0, 0, 1, 0};
  EXPECT_EQ(NegacyclicConvolve2D(a, x2, 2, 2, 257), (std::vector<Uint64>{256, 0, 1, 0}));
  std::vector<Uint64> b = {1, 2, 3, 4, 5, 6};
  std::vector<Uint64> one = {1, 0, 0, 0, 0, 0};
  EXPECT_EQ(NegacyclicConvolve2D(b, one, 2, 3, 7), (std::vector<Uint64>{1, 2, 3, 4, 5, 6}));
}

TEST(SigdemoTest, Blur3KernelLayout) {
  DemoScheme scheme({});
  std::vector<Uint64> k = Blur3Kernel(scheme);
  size_t ones = 0, minus = 0;
  for (Uint64 v : k) {
    ones += v == 1;
    minus += v == 256;
  }
  // Offsets -1 wrap with a sign flip: (0,0), (0,1), (1,0), (1,1) stay +1,
  // the rest pick up one or two flips.
  EXPECT_EQ(ones + minus, 9u);
  auto at = [&](size_t r, size_t c) { return k[c + 16 * r]; };
  EXPECT_EQ(at(0, 0), 1u);
  EXPECT_EQ(at(0, 1), 1u);
  EXPECT_EQ(at(0, 15), 256u);
  EXPECT_EQ(at(15, 15), 1u);
}

TEST(SigdemoTest, IdentityFilterReturnsImage) {
  DemoScheme scheme({});
  Rng rng = MakeRng(4);
  RingElement s = scheme.KeyGen(rng);
  Image image = RandomImage(16, 16, rng);
  std::vector<Uint64> msg = PackImage(scheme, image);
  Ciphertext out = scheme.Mul(scheme.Encrypt(msg, s, rng), scheme.Encrypt(IdentityKernel(scheme), s, rng));
  EXPECT_EQ(out.components.size(), 3u);
  EXPECT_EQ(UnpackImage(scheme, scheme.Decrypt(out, s), 255).pixels, image.pixels);
}

TEST(SigdemoTest, BlurMatchesPlaintextOracle) {
  DemoScheme scheme({});
  Rng rng = MakeRng(5);
  RingElement s = scheme.KeyGen(rng);
  std::vector<Uint64> kernel = Blur3Kernel(scheme);
  Ciphertext enc_kernel = scheme.Encrypt(kernel, s, rng);
  Image kernel_image = UnpackImage(scheme, kernel, 256);
  int within_bound = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Image image = RandomImage(16, 16, rng);
    Ciphertext out = scheme.Mul(scheme.Encrypt(PackImage(scheme, image), s, rng), enc_kernel);
    EXPECT_GT(scheme.BudgetBits(out), 0.0);
    Image result = UnpackImage(scheme, scheme.Decrypt(out, s), 256);
    ASSERT_EQ(result.pixels, NegacyclicConvolve2D(image.pixels, kernel_image.pixels, 16, 16, 257));
    within_bound += scheme.MeasuredNoise(out, s) <= scheme.PredictedBound(out);
  }
  EXPECT_GE(within_bound, 99);
}

TEST(SigdemoTest, RandomProductsStayWithinPrediction) {
  DemoScheme scheme({});
  Rng rng = MakeRng(6);
  RingElement s = scheme.KeyGen(rng);
  int within_bound = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Uint64> u(scheme.n()), v(scheme.n());
    for (auto& x : u) x = rng.UniformBelow(257);
    for (auto& x : v) x = rng.UniformBelow(257);
    Ciphertext out = scheme.Mul(scheme.Encrypt(u, s, rng), scheme.Encrypt(v, s, rng));
    std::vector<Uint64> want = NegacyclicConvolve2D(UnpackImage(scheme, u, 256).pixels,
                                                    UnpackImage(scheme, v, 256).pixels, 16, 16, 257);
    ASSERT_EQ(UnpackImage(scheme, scheme.Decrypt(out, s), 256).pixels, want);
    within_bound += scheme.MeasuredNoise(out, s) <= scheme.PredictedBound(out);
  }
  EXPECT_GE(within_bound, 198);
  Ciphertext twice = scheme.Mul(scheme.Encrypt(std::vector<Uint64>(scheme.n(), 1), s, rng), scheme.Encrypt(std::vector<Uint64>(scheme.n(), 1), s, rng));
  EXPECT_THROW(scheme.Mul(twice, twice), BudgetExhausted);
}

TEST(SigdemoTest, PackRejectsLargeImages) {
  DemoScheme scheme({});
  Rng rng = MakeRng(7);
  EXPECT_THROW(PackImage(scheme, RandomImage(17, 4, rng)), std::invalid_argument);
  Image small = RandomImage(3, 5, rng);
  Image back = UnpackImage(scheme, PackImage(scheme, small), 255);
  for (size_t r = 0; r < 3; ++r) {
    for (size_t c = 0; c < 5; ++c) EXPECT_EQ(back.pixels[r * 16 + c], small.pixels[r * 5 + c]);
  }
}

TEST(SigdemoTest, PgmRoundTrip) {
  Rng rng = MakeRng(8);
  Image image = RandomImage(4, 6, rng);
  WritePgm(TempPath("a.pgm"), image);
  Image back = ReadPgm(TempPath("a.pgm"));
  EXPECT_EQ(back.rows, 4u);
  EXPECT_EQ(back.cols, 6u);
  EXPECT_EQ(back.pixels, image.pixels);
  EXPECT_EQ(std::filesystem::file_size(TempPath("a.pgm")), std::string("P5\n6 4\n255\n").size() + 24);
  {
    std::ofstream out(TempPath("b.pgm"));
    out << "P2\n# comment\n3 1\n# another\n10\n0 5 10\n";
  }
  EXPECT_EQ(ReadPgm(TempPath("b.pgm")).pixels, (std::vector<Uint64>{0, 5, 10}));
  Image wide{1, 2, 256, {256, 1}};
  WritePgm(TempPath("c.pgm"), wide);
  std::ifstream in(TempPath("c.pgm"), std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(bytes, std::string("P5\n2 1\n256\n\x01\x00\x00\x01", 15));
}

TEST(SigdemoTest, PgmErrors) {
  EXPECT_THROW(ReadPgm(TempPath("missing.pgm")), PgmError);
  auto write = [](const std::string& name, const std::string& body) {
    std::ofstream out(TempPath(name), std::ios::binary);
    out << body;
  };
  write("d.pgm", "P6\n1 1\n255\n\x01");
  EXPECT_THROW(ReadPgm(TempPath("d.pgm")), PgmError);
  write("e.pgm", "P5\n4 4\n255\n\x01\x02");
  EXPECT_THROW(ReadPgm(TempPath("e.pgm")), PgmError);
  write("f.pgm", "P2\n2 1\n10\n3 11\n");
  EXPECT_THROW(ReadPgm(TempPath("f.pgm")), PgmError);
  write("g.pgm", "P5\n1 1\n1000\n\x01\x01");
  EXPECT_THROW(ReadPgm(TempPath("g.pgm")), PgmError);
}

}  // namespace
}  // namespace mrlwe
