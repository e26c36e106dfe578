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


#include "mrlwe/rlwe.h"

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "mrlwe/stats.h"

namespace mrlwe {
namespace {

Rng MakeRng(uint8_t tag) {
  Seed seed{};
  seed[2] = tag;
  return Rng(seed);
}

RlweContextPtr Ctx(std::vector<Uint64> m, Uint64 q, int f = kDefaultFractionBits) {
  return RlweContext::Create(RingParams::Create(std::move(m), q), f);
}

std::vector<Uint64> TorusResidues(const RlweContext& ctx, const RlweSample& s) {
  std::vector<Uint64> out;
  for (Uint64 v : s.b) out.push_back(v >> ctx.fraction_bits());
  return out;
}

TEST(RlweTest, ContextValidation) {
  EXPECT_THROW(RlweContext::Create(RingParams::Create({3}, 13)), std::invalid_argument);
  EXPECT_THROW(RlweContext::Create(RingParams::Create({4}, 15)), std::invalid_argument);
  // A valid prime just above 2^39 leaves no room for 24 fraction bits.
  auto big = RingParams::Create({4}, 549755813933);
  ASSERT_TRUE(Validate(big).valid());
  EXPECT_THROW(RlweContext::Create(big), std::invalid_argument);
  EXPECT_NO_THROW(RlweContext::Create(big, 23));
  auto ctx = Ctx({4, 4}, 13);
  EXPECT_EQ(ctx->n(), 4u);
  EXPECT_EQ(ctx->torus_modulus(), Uint64{13} << 24);
  EXPECT_EQ(ctx->dual_scale().denominator, 4);
}

TEST(RlweTest, NoiselessSampleHasZeroResidual) {
  auto ctx = Ctx({8, 4}, 17);
  Rng rng = MakeRng(1);
  SecretKey key = SecretKey::Random(*ctx, rng);
  RealVector zero(ctx->n(), 0.0);
  for (int t = 0; t < 100; ++t) {
    RlweSample s = SampleRlweWithError(*ctx, key, zero, rng);
    RingElement as = (s.a * key.s).ToCoefficients();
    for (size_t i = 0; i < ctx->n(); ++i) EXPECT_EQ(s.b[i], as.data()[i] << 24);
    for (double r : CenteredResidual(*ctx, key.s, s)) EXPECT_EQ(r, 0.0);
  }
}

TEST(RlweTest, ResidualMatchesScaledError) {
  auto ctx = Ctx({8, 8}, 17);
  Rng rng = MakeRng(2);
  SecretKey key = SecretKey::Random(*ctx, rng);
  auto psi = GaussianSpec::Spherical(ctx->params(), 0.05);
  const double n = static_cast<double>(ctx->n());
  for (int t = 0; t < 200; ++t) {
    RealVector e = SampleContinuous(ctx->embedding(), psi, rng);
    RlweSample s = SampleRlweWithError(*ctx, key, e, rng);
    RealVector r = CenteredResidual(*ctx, key.s, s);
    for (size_t i = 0; i < ctx->n(); ++i) {
      EXPECT_NEAR(r[i], 17.0 * n * e[i], std::ldexp(1.0, 1 - 24));
    }
  }
}

TEST(RlweTest, MarginalOfAIsUniform) {
  auto ctx = Ctx({4, 4}, 13);
  Rng rng = MakeRng(3);
  SecretKey key = SecretKey::Random(*ctx, rng);
  auto psi = GaussianSpec::Spherical(ctx->params(), 0.01);
  std::vector<std::vector<Uint64>> rows;
  for (int t = 0; t < 100000; ++t) rows.push_back(SampleRlwe(*ctx, key, psi, rng).a.data());
  EXPECT_TRUE(ChiSquareUniform(rows, 13).pass);
}

TEST(RlweTest, ZeroSecretGivesReducedError) {
  auto ctx = Ctx({4, 4}, 13);
  Rng rng = MakeRng(4);
  SecretKey key = SecretKey::FromElement(*ctx, RingElement::Zero(ctx->ring()));
  auto psi = GaussianSpec::Spherical(ctx->params(), 0.3);
  const double m = static_cast<double>(ctx->torus_modulus());
  std::vector<Uint64> from_samples(20, 0), from_errors(20, 0);
  for (int t = 0; t < 50000; ++t) {
    RlweSample s = SampleRlwe(*ctx, key, psi, rng);
    ++from_samples[static_cast<size_t>(20.0 * static_cast<double>(s.b[1]) / m)];
    RealVector y = ctx->ToDualCoordinates(SampleContinuous(ctx->embedding(), psi, rng));
    double wrapped = y[1] - std::floor(y[1]);
    ++from_errors[std::min<size_t>(19, static_cast<size_t>(20.0 * wrapped))];
  }
  EXPECT_TRUE(ChiSquareHomogeneity(from_samples, from_errors).pass);
}

TEST(RlweTest, UniformPair) {
  auto ctx = Ctx({4, 4}, 13);
  Rng rng = MakeRng(5);
  std::vector<std::vector<Uint64>> rows;
  std::vector<Uint64> joint(13 * 13, 0);
  for (int t = 0; t < 100000; ++t) {
    RlweSample s = SampleUniformPair(*ctx, rng);
    std::vector<Uint64> row = s.a.data();
    std::vector<Uint64> res = TorusResidues(*ctx, s);
    row.insert(row.end(), res.begin(), res.end());
    rows.push_back(row);
    ++joint[s.a.data()[0] * 13 + res[0]];
  }
  EXPECT_TRUE(ChiSquareUniform(rows, 13).pass);
  EXPECT_LT(MutualInformation(joint, 13, 13), 0.002);

  Rng r1 = MakeRng(6), r2 = MakeRng(6);
  for (int t = 0; t < 10; ++t) {
    RlweSample x = SampleUniformPair(*ctx, r1), y = SampleUniformPair(*ctx, r2);
    EXPECT_EQ(x.a, y.a);
    EXPECT_EQ(x.b, y.b);
  }
}

TEST(RlweTest, HybridSlotStructure) {
  auto ctx = Ctx({4, 4}, 13);
  Rng rng = MakeRng(7);
  SecretKey key = SecretKey::Random(*ctx, rng);
  auto psi = GaussianSpec::Spherical(ctx->params(), 0.01);
  EXPECT_THROW(SampleHybrid(*ctx, key, psi, 5, rng), std::out_of_range);
  for (size_t j = 0; j <= 4; ++j) {
    std::vector<std::vector<Uint64>> randomized;
    for (int t = 0; t < 20000; ++t) {
      std::vector<Uint64> slots = ResidualSlots(*ctx, key.s, SampleHybrid(*ctx, key, psi, j, rng));
      for (size_t i = j; i < 4; ++i) EXPECT_EQ(slots[i], 0u) << "j=" << j << " slot " << i;
      if (j > 0) randomized.emplace_back(slots.begin(), slots.begin() + j);
    }
    if (j > 0) EXPECT_TRUE(ChiSquareUniform(randomized, 13).pass) << j;
  }
}

TEST(RlweTest, HybridEndpoints) {
  auto ctx = Ctx({4, 4}, 13);
  Rng rng = MakeRng(8);
  SecretKey key = SecretKey::Random(*ctx, rng);
  auto psi = GaussianSpec::Spherical(ctx->params(), 0.2);
  // Level 0 is A_{s, psi}: compare a slot statistic with direct draws.
  std::vector<Uint64> level0(13, 0), direct(13, 0);
  std::vector<std::vector<Uint64>> top;
  for (int t = 0; t < 50000; ++t) {
    ++level0[ResidualSlots(*ctx, key.s, SampleHybrid(*ctx, key, psi, 0, rng))[2]];
    ++direct[ResidualSlots(*ctx, key.s, SampleRlwe(*ctx, key, psi, rng))[2]];
    RlweSample s = SampleHybrid(*ctx, key, psi, 4, rng);
    std::vector<Uint64> row = s.a.data();
    std::vector<Uint64> res = TorusResidues(*ctx, s);
    row.insert(row.end(), res.begin(), res.end());
    top.push_back(row);
  }
  EXPECT_TRUE(ChiSquareHomogeneity(level0, direct).pass);
  EXPECT_TRUE(ChiSquareUniform(top, 13).pass);
}

TEST(RlweTest, HybridDistanceIsMonotone) {
  auto ctx = Ctx({4, 4}, 13);
  Rng rng = MakeRng(9);
  SecretKey key = SecretKey::Random(*ctx, rng);
  auto psi = GaussianSpec::Spherical(ctx->params(), 0.01);
  auto zero_slots = [&](const RlweSample& s) {
    size_t zeros = 0;
    for (Uint64 v : ResidualSlots(*ctx, key.s, s)) zeros += v == 0 ? 1 : 0;
    return zeros;
  };
  std::vector<Uint64> uniform(5, 0);
  for (int t = 0; t < 20000; ++t) ++uniform[zero_slots(SampleUniformPair(*ctx, rng))];
  std::vector<TvEstimate> tv;
  for (size_t j = 0; j <= 4; ++j) {
    std::vector<Uint64> counts(5, 0);
    for (int t = 0; t < 20000; ++t) ++counts[zero_slots(SampleHybrid(*ctx, key, psi, j, rng))];
    tv.push_back(EstimateTv(counts, uniform, rng));
  }
  for (size_t j = 0; j < 4; ++j) {
    // Assert the ordering only where the intervals separate.
    if (tv[j].ci_low > tv[j + 1].ci_high || tv[j + 1].ci_low > tv[j].ci_high) {
      EXPECT_GT(tv[j].estimate, tv[j + 1].estimate) << j;
    }
  }
  EXPECT_GT(tv[0].ci_low, tv[3].ci_high);
  EXPECT_LE(tv[4].estimate, tv[4].noise_floor);
}

TEST(RlweTest, ToDiscreteIdentityScaling) {
  auto ctx = Ctx({4, 4}, 13);
  Rng rng = MakeRng(10);
  std::vector<Int64> w(4, 0);
  for (int t = 0; t < 100; ++t) {
    RlweSample s = SampleUniformPair(*ctx, rng);
    DiscreteSample d = ToDiscrete(*ctx, s, 1, w);
    EXPECT_EQ(d.a, s.a);
    for (size_t i = 0; i < 4; ++i) {
      double qb = std::ldexp(static_cast<double>(s.b[i]), -24);
      EXPECT_EQ(d.b.data()[i], static_cast<Uint64>(std::nearbyint(qb)) % 13);
    }
  }
  EXPECT_THROW(ToDiscrete(*ctx, SampleUniformPair(*ctx, rng), 13, w), std::invalid_argument);
  EXPECT_THROW(ToDiscrete(*ctx, SampleUniformPair(*ctx, rng), 2, std::vector<Int64>(3, 0)),
               std::invalid_argument);
}

TEST(RlweTest, ToDiscretePreservesUniformity) {
  auto ctx = Ctx({4, 4}, 13);
  Rng rng = MakeRng(11);
  std::vector<Int64> w = {1, 0, 1, 1};
  std::vector<std::vector<Uint64>> rows;
  for (int t = 0; t < 100000; ++t) {
    DiscreteSample d = ToDiscrete(*ctx, SampleUniformPair(*ctx, rng), 2, w);
    std::vector<Uint64> row = d.a.data();
    row.insert(row.end(), d.b.data().begin(), d.b.data().end());
    rows.push_back(row);
  }
  EXPECT_TRUE(ChiSquareUniform(rows, 13).pass);
}

TEST(RlweTest, ToDiscretePlugInIdentity) {
  auto ctx = Ctx({4, 4}, 13);
  Rng rng = MakeRng(12);
  SecretKey key = SecretKey::Random(*ctx, rng);
  auto psi = GaussianSpec::Spherical(ctx->params(), 0.5);
  const Uint64 m = ctx->torus_modulus();
  for (int t = 0; t < 2000; ++t) {
    RealVector e = SampleContinuous(ctx->embedding(), psi, rng);
    RlweSample s = SampleRlweWithError(*ctx, key, e, rng);
    std::vector<Int64> w(4);
    for (Int64& v : w) v = static_cast<Int64>(rng.UniformBelow(3));
    DiscreteSample d = ToDiscrete(*ctx, s, 3, w);
    RingElement lhs = (d.b - d.a * key.s).ToCoefficients();
    std::vector<Uint64> fixed = ctx->ScaleToTorus(ctx->ToDualCoordinates(e));
    for (size_t i = 0; i < 4; ++i) {
      double err = fixed[i] > m / 2 ? -static_cast<double>(m - fixed[i])
                                    : static_cast<double>(fixed[i]);
      Int64 expected = RoundToCoset(3.0 * std::ldexp(err, -24), 3, w[i]);
      EXPECT_EQ(lhs.data()[i], ReduceSigned(expected, 13));
    }
  }
}

std::vector<DiscreteSample> ConstructedStream(const RingContextPtr& ring, const RingElement& s,
                                              std::vector<RingElement>& errors, size_t count,
                                              Rng& rng) {
  std::vector<DiscreteSample> stream;
  for (size_t k = 0; k < count; ++k) {
    std::vector<Int64> small(ring->n());
    for (Int64& v : small) v = static_cast<Int64>(rng.UniformBelow(5)) - 2;
    RingElement e = RingElement::FromSigned(ring, small);
    RingElement a = RingElement::Random(ring, rng);
    stream.push_back(DiscreteSample{a, (a * s + e).ToCoefficients()});
    errors.push_back(e);
  }
  return stream;
}

TEST(RlweTest, NormalFormIdentity) {
  auto ring = RingContext::Create(RingParams::Create({4, 4}, 13));
  Rng rng = MakeRng(13);
  for (int trial = 0; trial < 50; ++trial) {
    RingElement s = RingElement::Random(ring, rng);
    std::vector<RingElement> errors;
    auto stream = ConstructedStream(ring, s, errors, 20, rng);
    NormalForm nf = ToNormalForm(stream);
    const RingElement& e0 = errors[nf.attempts - 1];
    EXPECT_EQ(nf.pivot.a, stream[nf.attempts - 1].a);
    ASSERT_EQ(nf.samples.size(), stream.size() - nf.attempts);
    for (size_t k = 0; k < nf.samples.size(); ++k) {
      EXPECT_EQ(nf.samples[k].b - nf.samples[k].a * e0, errors[nf.attempts + k]);
    }
  }
}

TEST(RlweTest, NormalFormFirstTryRate) {
  auto ring = RingContext::Create(RingParams::Create({4, 4}, 13));
  Rng rng = MakeRng(14);
  const double expected = std::pow(1.0 - 1.0 / 13.0, 4);
  int first = 0;
  constexpr int kTrials = 10000;
  for (int t = 0; t < kTrials; ++t) {
    std::vector<DiscreteSample> stream;
    for (int k = 0; k < 2; ++k) {
      stream.push_back(DiscreteSample{RingElement::Random(ring, rng), RingElement::Random(ring, rng)});
    }
    try {
      first += ToNormalForm(stream).attempts == 1 ? 1 : 0;
    } catch (const StreamExhausted&) {
    }
  }
  EXPECT_NEAR(static_cast<double>(first) / kTrials, expected, 0.02);
  EXPECT_EQ(NormalFormRetryCap(ring->params()), 64u * 2u);
}

TEST(RlweTest, NormalFormMapsUniformToUniform) {
  auto ring = RingContext::Create(RingParams::Create({4, 4}, 13));
  Rng rng = MakeRng(15);
  std::vector<DiscreteSample> stream;
  for (int k = 0; k < 50001; ++k) {
    stream.push_back(DiscreteSample{RingElement::Random(ring, rng), RingElement::Random(ring, rng)});
  }
  NormalForm nf = ToNormalForm(stream);
  std::vector<std::vector<Uint64>> rows;
  for (const DiscreteSample& d : nf.samples) {
    std::vector<Uint64> row = d.a.data();
    row.insert(row.end(), d.b.data().begin(), d.b.data().end());
    rows.push_back(row);
  }
  EXPECT_TRUE(ChiSquareUniform(rows, 13).pass);
}

TEST(RlweTest, NormalFormErrors) {
  auto ring = RingContext::Create(RingParams::Create({4, 4}, 13));
  RingElement zero = RingElement::Zero(ring);
  std::vector<DiscreteSample> one = {{zero, zero}};
  EXPECT_THROW(ToNormalForm(one), std::invalid_argument);
  std::vector<DiscreteSample> dead(10, DiscreteSample{zero, zero});
  EXPECT_THROW(ToNormalForm(dead), StreamExhausted);
}

TEST(RlweTest, SampleFileRoundTrip) {
  auto ctx = Ctx({8, 4}, 17);
  Rng rng = MakeRng(16);
  SecretKey key = SecretKey::Random(*ctx, rng);
  auto psi = GaussianSpec::Spherical(ctx->params(), 0.3);
  std::vector<RlweSample> samples;
  for (int t = 0; t < 25; ++t) samples.push_back(SampleRlwe(*ctx, key, psi, rng));
  std::stringstream buf;
  WriteSamples(buf, *ctx, samples);
  const std::string bytes = buf.str();
  ASSERT_EQ(bytes.size(), 4 + 2 + 1 + 2 * 4 + 8 + 1 + 8 + 25 * 2 * 8 * 8u);
  EXPECT_EQ(bytes.substr(0, 4), "MRLW");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[5], 0);
  EXPECT_EQ(bytes[6], 2);
  EXPECT_EQ(bytes[7], 8);
  EXPECT_EQ(bytes[11], 4);
  EXPECT_EQ(bytes[15], 17);
  EXPECT_EQ(bytes[23], 24);
  EXPECT_EQ(bytes[24], 25);
  SampleFile file = ReadSampleFile(buf);
  EXPECT_EQ(file.params(), ctx->params());
  std::vector<RlweSample> back = ToRlweSamples(*ctx, file);
  ASSERT_EQ(back.size(), samples.size());
  for (size_t k = 0; k < back.size(); ++k) {
    EXPECT_EQ(back[k].a, samples[k].a);
    EXPECT_EQ(back[k].b, samples[k].b);
  }
  EXPECT_THROW(ToRlweSamples(*Ctx({8, 4}, 17, 20), file), FormatError);
}

TEST(RlweTest, DiscreteSampleFile) {
  auto ctx = Ctx({4, 4}, 13);
  Rng rng = MakeRng(17);
  std::vector<DiscreteSample> samples;
  for (int t = 0; t < 5; ++t) {
    samples.push_back(ToDiscrete(*ctx, SampleUniformPair(*ctx, rng), 2, std::vector<Int64>(4, 0)));
  }
  std::stringstream buf;
  WriteDiscreteSamples(buf, ctx->params(), samples);
  EXPECT_EQ(buf.str()[4 + 2 + 1 + 8 + 8], 0);  // f = 0
  SampleFile file = ReadSampleFile(buf);
  EXPECT_EQ(file.fraction_bits, 0);
  std::vector<DiscreteSample> back = ToDiscreteSamples(ctx->ring(), file);
  for (size_t k = 0; k < back.size(); ++k) {
    EXPECT_EQ(back[k].a, samples[k].a);
    EXPECT_EQ(back[k].b, samples[k].b);
  }
}

TEST(RlweTest, MalformedSampleFiles) {
  auto ctx = Ctx({4}, 13);
  Rng rng = MakeRng(18);
  std::vector<RlweSample> samples = {SampleUniformPair(*ctx, rng)};
  std::stringstream good;
  WriteSamples(good, *ctx, samples);
  const std::string bytes = good.str();

  std::stringstream bad_magic("MRLX" + bytes.substr(4));
  EXPECT_THROW(ReadSampleFile(bad_magic), FormatError);
  std::stringstream bad_version(bytes.substr(0, 4) + std::string("\x02\x00", 2) + bytes.substr(6));
  EXPECT_THROW(ReadSampleFile(bad_version), FormatError);
  std::stringstream truncated(bytes.substr(0, bytes.size() - 3));
  EXPECT_THROW(ReadSampleFile(truncated), FormatError);
  std::string out_of_range = bytes;
  out_of_range[bytes.size() - 24] = 13;  // last coefficient of a
  for (int i = 1; i < 8; ++i) out_of_range[bytes.size() - 24 + i] = 0;
  std::stringstream oor(out_of_range);
  EXPECT_THROW(ReadSampleFile(oor), FormatError);
}

}  // namespace
}  // namespace mrlwe
