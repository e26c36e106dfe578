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

#include <algorithm>
#include <cmath>
#include <string>

namespace mrlwe {

namespace {

Uint64 Mask(int bits) { return (Uint64{1} << bits) - 1; }

void PutLe(std::ostream& out, Uint64 value, int bytes) {
  char buf[8];
  for (int i = 0; i < bytes; ++i) buf[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  out.write(buf, bytes);
}

Uint64 GetLe(std::istream& in, int bytes) {
  unsigned char buf[8];
  if (!in.read(reinterpret_cast<char*>(buf), bytes)) {
    throw FormatError("sample file truncated");
  }
  Uint64 value = 0;
  for (int i = bytes - 1; i >= 0; --i) value = (value << 8) | buf[i];
  return value;
}

void WriteHeader(std::ostream& out, const RingParams& params, int fraction_bits, Uint64 count) {
  out.write("MRLW", 4);
  PutLe(out, kSampleFileVersion, 2);
  PutLe(out, params.dims(), 1);
  for (Uint64 m : params.moduli()) PutLe(out, m, 4);
  PutLe(out, params.q(), 8);
  PutLe(out, static_cast<Uint64>(fraction_bits), 1);
  PutLe(out, count, 8);
}

void CheckFileMatches(const SampleFile& file, const RingParams& params, int fraction_bits) {
  if (file.moduli != params.moduli() || file.q != params.q() ||
      file.fraction_bits != fraction_bits) {
    throw FormatError("sample file header does not match " + params.ToString() +
                      " with f=" + std::to_string(fraction_bits));
  }
}

}  // namespace

RlweContextPtr RlweContext::Create(const RingParams& params, int fraction_bits) {
  if (!params.AllPowerOfTwo()) {
    throw std::invalid_argument("RlweContext: conductors must be powers of two");
  }
  if (fraction_bits < 0 || fraction_bits > 62 ||
      params.q() >= (Uint64{1} << (63 - fraction_bits))) {
    throw std::invalid_argument("RlweContext: q * 2^f must stay below 2^63");
  }
  std::shared_ptr<RlweContext> ctx(new RlweContext());
  ctx->ring_ = RingContext::Create(params);
  ctx->embedding_ = EmbeddingContext::Create(params);
  ctx->dual_ = DualScaleFor(params);
  ctx->fraction_bits_ = fraction_bits;
  ctx->torus_modulus_ = params.q() << fraction_bits;
  return ctx;
}

RealVector RlweContext::ToDualCoordinates(std::span<const double> coeffs) const {
  if (coeffs.size() != n()) throw std::invalid_argument("ToDualCoordinates: length");
  RealVector y(coeffs.size());
  const double factor = static_cast<double>(dual_.denominator) /
                        static_cast<double>(dual_.numerator);
  for (size_t i = 0; i < y.size(); ++i) y[i] = coeffs[i] * factor;
  return y;
}

std::vector<Uint64> RlweContext::ScaleToTorus(std::span<const double> dual_coords) const {
  const double m = static_cast<double>(torus_modulus_);
  const double scale = std::ldexp(static_cast<double>(q()), fraction_bits_);
  std::vector<Uint64> out(dual_coords.size());
  for (size_t i = 0; i < out.size(); ++i) {
    double v = std::round(dual_coords[i] * scale);
    v -= m * std::floor(v / m);
    Uint64 fixed = static_cast<Uint64>(v);
    out[i] = fixed >= torus_modulus_ ? fixed - torus_modulus_ : fixed;
  }
  return out;
}

SecretKey SecretKey::Random(const RlweContext& ctx, Rng& rng) {
  return SecretKey{RingElement::Random(ctx.ring(), rng), ctx.dual_scale()};
}

SecretKey SecretKey::FromElement(const RlweContext& ctx, RingElement s) {
  if (!(s.params() == ctx.params())) throw std::invalid_argument("SecretKey: params mismatch");
  return SecretKey{s.ToCoefficients(), ctx.dual_scale()};
}

RlweSample SampleRlweWithError(const RlweContext& ctx, const SecretKey& key,
                               std::span<const double> error_coeffs, Rng& rng) {
  RingElement a = RingElement::Random(ctx.ring(), rng);
  RingElement as = a * key.s;
  std::vector<Uint64> b = ctx.ScaleToTorus(ctx.ToDualCoordinates(error_coeffs));
  const Uint64 m = ctx.torus_modulus();
  for (size_t i = 0; i < b.size(); ++i) {
    b[i] = AddMod(as.data()[i] << ctx.fraction_bits(), b[i], m);
  }
  return RlweSample{std::move(a), std::move(b)};
}

RlweSample SampleRlwe(const RlweContext& ctx, const SecretKey& key, const GaussianSpec& psi,
                      Rng& rng) {
  RealVector e = SampleContinuous(ctx.embedding(), psi, rng);
  return SampleRlweWithError(ctx, key, e, rng);
}

RlweSample SampleUniformPair(const RlweContext& ctx, Rng& rng) {
  RingElement a = RingElement::Random(ctx.ring(), rng);
  std::vector<Uint64> b(ctx.n());
  for (Uint64& v : b) v = rng.UniformBelow(ctx.torus_modulus());
  return RlweSample{std::move(a), std::move(b)};
}

RingElement UniformSlotMask(const RlweContext& ctx, size_t j, Rng& rng) {
  if (j > ctx.n()) throw std::out_of_range("hybrid level exceeds n");
  std::vector<Uint64> slots(ctx.n(), 0);
  for (size_t i = 0; i < j; ++i) slots[i] = rng.UniformBelow(ctx.q());
  return RingElement::FromSlotValues(ctx.ring(), std::move(slots)).ToCoefficients();
}

RlweSample AddUniformSlots(const RlweContext& ctx, const RlweSample& sample, size_t j,
                           Rng& rng) {
  RingElement h = UniformSlotMask(ctx, j, rng);
  RlweSample out = sample;
  for (size_t i = 0; i < out.b.size(); ++i) {
    out.b[i] = AddMod(out.b[i], h.data()[i] << ctx.fraction_bits(), ctx.torus_modulus());
  }
  return out;
}

RlweSample SampleHybrid(const RlweContext& ctx, const SecretKey& key, const GaussianSpec& psi,
                        size_t j, Rng& rng) {
  if (j > ctx.n()) throw std::out_of_range("hybrid level exceeds n");
  return AddUniformSlots(ctx, SampleRlwe(ctx, key, psi, rng), j, rng);
}

RealVector CenteredResidual(const RlweContext& ctx, const RingElement& s,
                            const RlweSample& sample) {
  RingElement as = (sample.a * s).ToCoefficients();
  const Uint64 m = ctx.torus_modulus();
  RealVector out(ctx.n());
  for (size_t i = 0; i < out.size(); ++i) {
    Uint64 d = SubMod(sample.b[i], as.data()[i] << ctx.fraction_bits(), m);
    double centered = d > m / 2 ? -static_cast<double>(m - d) : static_cast<double>(d);
    out[i] = std::ldexp(centered, -ctx.fraction_bits());
  }
  return out;
}

std::vector<Uint64> ResidualSlots(const RlweContext& ctx, const RingElement& s,
                                  const RlweSample& sample) {
  RealVector r = CenteredResidual(ctx, s, sample);
  std::vector<Int64> rounded(r.size());
  for (size_t i = 0; i < r.size(); ++i) rounded[i] = std::llround(r[i]);
  return RingElement::FromSigned(ctx.ring(), rounded).ToSlots().data();
}

DiscreteSample ToDiscrete(const RlweContext& ctx, const RlweSample& sample, Int64 p,
                          std::span<const Int64> w) {
  const Uint64 q = ctx.q();
  if (p < 1 || Gcd(static_cast<Uint64>(p) % q, q) != 1) {
    throw std::invalid_argument("ToDiscrete: p must be a positive integer coprime to q");
  }
  if (w.size() != ctx.n()) throw std::invalid_argument("ToDiscrete: coset label length");
  const int f = ctx.fraction_bits();
  const Uint64 p_mod = static_cast<Uint64>(p) % q;
  std::vector<Uint64> b(ctx.n());
  for (size_t i = 0; i < b.size(); ++i) {
    // p q b' = p I + p F / 2^f; rounding into w + pZ commutes with the p I shift.
    Uint64 integer = sample.b[i] >> f;
    double frac = std::ldexp(static_cast<double>(sample.b[i] & Mask(f)), -f);
    Int64 rounded = RoundToCoset(static_cast<double>(p) * frac, p, w[i]);
    b[i] = AddMod(MulMod(p_mod, integer, q), ReduceSigned(rounded, q), q);
  }
  return DiscreteSample{sample.a.ToCoefficients().ScalarMul(p_mod),
                        RingElement::FromCoefficients(ctx.ring(), std::move(b))};
}

size_t NormalFormRetryCap(const RingParams& params) {
  const double q = static_cast<double>(params.q());
  const double n = static_cast<double>(params.total_degree());
  double inverse_rate = std::exp(-n * std::log1p(-1.0 / q));
  return 64 * static_cast<size_t>(std::ceil(inverse_rate));
}

NormalForm ToNormalForm(std::span<const DiscreteSample> stream) {
  if (stream.size() < 2) throw std::invalid_argument("ToNormalForm: need at least 2 samples");
  const size_t cap = NormalFormRetryCap(stream.front().a.params());
  std::optional<RingElement> inverse;
  size_t pivot = 0;
  for (; pivot < stream.size() && pivot < cap; ++pivot) {
    inverse = stream[pivot].a.Invert();
    if (inverse) break;
  }
  if (!inverse) {
    throw StreamExhausted("ToNormalForm: no invertible a_0 among " + std::to_string(pivot) +
                          " samples");
  }
  NormalForm out{stream[pivot], pivot + 1, {}};
  const RingElement& b0 = stream[pivot].b;
  for (size_t k = pivot + 1; k < stream.size(); ++k) {
    RingElement a = -(stream[k].a.ToCoefficients() * *inverse);
    RingElement b = stream[k].b.ToCoefficients() + a * b0;
    out.samples.push_back(DiscreteSample{std::move(a), std::move(b)});
  }
  return out;
}

void WriteSamples(std::ostream& out, const RlweContext& ctx, std::span<const RlweSample> samples) {
  WriteHeader(out, ctx.params(), ctx.fraction_bits(), samples.size());
  for (const RlweSample& s : samples) {
    RingElement a = s.a.ToCoefficients();
    for (Uint64 v : a.data()) PutLe(out, v, 8);
    for (Uint64 v : s.b) PutLe(out, v, 8);
  }
}

void WriteDiscreteSamples(std::ostream& out, const RingParams& params,
                          std::span<const DiscreteSample> samples) {
  WriteHeader(out, params, 0, samples.size());
  for (const DiscreteSample& s : samples) {
    RingElement a = s.a.ToCoefficients();
    RingElement b = s.b.ToCoefficients();
    for (Uint64 v : a.data()) PutLe(out, v, 8);
    for (Uint64 v : b.data()) PutLe(out, v, 8);
  }
}

SampleFile ReadSampleFile(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::string(magic, 4) != "MRLW") {
    throw FormatError("not an MRLW sample file");
  }
  if (GetLe(in, 2) != kSampleFileVersion) throw FormatError("unsupported sample file version");
  SampleFile file;
  const Uint64 l = GetLe(in, 1);
  if (l == 0) throw FormatError("sample file lists no conductors");
  size_t n = 1;
  for (Uint64 i = 0; i < l; ++i) {
    Uint64 m = GetLe(in, 4);
    if (m < 2) throw FormatError("sample file conductor below 2");
    file.moduli.push_back(m);
    n *= EulerPhi(m);
  }
  file.q = GetLe(in, 8);
  file.fraction_bits = static_cast<int>(GetLe(in, 1));
  if (file.q < 2 || file.fraction_bits > 62 ||
      file.q >= (Uint64{1} << (63 - file.fraction_bits))) {
    throw FormatError("sample file modulus or precision out of range");
  }
  const Uint64 b_bound = file.q << file.fraction_bits;
  const Uint64 count = GetLe(in, 8);
  for (Uint64 k = 0; k < count; ++k) {
    std::vector<Uint64> a(n), b(n);
    for (Uint64& v : a) {
      v = GetLe(in, 8);
      if (v >= file.q) throw FormatError("sample file coefficient of a out of range");
    }
    for (Uint64& v : b) {
      v = GetLe(in, 8);
      if (v >= b_bound) throw FormatError("sample file coefficient of b out of range");
    }
    file.a.push_back(std::move(a));
    file.b.push_back(std::move(b));
  }
  return file;
}

std::vector<RlweSample> ToRlweSamples(const RlweContext& ctx, const SampleFile& file) {
  CheckFileMatches(file, ctx.params(), ctx.fraction_bits());
  std::vector<RlweSample> out;
  for (size_t k = 0; k < file.a.size(); ++k) {
    out.push_back(RlweSample{RingElement::FromCoefficients(ctx.ring(), file.a[k]), file.b[k]});
  }
  return out;
}

std::vector<DiscreteSample> ToDiscreteSamples(const RingContextPtr& ring, const SampleFile& file) {
  CheckFileMatches(file, ring->params(), 0);
  std::vector<DiscreteSample> out;
  for (size_t k = 0; k < file.a.size(); ++k) {
    out.push_back(DiscreteSample{RingElement::FromCoefficients(ring, file.a[k]),
                                 RingElement::FromCoefficients(ring, file.b[k])});
  }
  return out;
}

}  // namespace mrlwe
