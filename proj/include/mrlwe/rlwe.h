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


#ifndef MRLWE_RLWE_H_
#define MRLWE_RLWE_H_

#include <cstddef>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "mrlwe/embedding.h"
#include "mrlwe/gaussian.h"
#include "mrlwe/params.h"
#include "mrlwe/ring.h"
#include "mrlwe/rng.h"

namespace mrlwe {

inline constexpr int kDefaultFractionBits = 24;

// Torus elements b in K_R / R^dual are stored by their coordinates in the
// basis of R^dual (power basis scaled by the dual scale), reduced to [0, 1)
// and held as fixed-point integers B = b * q * 2^f in [0, q 2^f). Multiplying
// by q turns the torus into R^dual / q R^dual, so B >> f is the integer part
// of q b, which is where a * s lives.
//
// Elements of R^dual_q are likewise held as R_q values of their R^dual
// coordinates; products with R_q elements are then ordinary ring products.
class RlweContext {
 public:
  // Throws std::invalid_argument on invalid params, a conductor that is not
  // a power of two, or q 2^f >= 2^63.
  static std::shared_ptr<const RlweContext> Create(const RingParams& params,
                                                   int fraction_bits = kDefaultFractionBits);

  const RingParams& params() const { return ring_->params(); }
  const RingContextPtr& ring() const { return ring_; }
  const EmbeddingContext& embedding() const { return *embedding_; }
  const DualScale& dual_scale() const { return dual_; }
  size_t n() const { return ring_->n(); }
  Uint64 q() const { return ring_->q(); }
  int fraction_bits() const { return fraction_bits_; }
  // q * 2^f.
  Uint64 torus_modulus() const { return torus_modulus_; }

  // Real power-basis coefficients of an element of K_R to its R^dual
  // coordinates.
  RealVector ToDualCoordinates(std::span<const double> coeffs) const;
  // Fixed-point value of q * y mod q for real R^dual coordinates y.
  std::vector<Uint64> ScaleToTorus(std::span<const double> dual_coords) const;

 private:
  RlweContext() = default;
  RingContextPtr ring_;
  std::shared_ptr<const EmbeddingContext> embedding_;
  DualScale dual_;
  int fraction_bits_ = 0;
  Uint64 torus_modulus_ = 0;
};

using RlweContextPtr = std::shared_ptr<const RlweContext>;

struct RlweSample {
  RingElement a;           // coefficient representation
  std::vector<Uint64> b;   // fixed point in [0, q 2^f)
};

// s in R^dual_q, held as its R^dual coordinates.
struct SecretKey {
  RingElement s;
  DualScale scale;

  static SecretKey Random(const RlweContext& ctx, Rng& rng);
  static SecretKey FromElement(const RlweContext& ctx, RingElement s);
};

// (a, b = a s / q + e mod R^dual), a uniform, e ~ psi.
RlweSample SampleRlwe(const RlweContext& ctx, const SecretKey& key, const GaussianSpec& psi,
                      Rng& rng);
// Same with a caller-supplied error given by real power-basis coefficients
// (a zero vector gives the noiseless sample).
RlweSample SampleRlweWithError(const RlweContext& ctx, const SecretKey& key,
                               std::span<const double> error_coeffs, Rng& rng);
RlweSample SampleUniformPair(const RlweContext& ctx, Rng& rng);

// h in R^dual_q with slots [0, j) uniform and slots [j, n) zero.
RingElement UniformSlotMask(const RlweContext& ctx, size_t j, Rng& rng);
// (a, b + h / q) for h = UniformSlotMask(j). Throws std::out_of_range if j > n.
RlweSample AddUniformSlots(const RlweContext& ctx, const RlweSample& sample, size_t j,
                           Rng& rng);
// A^j: an A_{s, psi} draw with slots [0, j) of b randomized.
RlweSample SampleHybrid(const RlweContext& ctx, const SecretKey& key, const GaussianSpec& psi,
                        size_t j, Rng& rng);

// q b - a s as real R^dual coordinates, centered into (-q/2, q/2].
RealVector CenteredResidual(const RlweContext& ctx, const RingElement& s,
                            const RlweSample& sample);
// Slot values of the rounded residual q b - a s mod q.
std::vector<Uint64> ResidualSlots(const RlweContext& ctx, const RingElement& s,
                                  const RlweSample& sample);

// Pair in R_q x R^dual_q.
struct DiscreteSample {
  RingElement a;
  RingElement b;  // R^dual coordinates
};

// a = p a', b = nearest point of w + p R^dual to p q b', reduced mod q.
// Throws std::invalid_argument when gcd(p, q) != 1 or w has the wrong length.
DiscreteSample ToDiscrete(const RlweContext& ctx, const RlweSample& sample, Int64 p,
                          std::span<const Int64> w);

class StreamExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NormalForm {
  DiscreteSample pivot;          // the consumed (a_0, b_0)
  size_t attempts = 0;           // samples examined to find an invertible a_0
  std::vector<DiscreteSample> samples;
};

// 64 * ceil(1 / (1 - 1/q)^n).
size_t NormalFormRetryCap(const RingParams& params);

// Consumes leading samples until a_0 is invertible, then maps every later
// (a, b) to (a', b') with a' = -a a_0^{-1}, b' = b + a' b_0, so that
// b' = a' e_0 + e. Throws std::invalid_argument for fewer than two samples
// and StreamExhausted when the cap or the stream runs out first.
NormalForm ToNormalForm(std::span<const DiscreteSample> stream);

// MRLW sample files (little-endian):
//   "MRLW" | version u16 | l u8 | m_i u32 ... | q u64 | f u8 | count u64 |
//   per sample: n u64 for a, n u64 for b.
// Discrete streams are written with f = 0.
inline constexpr std::uint16_t kSampleFileVersion = 1;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SampleFile {
  std::vector<Uint64> moduli;
  Uint64 q = 0;
  int fraction_bits = 0;
  std::vector<std::vector<Uint64>> a;
  std::vector<std::vector<Uint64>> b;

  RingParams params() const { return RingParams::Create(moduli, q); }
};

void WriteSamples(std::ostream& out, const RlweContext& ctx, std::span<const RlweSample> samples);
void WriteDiscreteSamples(std::ostream& out, const RingParams& params,
                          std::span<const DiscreteSample> samples);
// Throws FormatError on bad magic, version, truncation or out-of-range values.
SampleFile ReadSampleFile(std::istream& in);
// Throws FormatError when the file does not match the context.
std::vector<RlweSample> ToRlweSamples(const RlweContext& ctx, const SampleFile& file);
std::vector<DiscreteSample> ToDiscreteSamples(const RingContextPtr& ring, const SampleFile& file);

}  // namespace mrlwe

#endif  // MRLWE_RLWE_H_
