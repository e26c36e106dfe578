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


#ifndef MRLWE_RING_H_
#define MRLWE_RING_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "mrlwe/modarith.h"
#include "mrlwe/params.h"
#include "mrlwe/rng.h"

namespace mrlwe {

// Units k = (k_1, ..., k_l), k_i in Z_{m_i}^*, naming the automorphism
// x_i -> x_i^{k_i}.
struct AutomorphismIndex {
  std::vector<Uint64> k;

  static AutomorphismIndex Identity(const RingParams& params);
  // Throws std::invalid_argument on wrong arity or a non-unit entry.
  void CheckValid(const RingParams& params) const;
  AutomorphismIndex Inverse(const RingParams& params) const;
  AutomorphismIndex Compose(const AutomorphismIndex& other,
                            const RingParams& params) const;
  bool operator==(const AutomorphismIndex&) const = default;
};

// Every element of prod_i Z_{m_i}^*, first dimension fastest.
std::vector<AutomorphismIndex> AllAutomorphisms(const RingParams& params);

// Precomputed evaluation tables for one validated RingParams. Shared
// read-only between all elements built on it.
class RingContext {
 public:
  // Throws std::invalid_argument when Validate(params) fails.
  static std::shared_ptr<const RingContext> Create(const RingParams& params);

  const RingParams& params() const { return params_; }
  size_t n() const { return params_.total_degree(); }
  Uint64 q() const { return params_.q(); }
  // Units of Z_{m_i} in ascending order; slot j_i sits at w_i^{units[i][j_i]}.
  const std::vector<Uint64>& units(size_t axis) const { return axes_[axis].units; }
  const std::vector<Int64>& cyclotomic(size_t axis) const { return axes_[axis].phi; }
  const std::vector<std::vector<Int64>>& cyclotomics() const { return phis_; }

  // Coefficient vector -> slot vector and back, in place.
  void ForwardTransform(std::vector<Uint64>& data) const;
  void InverseTransform(std::vector<Uint64>& data) const;

  // Flat slot index holding the evaluation at (w_i^{u_i}); every u_i must be
  // a unit modulo m_i.
  size_t SlotOfUnits(std::span<const Uint64> units) const;

  // perm[j] = slot index of (u_{j_i} * k_i^{-1}); tau_k moves the value in
  // slot j to slot perm[j].
  std::vector<size_t> SlotPermutation(const AutomorphismIndex& k) const;

 private:
  struct Axis {
    Uint64 m = 0;
    size_t n = 0;
    bool ntt = false;
    std::vector<Uint64> units;
    std::vector<Int64> phi;
    std::vector<size_t> slot_of_residue;  // n for non-units
    // Negacyclic NTT tables.
    std::vector<Uint64> psi_powers;
    std::vector<Uint64> psi_inv_powers;  // already scaled by 1/n
    std::vector<Uint64> forward_twiddles;
    std::vector<Uint64> inverse_twiddles;
    // Shoup quotients of the four tables above.
    std::vector<Uint64> psi_powers_shoup;
    std::vector<Uint64> psi_inv_powers_shoup;
    std::vector<Uint64> forward_twiddles_shoup;
    std::vector<Uint64> inverse_twiddles_shoup;
    std::vector<size_t> bit_reverse;
    Uint64 n_inv = 1;
    // Dense evaluation matrix and its inverse, row-major n x n.
    std::vector<Uint64> vandermonde;
    std::vector<Uint64> vandermonde_inv;
  };

  explicit RingContext(const RingParams& params);
  void TransformAxis(std::vector<Uint64>& data, size_t axis, bool inverse) const;
  void NttForward(const Axis& axis, std::vector<Uint64>& fiber) const;
  void NttInverse(const Axis& axis, std::vector<Uint64>& fiber) const;

  RingParams params_;
  std::vector<Axis> axes_;
  std::vector<std::vector<Int64>> phis_;
};

using RingContextPtr = std::shared_ptr<const RingContext>;

enum class Repr { kCoefficient, kSlot };

// An element of R_q in either the power basis (tensor of 1, x_i, ...,
// x_i^{n_i - 1}) or the CRT-slot basis, both flattened by index_map.
class RingElement {
 public:
  static RingElement Zero(RingContextPtr ctx, Repr repr = Repr::kCoefficient);
  static RingElement One(RingContextPtr ctx, Repr repr = Repr::kCoefficient);
  // Throws std::invalid_argument on wrong length or entries >= q.
  static RingElement FromCoefficients(RingContextPtr ctx, std::vector<Uint64> data);
  static RingElement FromSigned(RingContextPtr ctx, std::span<const Int64> data);
  static RingElement FromSlotValues(RingContextPtr ctx, std::vector<Uint64> data);
  // x_1^{e_1} ... x_l^{e_l} for arbitrary nonnegative exponents.
  static RingElement Monomial(RingContextPtr ctx, std::span<const Uint64> exponents);
  static RingElement Random(RingContextPtr ctx, Rng& rng,
                            Repr repr = Repr::kCoefficient);

  const RingContextPtr& context() const { return ctx_; }
  const RingParams& params() const { return ctx_->params(); }
  Repr repr() const { return repr_; }
  const std::vector<Uint64>& data() const { return data_; }
  size_t size() const { return data_.size(); }

  RingElement ToSlots() const;
  RingElement ToCoefficients() const;
  RingElement ToRepr(Repr repr) const;

  // Both operands must share params and representation.
  RingElement Add(const RingElement& other) const;
  RingElement Sub(const RingElement& other) const;
  RingElement Neg() const;
  RingElement ScalarMul(Uint64 scalar) const;

  // Product through the CRT slots. Accepts mixed representations and
  // returns the representation of *this.
  RingElement Mul(const RingElement& other) const;

  // Quadratic-time product of coefficient vectors with explicit reduction
  // modulo each Phi_{m_i}. Returns a coefficient-representation element.
  RingElement MulSchoolbook(const RingElement& other) const;

  // Coefficient input: substitution x_i -> x_i^{k_i}. Slot input: permutes
  // slots. The representation is preserved.
  RingElement ApplyAutomorphism(const AutomorphismIndex& k) const;

  // nullopt exactly when some slot is zero.
  std::optional<RingElement> Invert() const;

  // Mathematical equality regardless of representation.
  bool operator==(const RingElement& other) const;

  RingElement operator+(const RingElement& other) const { return Add(other); }
  RingElement operator-(const RingElement& other) const { return Sub(other); }
  RingElement operator-() const { return Neg(); }
  RingElement operator*(const RingElement& other) const { return Mul(other); }

 private:
  RingElement(RingContextPtr ctx, Repr repr, std::vector<Uint64> data);
  void CheckCompatible(const RingElement& other) const;

  RingContextPtr ctx_;
  Repr repr_;
  std::vector<Uint64> data_;
};

// c_j with slot vector e_j, for j = 0, ..., n - 1 (coefficient representation).
std::vector<RingElement> CrtBasis(const RingContextPtr& ctx);

// Writes and reads n little-endian u64 coefficients.
std::vector<std::uint8_t> SerializeCoefficients(const RingElement& a);
RingElement DeserializeCoefficients(const RingContextPtr& ctx,
                                    std::span<const std::uint8_t> bytes);

}  // namespace mrlwe

#endif  // MRLWE_RING_H_
