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


#include "mrlwe/ring.h"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "mrlwe/tensor_poly.h"

namespace mrlwe {

AutomorphismIndex AutomorphismIndex::Identity(const RingParams& params) {
  return AutomorphismIndex{std::vector<Uint64>(params.dims(), 1)};
}

void AutomorphismIndex::CheckValid(const RingParams& params) const {
  if (k.size() != params.dims()) {
    throw std::invalid_argument("AutomorphismIndex: wrong number of units");
  }
  for (size_t i = 0; i < k.size(); ++i) {
    Uint64 m = params.moduli()[i];
    if (Gcd(k[i] % m, m) != 1) {
      throw std::invalid_argument("AutomorphismIndex: k_" + std::to_string(i + 1) +
                                  "=" + std::to_string(k[i]) +
                                  " is not a unit mod " + std::to_string(m));
    }
  }
}

AutomorphismIndex AutomorphismIndex::Inverse(const RingParams& params) const {
  CheckValid(params);
  AutomorphismIndex inv;
  for (size_t i = 0; i < k.size(); ++i) {
    Uint64 m = params.moduli()[i];
    inv.k.push_back(m == 2 ? 1 : InvMod(k[i] % m, m));
  }
  return inv;
}

AutomorphismIndex AutomorphismIndex::Compose(const AutomorphismIndex& other,
                                             const RingParams& params) const {
  CheckValid(params);
  other.CheckValid(params);
  AutomorphismIndex out;
  for (size_t i = 0; i < k.size(); ++i) {
    out.k.push_back(MulMod(k[i], other.k[i], params.moduli()[i]));
  }
  return out;
}

std::vector<AutomorphismIndex> AllAutomorphisms(const RingParams& params) {
  std::vector<std::vector<Uint64>> units;
  std::vector<size_t> radices;
  for (Uint64 m : params.moduli()) {
    units.push_back(Units(m));
    radices.push_back(units.back().size());
  }
  MixedRadix index(radices);
  std::vector<AutomorphismIndex> all;
  for (size_t flat = 0; flat < index.size(); ++flat) {
    std::vector<size_t> multi = index.Unmap(flat);
    AutomorphismIndex a;
    for (size_t i = 0; i < multi.size(); ++i) a.k.push_back(units[i][multi[i]]);
    all.push_back(std::move(a));
  }
  return all;
}

// ---------------------------------------------------------------------------
// RingContext

namespace {

// Inverts a square matrix over Z_q by Gauss-Jordan elimination.
std::vector<Uint64> InvertMatrix(std::vector<Uint64> a, size_t n, Uint64 q) {
  std::vector<Uint64> inv(n * n, 0);
  for (size_t i = 0; i < n; ++i) inv[i * n + i] = 1;
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    while (pivot < n && a[pivot * n + col] == 0) ++pivot;
    if (pivot == n) throw std::logic_error("singular evaluation matrix");
    if (pivot != col) {
      for (size_t j = 0; j < n; ++j) {
        std::swap(a[pivot * n + j], a[col * n + j]);
        std::swap(inv[pivot * n + j], inv[col * n + j]);
      }
    }
    Uint64 scale = InvMod(a[col * n + col], q);
    for (size_t j = 0; j < n; ++j) {
      a[col * n + j] = MulMod(a[col * n + j], scale, q);
      inv[col * n + j] = MulMod(inv[col * n + j], scale, q);
    }
    for (size_t row = 0; row < n; ++row) {
      if (row == col || a[row * n + col] == 0) continue;
      Uint64 factor = a[row * n + col];
      for (size_t j = 0; j < n; ++j) {
        a[row * n + j] = SubMod(a[row * n + j], MulMod(factor, a[col * n + j], q), q);
        inv[row * n + j] =
            SubMod(inv[row * n + j], MulMod(factor, inv[col * n + j], q), q);
      }
    }
  }
  return inv;
}

std::vector<Uint64> StageTwiddles(Uint64 omega, size_t n, Uint64 q) {
  // Entry h + j holds omega^{j * n / (2h)} for the stage of half-size h.
  std::vector<Uint64> table(std::max<size_t>(n, 1), 0);
  for (size_t half = 1; half < n; half <<= 1) {
    Uint64 step = PowMod(omega, n / (2 * half), q);
    Uint64 w = 1;
    for (size_t j = 0; j < half; ++j) {
      table[half + j] = w;
      w = MulMod(w, step, q);
    }
  }
  return table;
}

}  // namespace

std::shared_ptr<const RingContext> RingContext::Create(const RingParams& params) {
  ValidationReport report = Validate(params);
  if (!report.valid()) {
    std::string message = "RingContext: invalid parameters " + params.ToString();
    for (const auto& f : report.failures) message += "; " + f;
    throw std::invalid_argument(message);
  }
  return std::shared_ptr<const RingContext>(new RingContext(params));
}

RingContext::RingContext(const RingParams& params) : params_(params) {
  const Uint64 q = params.q();
  for (size_t i = 0; i < params.dims(); ++i) {
    Axis axis;
    axis.m = params.moduli()[i];
    axis.n = params.degrees()[i];
    axis.units = Units(axis.m);
    axis.phi = CyclotomicPolynomial(axis.m);
    axis.slot_of_residue.assign(axis.m, axis.n);
    for (size_t j = 0; j < axis.units.size(); ++j) {
      axis.slot_of_residue[axis.units[j]] = j;
    }
    const Uint64 w = params.roots()[i];
    axis.ntt = IsPowerOfTwo(axis.m);
    if (axis.ntt) {
      const size_t n = axis.n;
      const Uint64 w_inv = InvMod(w, q);
      axis.psi_powers.resize(n);
      axis.psi_inv_powers.resize(n);
      Uint64 p = 1, p_inv = 1;
      for (size_t j = 0; j < n; ++j) {
        axis.psi_powers[j] = p;
        axis.psi_inv_powers[j] = p_inv;
        p = MulMod(p, w, q);
        p_inv = MulMod(p_inv, w_inv, q);
      }
      Uint64 omega = MulMod(w, w, q);
      axis.forward_twiddles = StageTwiddles(omega, n, q);
      axis.inverse_twiddles = StageTwiddles(InvMod(omega, q), n, q);
      axis.n_inv = InvMod(n % q, q);
      for (Uint64& v : axis.psi_inv_powers) v = MulMod(v, axis.n_inv, q);
      auto shoup = [q](const std::vector<Uint64>& table) {
        std::vector<Uint64> out;
        out.reserve(table.size());
        for (Uint64 v : table) out.push_back(ShoupPrecompute(v, q));
        return out;
      };
      axis.psi_powers_shoup = shoup(axis.psi_powers);
      axis.psi_inv_powers_shoup = shoup(axis.psi_inv_powers);
      axis.forward_twiddles_shoup = shoup(axis.forward_twiddles);
      axis.inverse_twiddles_shoup = shoup(axis.inverse_twiddles);
      axis.bit_reverse.resize(n);
      size_t bits = 0;
      while ((size_t{1} << bits) < n) ++bits;
      for (size_t j = 0; j < n; ++j) {
        size_t r = 0;
        for (size_t b = 0; b < bits; ++b) r |= ((j >> b) & 1) << (bits - 1 - b);
        axis.bit_reverse[j] = r;
      }
    } else {
      const size_t n = axis.n;
      axis.vandermonde.resize(n * n);
      for (size_t r = 0; r < n; ++r) {
        Uint64 point = PowMod(w, axis.units[r], q);
        Uint64 power = 1;
        for (size_t c = 0; c < n; ++c) {
          axis.vandermonde[r * n + c] = power;
          power = MulMod(power, point, q);
        }
      }
      axis.vandermonde_inv = InvertMatrix(axis.vandermonde, n, q);
    }
    phis_.push_back(axis.phi);
    axes_.push_back(std::move(axis));
  }
}

void RingContext::NttForward(const Axis& axis, std::vector<Uint64>& a) const {
  const Uint64 q = params_.q();
  const size_t n = axis.n;
  for (size_t j = 0; j < n; ++j) {
    a[j] = MulModShoup(a[j], axis.psi_powers[j], axis.psi_powers_shoup[j], q);
  }
  for (size_t j = 0; j < n; ++j) {
    if (j < axis.bit_reverse[j]) std::swap(a[j], a[axis.bit_reverse[j]]);
  }
  for (size_t half = 1; half < n; half <<= 1) {
    for (size_t start = 0; start < n; start += 2 * half) {
      for (size_t j = 0; j < half; ++j) {
        Uint64 u = a[start + j];
        Uint64 v = MulModShoup(a[start + j + half], axis.forward_twiddles[half + j],
                               axis.forward_twiddles_shoup[half + j], q);
        a[start + j] = AddMod(u, v, q);
        a[start + j + half] = SubMod(u, v, q);
      }
    }
  }
}

void RingContext::NttInverse(const Axis& axis, std::vector<Uint64>& a) const {
  const Uint64 q = params_.q();
  const size_t n = axis.n;
  for (size_t j = 0; j < n; ++j) {
    if (j < axis.bit_reverse[j]) std::swap(a[j], a[axis.bit_reverse[j]]);
  }
  for (size_t half = 1; half < n; half <<= 1) {
    for (size_t start = 0; start < n; start += 2 * half) {
      for (size_t j = 0; j < half; ++j) {
        Uint64 u = a[start + j];
        Uint64 v = MulModShoup(a[start + j + half], axis.inverse_twiddles[half + j],
                               axis.inverse_twiddles_shoup[half + j], q);
        a[start + j] = AddMod(u, v, q);
        a[start + j + half] = SubMod(u, v, q);
      }
    }
  }
  for (size_t j = 0; j < n; ++j) {
    a[j] = MulModShoup(a[j], axis.psi_inv_powers[j], axis.psi_inv_powers_shoup[j], q);
  }
}

void RingContext::TransformAxis(std::vector<Uint64>& data, size_t index,
                                bool inverse) const {
  const Axis& axis = axes_[index];
  const Uint64 q = params_.q();
  const size_t n = axis.n;
  std::vector<Uint64> fiber(n), out(n);
  ForEachFiber(params_.degrees(), index, [&](size_t start, size_t stride) {
    for (size_t j = 0; j < n; ++j) fiber[j] = data[start + j * stride];
    if (axis.ntt) {
      if (inverse) {
        NttInverse(axis, fiber);
      } else {
        NttForward(axis, fiber);
      }
      out.swap(fiber);
    } else {
      const std::vector<Uint64>& matrix =
          inverse ? axis.vandermonde_inv : axis.vandermonde;
      for (size_t r = 0; r < n; ++r) {
        Uint64 acc = 0;
        for (size_t c = 0; c < n; ++c) {
          acc = AddMod(acc, MulMod(matrix[r * n + c], fiber[c], q), q);
        }
        out[r] = acc;
      }
    }
    for (size_t j = 0; j < n; ++j) data[start + j * stride] = out[j];
  });
}

void RingContext::ForwardTransform(std::vector<Uint64>& data) const {
  for (size_t i = 0; i < axes_.size(); ++i) TransformAxis(data, i, false);
}

void RingContext::InverseTransform(std::vector<Uint64>& data) const {
  for (size_t i = 0; i < axes_.size(); ++i) TransformAxis(data, i, true);
}

size_t RingContext::SlotOfUnits(std::span<const Uint64> units) const {
  if (units.size() != axes_.size()) {
    throw std::invalid_argument("SlotOfUnits: wrong number of units");
  }
  std::vector<size_t> multi(units.size());
  for (size_t i = 0; i < units.size(); ++i) {
    size_t slot = axes_[i].slot_of_residue[units[i] % axes_[i].m];
    if (slot == axes_[i].n) throw std::invalid_argument("SlotOfUnits: non-unit");
    multi[i] = slot;
  }
  return params_.index().Map(multi);
}

std::vector<size_t> RingContext::SlotPermutation(const AutomorphismIndex& k) const {
  AutomorphismIndex inv = k.Inverse(params_);
  std::vector<size_t> perm(n());
  std::vector<Uint64> target(axes_.size());
  for (size_t j = 0; j < n(); ++j) {
    std::vector<size_t> multi = params_.index().Unmap(j);
    for (size_t i = 0; i < axes_.size(); ++i) {
      target[i] = MulMod(axes_[i].units[multi[i]], inv.k[i], axes_[i].m);
    }
    perm[j] = SlotOfUnits(target);
  }
  return perm;
}

// ---------------------------------------------------------------------------
// RingElement

RingElement::RingElement(RingContextPtr ctx, Repr repr, std::vector<Uint64> data)
    : ctx_(std::move(ctx)), repr_(repr), data_(std::move(data)) {}

RingElement RingElement::Zero(RingContextPtr ctx, Repr repr) {
  size_t n = ctx->n();
  return RingElement(std::move(ctx), repr, std::vector<Uint64>(n, 0));
}

RingElement RingElement::One(RingContextPtr ctx, Repr repr) {
  std::vector<Uint64> data(ctx->n(), 0);
  if (repr == Repr::kSlot) {
    std::fill(data.begin(), data.end(), 1);
  } else {
    data[0] = 1;
  }
  return RingElement(std::move(ctx), repr, std::move(data));
}

namespace {

void CheckData(const RingContext& ctx, const std::vector<Uint64>& data) {
  if (data.size() != ctx.n()) {
    throw std::invalid_argument("RingElement: expected " + std::to_string(ctx.n()) +
                                " entries, got " + std::to_string(data.size()));
  }
  for (Uint64 v : data) {
    if (v >= ctx.q()) throw std::invalid_argument("RingElement: entry >= q");
  }
}

}  // namespace

RingElement RingElement::FromCoefficients(RingContextPtr ctx, std::vector<Uint64> data) {
  CheckData(*ctx, data);
  return RingElement(std::move(ctx), Repr::kCoefficient, std::move(data));
}

RingElement RingElement::FromSigned(RingContextPtr ctx, std::span<const Int64> data) {
  std::vector<Uint64> reduced;
  reduced.reserve(data.size());
  for (Int64 v : data) reduced.push_back(ReduceSigned(v, ctx->q()));
  return FromCoefficients(std::move(ctx), std::move(reduced));
}

RingElement RingElement::FromSlotValues(RingContextPtr ctx, std::vector<Uint64> data) {
  CheckData(*ctx, data);
  return RingElement(std::move(ctx), Repr::kSlot, std::move(data));
}

RingElement RingElement::Monomial(RingContextPtr ctx, std::span<const Uint64> exponents) {
  const RingParams& params = ctx->params();
  if (exponents.size() != params.dims()) {
    throw std::invalid_argument("Monomial: wrong number of exponents");
  }
  // Place x^{e mod m} on the extended grid and reduce, as in substitution.
  std::vector<size_t> dims(params.moduli().begin(), params.moduli().end());
  std::vector<Uint64> grid(GridSize(dims), 0);
  size_t target = 0, stride = 1;
  for (size_t i = 0; i < dims.size(); ++i) {
    target += static_cast<size_t>(exponents[i] % params.moduli()[i]) * stride;
    stride *= dims[i];
  }
  grid[target] = 1;
  ModQField field{ctx->q()};
  for (size_t i = 0; i < dims.size(); ++i) {
    grid = ReduceAxis(field, grid, dims, i, ctx->cyclotomic(i));
  }
  return RingElement(std::move(ctx), Repr::kCoefficient, std::move(grid));
}

RingElement RingElement::Random(RingContextPtr ctx, Rng& rng, Repr repr) {
  std::vector<Uint64> data(ctx->n());
  for (Uint64& v : data) v = rng.UniformBelow(ctx->q());
  return RingElement(std::move(ctx), repr, std::move(data));
}

RingElement RingElement::ToSlots() const {
  if (repr_ == Repr::kSlot) return *this;
  std::vector<Uint64> data = data_;
  ctx_->ForwardTransform(data);
  return RingElement(ctx_, Repr::kSlot, std::move(data));
}

RingElement RingElement::ToCoefficients() const {
  if (repr_ == Repr::kCoefficient) return *this;
  std::vector<Uint64> data = data_;
  ctx_->InverseTransform(data);
  return RingElement(ctx_, Repr::kCoefficient, std::move(data));
}

RingElement RingElement::ToRepr(Repr repr) const {
  return repr == Repr::kSlot ? ToSlots() : ToCoefficients();
}

void RingElement::CheckCompatible(const RingElement& other) const {
  if (ctx_ != other.ctx_ && !(ctx_->params() == other.ctx_->params())) {
    throw std::invalid_argument("RingElement: parameter mismatch");
  }
}

RingElement RingElement::Add(const RingElement& other) const {
  CheckCompatible(other);
  if (repr_ != other.repr_) {
    throw std::invalid_argument("RingElement::Add: representation mismatch");
  }
  std::vector<Uint64> out(data_.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = AddMod(data_[i], other.data_[i], ctx_->q());
  return RingElement(ctx_, repr_, std::move(out));
}

RingElement RingElement::Sub(const RingElement& other) const {
  CheckCompatible(other);
  if (repr_ != other.repr_) {
    throw std::invalid_argument("RingElement::Sub: representation mismatch");
  }
  std::vector<Uint64> out(data_.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = SubMod(data_[i], other.data_[i], ctx_->q());
  return RingElement(ctx_, repr_, std::move(out));
}

RingElement RingElement::Neg() const {
  std::vector<Uint64> out(data_.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = NegMod(data_[i], ctx_->q());
  return RingElement(ctx_, repr_, std::move(out));
}

RingElement RingElement::ScalarMul(Uint64 scalar) const {
  scalar %= ctx_->q();
  std::vector<Uint64> out(data_.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = MulMod(data_[i], scalar, ctx_->q());
  return RingElement(ctx_, repr_, std::move(out));
}

RingElement RingElement::Mul(const RingElement& other) const {
  CheckCompatible(other);
  RingElement x = ToSlots();
  RingElement y = other.ToSlots();
  std::vector<Uint64> out(data_.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = MulMod(x.data_[i], y.data_[i], ctx_->q());
  return RingElement(ctx_, Repr::kSlot, std::move(out)).ToRepr(repr_);
}

RingElement RingElement::MulSchoolbook(const RingElement& other) const {
  CheckCompatible(other);
  const RingElement a = ToCoefficients();
  const RingElement b = other.ToCoefficients();
  const RingParams& params = ctx_->params();
  const Uint64 q = ctx_->q();
  const size_t l = params.dims();
  const size_t n = ctx_->n();

  // Extended grid with lengths 2 n_i - 1 holds the unreduced product.
  std::vector<size_t> dims(l);
  std::vector<size_t> ext_strides(l);
  size_t ext_size = 1;
  for (size_t i = 0; i < l; ++i) {
    dims[i] = 2 * params.degrees()[i] - 1;
    ext_strides[i] = ext_size;
    ext_size *= dims[i];
  }
  std::vector<size_t> offset(n);
  for (size_t flat = 0; flat < n; ++flat) {
    std::vector<size_t> multi = params.index().Unmap(flat);
    size_t o = 0;
    for (size_t i = 0; i < l; ++i) o += multi[i] * ext_strides[i];
    offset[flat] = o;
  }

  std::vector<Uint64> grid(ext_size, 0);
  if (q < (Uint64{1} << 32)) {
    // Products fit in 64 bits; accumulate exactly in 128 bits.
    std::vector<Uint128> acc(ext_size, 0);
    for (size_t i = 0; i < n; ++i) {
      Uint64 ai = a.data_[i];
      if (ai == 0) continue;
      size_t oi = offset[i];
      for (size_t j = 0; j < n; ++j) acc[oi + offset[j]] += ai * b.data_[j];
    }
    for (size_t i = 0; i < ext_size; ++i) grid[i] = static_cast<Uint64>(acc[i] % q);
  } else {
    for (size_t i = 0; i < n; ++i) {
      Uint64 ai = a.data_[i];
      if (ai == 0) continue;
      size_t oi = offset[i];
      for (size_t j = 0; j < n; ++j) {
        Uint64& cell = grid[oi + offset[j]];
        cell = AddMod(cell, MulMod(ai, b.data_[j], q), q);
      }
    }
  }
  ModQField field{q};
  for (size_t i = 0; i < l; ++i) grid = ReduceAxis(field, grid, dims, i, ctx_->cyclotomic(i));
  return RingElement(ctx_, Repr::kCoefficient, std::move(grid));
}

RingElement RingElement::ApplyAutomorphism(const AutomorphismIndex& k) const {
  k.CheckValid(ctx_->params());
  if (repr_ == Repr::kSlot) {
    std::vector<size_t> perm = ctx_->SlotPermutation(k);
    std::vector<Uint64> out(data_.size());
    for (size_t j = 0; j < data_.size(); ++j) out[perm[j]] = data_[j];
    return RingElement(ctx_, Repr::kSlot, std::move(out));
  }
  const RingParams& params = ctx_->params();
  std::vector<Uint64> out = SubstituteMonomials(
      ModQField{ctx_->q()}, std::span<const Uint64>(data_), params.degrees(),
      params.moduli(), k.k, ctx_->cyclotomics());
  return RingElement(ctx_, Repr::kCoefficient, std::move(out));
}

std::optional<RingElement> RingElement::Invert() const {
  RingElement slots = ToSlots();
  std::vector<Uint64> out(data_.size());
  for (size_t i = 0; i < out.size(); ++i) {
    if (slots.data_[i] == 0) return std::nullopt;
    out[i] = InvMod(slots.data_[i], ctx_->q());
  }
  return RingElement(ctx_, Repr::kSlot, std::move(out)).ToRepr(repr_);
}

bool RingElement::operator==(const RingElement& other) const {
  if (!(ctx_->params() == other.ctx_->params())) return false;
  if (repr_ == other.repr_) return data_ == other.data_;
  return ToCoefficients().data_ == other.ToCoefficients().data_;
}

std::vector<RingElement> CrtBasis(const RingContextPtr& ctx) {
  std::vector<RingElement> basis;
  basis.reserve(ctx->n());
  for (size_t j = 0; j < ctx->n(); ++j) {
    std::vector<Uint64> unit(ctx->n(), 0);
    unit[j] = 1;
    basis.push_back(RingElement::FromSlotValues(ctx, std::move(unit)).ToCoefficients());
  }
  return basis;
}

std::vector<std::uint8_t> SerializeCoefficients(const RingElement& a) {
  RingElement c = a.ToCoefficients();
  std::vector<std::uint8_t> bytes;
  bytes.reserve(8 * c.size());
  for (Uint64 v : c.data()) {
    for (int b = 0; b < 8; ++b) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
  }
  return bytes;
}

RingElement DeserializeCoefficients(const RingContextPtr& ctx,
                                    std::span<const std::uint8_t> bytes) {
  if (bytes.size() != 8 * ctx->n()) {
    throw std::invalid_argument("DeserializeCoefficients: wrong byte count");
  }
  std::vector<Uint64> data(ctx->n());
  for (size_t i = 0; i < data.size(); ++i) {
    Uint64 v = 0;
    for (int b = 0; b < 8; ++b) v |= static_cast<Uint64>(bytes[8 * i + b]) << (8 * b);
    data[i] = v;
  }
  return RingElement::FromCoefficients(ctx, std::move(data));
}

}  // namespace mrlwe
