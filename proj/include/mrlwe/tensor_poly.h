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


#ifndef MRLWE_TENSOR_POLY_H_
#define MRLWE_TENSOR_POLY_H_

// Generic helpers for polynomials laid out on a mixed-radix grid (first
// axis fastest). Shared by the modular ring arithmetic and the real-valued
// embedding code, which differ only in the scalar field.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "mrlwe/modarith.h"

namespace mrlwe {

struct ModQField {
  using Value = Uint64;
  Uint64 q;
  Value Zero() const { return 0; }
  Value FromInt(Int64 v) const { return ReduceSigned(v, q); }
  Value Add(Value a, Value b) const { return AddMod(a, b, q); }
  Value Sub(Value a, Value b) const { return SubMod(a, b, q); }
  Value Mul(Value a, Value b) const { return MulMod(a, b, q); }
};

struct RealField {
  using Value = double;
  Value Zero() const { return 0.0; }
  Value FromInt(Int64 v) const { return static_cast<double>(v); }
  Value Add(Value a, Value b) const { return a + b; }
  Value Sub(Value a, Value b) const { return a - b; }
  Value Mul(Value a, Value b) const { return a * b; }
};

inline size_t GridSize(const std::vector<size_t>& dims) {
  size_t size = 1;
  for (size_t d : dims) size *= d;
  return size;
}

// Calls fn(start, stride) for every one-dimensional fiber along `axis`.
inline void ForEachFiber(const std::vector<size_t>& dims, size_t axis,
                         const std::function<void(size_t, size_t)>& fn) {
  size_t stride = 1;
  for (size_t i = 0; i < axis; ++i) stride *= dims[i];
  size_t block = stride * dims[axis];
  size_t total = GridSize(dims);
  for (size_t outer = 0; outer < total; outer += block) {
    for (size_t inner = 0; inner < stride; ++inner) fn(outer + inner, stride);
  }
}

// Reduces axis `axis` of `grid` (current length dims[axis]) modulo the monic
// integer polynomial `phi` (lowest degree first). dims is updated in place.
template <typename Field>
std::vector<typename Field::Value> ReduceAxis(
    const Field& field, const std::vector<typename Field::Value>& grid,
    std::vector<size_t>& dims, size_t axis, const std::vector<Int64>& phi) {
  using Value = typename Field::Value;
  const size_t degree = phi.size() - 1;
  const size_t length = dims[axis];
  std::vector<size_t> out_dims = dims;
  out_dims[axis] = degree;
  std::vector<Value> out(GridSize(out_dims), field.Zero());
  std::vector<Value> phi_values(phi.size());
  for (size_t i = 0; i < phi.size(); ++i) phi_values[i] = field.FromInt(phi[i]);

  std::vector<Value> fiber(length);
  ForEachFiber(dims, axis, [&](size_t start, size_t stride) {
    for (size_t k = 0; k < length; ++k) fiber[k] = grid[start + k * stride];
    for (size_t k = length; k-- > degree;) {
      Value lead = fiber[k];
      fiber[k] = field.Zero();
      for (size_t j = 0; j < degree; ++j) {
        fiber[k - degree + j] =
            field.Sub(fiber[k - degree + j], field.Mul(lead, phi_values[j]));
      }
    }
    // Output fibers share the same outer/inner decomposition; recompute the
    // start offset in the shrunken grid.
    size_t block = stride * length;
    size_t outer = start / block;
    size_t inner = start % stride;
    size_t out_start = outer * stride * degree + inner;
    for (size_t k = 0; k < degree && k < length; ++k) {
      out[out_start + k * stride] = fiber[k];
    }
  });
  dims = std::move(out_dims);
  return out;
}

// Applies x_i -> x_i^{k_i} to a coefficient vector on the grid of degrees
// `degrees`, reducing by Phi_{m_i} afterwards.
template <typename Field>
std::vector<typename Field::Value> SubstituteMonomials(
    const Field& field, std::span<const typename Field::Value> coeffs,
    const std::vector<size_t>& degrees, const std::vector<Uint64>& moduli,
    const std::vector<Uint64>& k, const std::vector<std::vector<Int64>>& phis) {
  using Value = typename Field::Value;
  const size_t l = degrees.size();
  std::vector<size_t> dims(moduli.begin(), moduli.end());
  std::vector<size_t> ext_strides(l);
  size_t stride = 1;
  for (size_t i = 0; i < l; ++i) {
    ext_strides[i] = stride;
    stride *= dims[i];
  }
  std::vector<Value> grid(stride, field.Zero());
  std::vector<size_t> multi(l, 0);
  for (size_t flat = 0; flat < coeffs.size(); ++flat) {
    size_t target = 0;
    for (size_t i = 0; i < l; ++i) {
      target += static_cast<size_t>((multi[i] * k[i]) % moduli[i]) * ext_strides[i];
    }
    grid[target] = field.Add(grid[target], coeffs[flat]);
    for (size_t i = 0; i < l; ++i) {
      if (++multi[i] < degrees[i]) break;
      multi[i] = 0;
    }
  }
  for (size_t i = 0; i < l; ++i) grid = ReduceAxis(field, grid, dims, i, phis[i]);
  return grid;
}

}  // namespace mrlwe

#endif  // MRLWE_TENSOR_POLY_H_
