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

#ifndef MRLWE_PARAMS_H_
#define MRLWE_PARAMS_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mrlwe/modarith.h"

namespace mrlwe {

// Largest supported modulus is below 2^62 so that sums of two residues and
// 128-bit products never overflow.
inline constexpr int kMaxModulusBits = 62;

// Flattens multi-indices (j_1, ..., j_l) with j_i in [0, n_i) into [0, n).
// The first dimension varies fastest: flat = sum_i j_i * prod_{d < i} n_d.
class MixedRadix {
 public:
  MixedRadix() = default;
  explicit MixedRadix(std::vector<size_t> radices);

  size_t size() const { return size_; }
  size_t dims() const { return radices_.size(); }
  const std::vector<size_t>& radices() const { return radices_; }
  const std::vector<size_t>& strides() const { return strides_; }

  // Throws std::out_of_range on a bad coordinate or wrong arity.
  size_t Map(std::span<const size_t> multi_index) const;
  std::vector<size_t> Unmap(size_t flat) const;

  bool operator==(const MixedRadix&) const = default;

 private:
  std::vector<size_t> radices_;
  std::vector<size_t> strides_;
  size_t size_ = 1;
};

// The tuple (m_1, ..., m_l; q) describing
//   R_q = Z_q[x_1, ..., x_l] / (Phi_{m_1}(x_1), ..., Phi_{m_l}(x_l)).
// A RingParams may describe an inadmissible ring; run Validate() before
// building arithmetic contexts on it.
class RingParams {
 public:
  // Derives n_i = phi(m_i) and, when q is a prime with q = 1 mod m_i,
  // roots w_i = g^((q-1)/m_i) for the smallest generator g of (Z/q)^*.
  // Throws std::invalid_argument if moduli is empty or some m_i < 2.
  static RingParams Create(std::vector<Uint64> moduli, Uint64 q);

  // Same, but with caller-chosen roots (checked by Validate, not here).
  static RingParams CreateWithRoots(std::vector<Uint64> moduli, Uint64 q,
                                    std::vector<Uint64> roots);

  // Canonical text form "m=4x4;q=13".
  static RingParams Parse(std::string_view text);
  std::string ToString() const;

  const std::vector<Uint64>& moduli() const { return moduli_; }
  Uint64 q() const { return q_; }
  const std::vector<size_t>& degrees() const { return index_.radices(); }
  size_t total_degree() const { return index_.size(); }
  size_t dims() const { return moduli_.size(); }
  // Empty when no admissible roots exist.
  const std::vector<Uint64>& roots() const { return roots_; }
  const MixedRadix& index() const { return index_; }

  // True when every conductor is a power of two (the configuration in
  // which R^dual = (1 / prod n_i) R).
  bool AllPowerOfTwo() const;

  bool operator==(const RingParams&) const = default;

 private:
  RingParams(std::vector<Uint64> moduli, Uint64 q, std::vector<Uint64> roots);

  std::vector<Uint64> moduli_;
  Uint64 q_ = 0;
  std::vector<Uint64> roots_;
  MixedRadix index_;
};

struct ValidationReport {
  std::vector<std::string> failures;
  bool valid() const { return failures.empty(); }
};

// Lists every failed admissibility condition: primality and size of q,
// q = 1 mod m_i, and exact order m_i of each root w_i.
ValidationReport Validate(const RingParams& params);

inline size_t IndexMap(const RingParams& params,
                       std::span<const size_t> multi_index) {
  return params.index().Map(multi_index);
}

inline std::vector<size_t> IndexUnmap(const RingParams& params, size_t flat) {
  return params.index().Unmap(flat);
}

struct SecurityParams {
  double alpha = 0.0;
  double xi = 0.0;
  Uint64 sample_budget = 1;

  // alpha > 0, xi >= alpha, sample_budget >= 1.
  void CheckValid() const;
};

// xi = alpha * (n l / log(n l))^(1/4), natural logarithm.
double SphericalWidth(double alpha, size_t n, Uint64 samples);

struct RateReport {
  double rate_bound = 0.0;        // sqrt(log n / n)
  bool alpha_below_rate = false;  // alpha < rate_bound
  double alpha_q = 0.0;
  double alpha_q_floor = 0.0;     // c * sqrt(log n)
  bool alpha_q_above_floor = false;
  double xi = 0.0;                // for sample_budget samples
  bool ok() const { return alpha_below_rate && alpha_q_above_floor; }
};

// Throws std::invalid_argument when alpha <= 0.
RateReport CheckRates(const RingParams& params,
                             const SecurityParams& security,
                             double floor_constant = 1.0);

}  // namespace mrlwe

#endif  // MRLWE_PARAMS_H_
