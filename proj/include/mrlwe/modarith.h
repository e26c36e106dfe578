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

#ifndef MRLWE_MODARITH_H_
#define MRLWE_MODARITH_H_

#include <cstdint>
#include <vector>

namespace mrlwe {

using Uint64 = std::uint64_t;
using Int64 = std::int64_t;
using Uint128 = unsigned __int128;

// Plain 128-bit-intermediate modular arithmetic. Operands must already be
// reduced into [0, modulus).
inline Uint64 AddMod(Uint64 a, Uint64 b, Uint64 modulus) {
  Uint64 sum = a + b;
  if (sum < a || sum >= modulus) sum -= modulus;
  return sum;
}

inline Uint64 SubMod(Uint64 a, Uint64 b, Uint64 modulus) {
  return a >= b ? a - b : a + (modulus - b);
}

inline Uint64 NegMod(Uint64 a, Uint64 modulus) {
  return a == 0 ? 0 : modulus - a;
}

inline Uint64 MulMod(Uint64 a, Uint64 b, Uint64 modulus) {
  // 64-bit division is far cheaper than the 128-bit library call.
  if (((a | b) >> 32) == 0) return (a * b) % modulus;
  return static_cast<Uint64>((static_cast<Uint128>(a) * b) % modulus);
}

// Multiplication by a fixed w < modulus < 2^63 with the precomputed
// quotient floor(w 2^64 / modulus); no division at use time.
inline Uint64 ShoupPrecompute(Uint64 w, Uint64 modulus) {
  return static_cast<Uint64>((static_cast<Uint128>(w) << 64) / modulus);
}

inline Uint64 MulModShoup(Uint64 a, Uint64 w, Uint64 w_shoup, Uint64 modulus) {
  Uint64 quotient = static_cast<Uint64>((static_cast<Uint128>(a) * w_shoup) >> 64);
  Uint64 r = a * w - quotient * modulus;
  return r >= modulus ? r - modulus : r;
}

// Maps a signed integer to its representative in [0, modulus).
inline Uint64 ReduceSigned(Int64 value, Uint64 modulus) {
  if (value >= 0) return static_cast<Uint64>(value) % modulus;
  Uint64 magnitude = static_cast<Uint64>(-(value + 1)) + 1;
  return NegMod(magnitude % modulus, modulus);
}

// Centered lift into (-modulus/2, modulus/2].
inline Int64 CenteredLift(Uint64 value, Uint64 modulus) {
  return value > modulus / 2 ? -static_cast<Int64>(modulus - value)
                             : static_cast<Int64>(value);
}

Uint64 PowMod(Uint64 base, Uint64 exponent, Uint64 modulus);

// Throws std::invalid_argument when gcd(a, modulus) != 1.
Uint64 InvMod(Uint64 a, Uint64 modulus);

Uint64 Gcd(Uint64 a, Uint64 b);

// Deterministic Miller-Rabin, exact for every 64-bit input.
bool IsPrime(Uint64 n);

Uint64 EulerPhi(Uint64 m);

// Units of Z_m in increasing natural order.
std::vector<Uint64> Units(Uint64 m);

// Order of a in (Z/modulus)^*; 0 when a is not a unit.
Uint64 MultiplicativeOrder(Uint64 a, Uint64 modulus);

// Smallest generator of (Z/q)^* for prime q.
Uint64 FindGenerator(Uint64 q);

// Integer coefficients of the m-th cyclotomic polynomial, lowest degree
// first; the result has phi(m) + 1 entries and is monic.
std::vector<Int64> CyclotomicPolynomial(Uint64 m);

inline bool IsPowerOfTwo(Uint64 x) { return x != 0 && (x & (x - 1)) == 0; }

}  // namespace mrlwe

#endif  // MRLWE_MODARITH_H_
