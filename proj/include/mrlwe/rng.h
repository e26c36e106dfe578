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

#ifndef MRLWE_RNG_H_
#define MRLWE_RNG_H_

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "mrlwe/modarith.h"

namespace mrlwe {

using Seed = std::array<std::uint8_t, 32>;

// Parses exactly 64 hex digits. Throws std::invalid_argument otherwise.
Seed ParseSeed(std::string_view hex);
std::string FormatSeed(const Seed& seed);

// Deterministic generator seeded from 32 bytes. The sampling transforms
// below are implemented here rather than through <random> distributions so
// that streams are identical across standard library implementations.
// Rng also models UniformRandomBitGenerator; only bootstrap resampling in
// stats feeds it to std distributions.
class Rng {
 public:
  using result_type = Uint64;
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }

  explicit Rng(const Seed& seed);

  result_type operator()() { return engine_(); }

  // Independent child stream for parallel branch `counter`: the counter is
  // appended to the seed words and the whole is hashed by std::seed_seq.
  Rng Derive(Uint64 counter) const;

  Uint64 NextU64() { return engine_(); }
  // Uniform on [0, bound), bound > 0, by rejection.
  Uint64 UniformBelow(Uint64 bound);
  // Uniform on [0, 1) with 53 random bits.
  double UniformUnit();
  // Uniform on (0, 1].
  double UniformPositive() { return 1.0 - UniformUnit(); }
  double StandardNormal();
  // Rate-1 exponential.
  double Exponential();
  bool Bernoulli(double p) { return UniformUnit() < p; }

  const Seed& seed() const { return seed_; }

 private:
  Seed seed_;
  std::mt19937_64 engine_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace mrlwe

#endif  // MRLWE_RNG_H_
