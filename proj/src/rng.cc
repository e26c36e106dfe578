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

#include "mrlwe/rng.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace mrlwe {

namespace {

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::vector<std::uint32_t> SeedWords(const Seed& seed) {
  std::vector<std::uint32_t> words;
  for (size_t i = 0; i < seed.size(); i += 4) {
    words.push_back(static_cast<std::uint32_t>(seed[i]) |
                    static_cast<std::uint32_t>(seed[i + 1]) << 8 |
                    static_cast<std::uint32_t>(seed[i + 2]) << 16 |
                    static_cast<std::uint32_t>(seed[i + 3]) << 24);
  }
  return words;
}

}  // namespace

Seed ParseSeed(std::string_view hex) {
  Seed seed{};
  if (hex.size() != 2 * seed.size()) {
    throw std::invalid_argument("seed must be 64 hex digits");
  }
  for (size_t i = 0; i < seed.size(); ++i) {
    int hi = HexValue(hex[2 * i]);
    int lo = HexValue(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("seed: bad hex digit");
    seed[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return seed;
}

std::string FormatSeed(const Seed& seed) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (std::uint8_t byte : seed) {
    out.push_back(kDigits[byte >> 4]);
    out.push_back(kDigits[byte & 15]);
  }
  return out;
}

Rng::Rng(const Seed& seed) : seed_(seed) {
  std::vector<std::uint32_t> words = SeedWords(seed);
  std::seed_seq seq(words.begin(), words.end());
  engine_.seed(seq);
}

Rng Rng::Derive(Uint64 counter) const {
  std::vector<std::uint32_t> words = SeedWords(seed_);
  words.push_back(static_cast<std::uint32_t>(counter));
  words.push_back(static_cast<std::uint32_t>(counter >> 32));
  words.push_back(0x64657269u);  // domain tag separating child streams
  std::seed_seq seq(words.begin(), words.end());
  // The child records its own seed so that it can derive further.
  Seed child{};
  std::array<std::uint32_t, 8> out{};
  seq.generate(out.begin(), out.end());
  for (size_t i = 0; i < out.size(); ++i) {
    for (size_t b = 0; b < 4; ++b) {
      child[4 * i + b] = static_cast<std::uint8_t>(out[i] >> (8 * b));
    }
  }
  return Rng(child);
}

Uint64 Rng::UniformBelow(Uint64 bound) {
  if (bound == 0) throw std::invalid_argument("UniformBelow: bound is 0");
  // Largest multiple of bound representable; reject the tail.
  Uint64 limit = UINT64_MAX - UINT64_MAX % bound;
  Uint64 x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

double Rng::UniformUnit() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::StandardNormal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  double u1 = UniformPositive();
  double u2 = UniformUnit();
  double radius = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  has_spare_normal_ = true;
  return radius * std::cos(angle);
}

double Rng::Exponential() { return -std::log(UniformPositive()); }

}  // namespace mrlwe
