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


#ifndef MRLWE_SIGDEMO_H_
#define MRLWE_SIGDEMO_H_

// Illustrative symmetric encryption over the bivariate power-of-two ring,
// used to run 2D negacyclic convolutions (image filters) on encrypted data.
// The parameters carry no security claim and nothing here is constant time.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrlwe/ring.h"
#include "mrlwe/rng.h"

namespace mrlwe {

class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DemoParams {
  std::vector<Uint64> moduli = {32, 32};
  Uint64 q = 67108289;  // prime, q = 1 mod 64, about 2^26
  Uint64 t = 257;
  double error_width = 3.2;  // s of the integer Gaussian exp(-pi x^2 / s^2)
};

// Decrypts as sum_k components[k] * s^k; fresh ciphertexts have two
// components and each multiplication adds degrees (no relinearization).
struct Ciphertext {
  std::vector<RingElement> components;
  // Heuristic per-coefficient standard deviation of the decryption value
  // c0 + c1 s + ... before reduction mod t.
  double noise_sd = 0.0;
};

class DemoScheme {
 public:
  // Throws std::invalid_argument unless the conductors are powers of two,
  // the ring is admissible and gcd(t, q) = 1.
  explicit DemoScheme(const DemoParams& params);

  const DemoParams& params() const { return params_; }
  const RingContextPtr& ring() const { return ring_; }
  size_t n() const { return ring_->n(); }

  RingElement KeyGen(Rng& rng) const;

  // msg holds coefficients in [0, t). Throws BudgetExhausted when even a
  // fresh ciphertext would not decrypt reliably.
  Ciphertext Encrypt(const std::vector<Uint64>& msg, const RingElement& s, Rng& rng) const;
  // Coefficients in [0, t).
  std::vector<Uint64> Decrypt(const Ciphertext& ct, const RingElement& s) const;

  Ciphertext Add(const Ciphertext& x, const Ciphertext& y) const;
  // Throws BudgetExhausted when the predicted noise no longer fits.
  Ciphertext Mul(const Ciphertext& x, const Ciphertext& y) const;

  // Engineering heuristic, not a proof: coefficients are treated as
  // independent and centred, so a product has sd sqrt(n) sd_x sd_y and the
  // bound is six standard deviations. Fresh sd = sqrt(t^2 sd_e^2 + t^2 / 12).
  double FreshNoiseSd() const;
  double PredictedBound(const Ciphertext& ct) const { return 6.0 * ct.noise_sd; }
  // log2((q / 2) / predicted bound); decryption is expected to work while > 0.
  double BudgetBits(const Ciphertext& ct) const;
  // Measured infinity norm of the centred decryption value.
  double MeasuredNoise(const Ciphertext& ct, const RingElement& s) const;

 private:
  RingElement Evaluate(const Ciphertext& ct, const RingElement& s) const;

  DemoParams params_;
  RingContextPtr ring_;
};

// Row-major image of `rows` x `cols` values.
struct Image {
  size_t rows = 0;
  size_t cols = 0;
  Uint64 maxval = 255;
  std::vector<Uint64> pixels;
};

// Pixel (r, c) becomes the coefficient of x_1^c x_2^r; smaller images are
// zero padded. Throws std::invalid_argument when the image does not fit.
std::vector<Uint64> PackImage(const DemoScheme& scheme, const Image& image);
Image UnpackImage(const DemoScheme& scheme, const std::vector<Uint64>& coeffs, Uint64 maxval);

// Unit impulse and the 3x3 box of ones centred at the origin, as
// coefficient vectors mod t.
std::vector<Uint64> IdentityKernel(const DemoScheme& scheme);
std::vector<Uint64> Blur3Kernel(const DemoScheme& scheme);

// Plaintext reference: 2D negacyclic convolution mod t of row-major
// rows x cols arrays, computed directly from the definition.
std::vector<Uint64> NegacyclicConvolve2D(const std::vector<Uint64>& a,
                                         const std::vector<Uint64>& b, size_t rows,
                                         size_t cols, Uint64 t);

class PgmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reads P5 (binary) or P2 (ASCII) files with maxval <= 255.
Image ReadPgm(const std::filesystem::path& path);
// Writes P5; samples take two big-endian bytes when maxval > 255.
void WritePgm(const std::filesystem::path& path, const Image& image);

}  // namespace mrlwe

#endif  // MRLWE_SIGDEMO_H_
