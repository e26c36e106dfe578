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


#include "mrlwe/sigdemo.h"

#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "mrlwe/gaussian.h"

namespace mrlwe {

namespace {

RingParams CheckedParams(const DemoParams& p) {
  RingParams params = RingParams::Create(p.moduli, p.q);
  if (params.dims() != 2) throw std::invalid_argument("DemoScheme: two conductors expected");
  if (!params.AllPowerOfTwo()) throw std::invalid_argument("DemoScheme: power-of-two conductors only");
  ValidationReport report = Validate(params);
  if (!report.valid()) throw std::invalid_argument("DemoScheme: " + report.failures.front());
  if (p.t < 2 || Gcd(p.t, p.q) != 1) throw std::invalid_argument("DemoScheme: gcd(t, q) != 1");
  if (!(p.error_width > 0.0)) throw std::invalid_argument("DemoScheme: error width");
  return params;
}

}  // namespace

DemoScheme::DemoScheme(const DemoParams& params)
    : params_(params), ring_(RingContext::Create(CheckedParams(params))) {}

RingElement DemoScheme::KeyGen(Rng& rng) const { return RingElement::Random(ring_, rng); }

double DemoScheme::FreshNoiseSd() const {
  const double t = static_cast<double>(params_.t);
  const double e_sd = params_.error_width / std::sqrt(2.0 * M_PI);
  return t * std::sqrt(e_sd * e_sd + 1.0 / 12.0);
}

double DemoScheme::BudgetBits(const Ciphertext& ct) const {
  return std::log2(static_cast<double>(params_.q) / 2.0 / PredictedBound(ct));
}

Ciphertext DemoScheme::Encrypt(const std::vector<Uint64>& msg, const RingElement& s,
                               Rng& rng) const {
  if (msg.size() != n()) throw std::invalid_argument("Encrypt: message length");
  Ciphertext ct{{}, FreshNoiseSd()};
  if (BudgetBits(ct) <= 0.0) throw BudgetExhausted("Encrypt: parameters leave no noise budget");
  std::vector<Int64> noisy(n());
  const Int64 t = static_cast<Int64>(params_.t);
  for (size_t i = 0; i < n(); ++i) {
    if (msg[i] >= params_.t) throw std::invalid_argument("Encrypt: message entry >= t");
    // Centred lift keeps the plaintext part small.
    noisy[i] = t * SampleIntegerGaussian(rng, 0.0, params_.error_width) + CenteredLift(msg[i], params_.t);
  }
  RingElement a = RingElement::Random(ring_, rng);
  RingElement c0 = RingElement::FromSigned(ring_, noisy) + a * s;
  ct.components = {c0, -a};
  return ct;
}

RingElement DemoScheme::Evaluate(const Ciphertext& ct, const RingElement& s) const {
  RingElement acc = RingElement::Zero(ring_);
  RingElement power = RingElement::One(ring_);
  for (const RingElement& c : ct.components) {
    acc = acc + c * power;
    power = power * s;
  }
  return acc;
}

std::vector<Uint64> DemoScheme::Decrypt(const Ciphertext& ct, const RingElement& s) const {
  RingElement v = Evaluate(ct, s).ToCoefficients();
  std::vector<Uint64> out;
  out.reserve(n());
  for (Uint64 x : v.data()) out.push_back(ReduceSigned(CenteredLift(x, params_.q), params_.t));
  return out;
}

double DemoScheme::MeasuredNoise(const Ciphertext& ct, const RingElement& s) const {
  RingElement v = Evaluate(ct, s).ToCoefficients();
  double worst = 0.0;
  for (Uint64 x : v.data()) {
    worst = std::max(worst, std::abs(static_cast<double>(CenteredLift(x, params_.q))));
  }
  return worst;
}

Ciphertext DemoScheme::Add(const Ciphertext& x, const Ciphertext& y) const {
  Ciphertext out;
  const size_t len = std::max(x.components.size(), y.components.size());
  for (size_t k = 0; k < len; ++k) {
    RingElement sum = RingElement::Zero(ring_);
    if (k < x.components.size()) sum = sum + x.components[k];
    if (k < y.components.size()) sum = sum + y.components[k];
    out.components.push_back(sum);
  }
  out.noise_sd = std::hypot(x.noise_sd, y.noise_sd);
  return out;
}

Ciphertext DemoScheme::Mul(const Ciphertext& x, const Ciphertext& y) const {
  if (x.components.empty() || y.components.empty()) throw std::invalid_argument("Mul: empty ciphertext");
  Ciphertext out;
  out.noise_sd = std::sqrt(static_cast<double>(n())) * x.noise_sd * y.noise_sd;
  if (BudgetBits(out) <= 0.0) throw BudgetExhausted("Mul: noise budget exhausted");
  out.components.assign(x.components.size() + y.components.size() - 1, RingElement::Zero(ring_));
  for (size_t i = 0; i < x.components.size(); ++i) {
    for (size_t j = 0; j < y.components.size(); ++j) {
      out.components[i + j] = out.components[i + j] + x.components[i] * y.components[j];
    }
  }
  return out;
}

std::vector<Uint64> PackImage(const DemoScheme& scheme, const Image& image) {
  const auto& deg = scheme.ring()->params().degrees();
  if (image.rows > deg[1] || image.cols > deg[0]) {
    throw std::invalid_argument("PackImage: image larger than " + std::to_string(deg[1]) + "x" +
                                std::to_string(deg[0]));
  }
  std::vector<Uint64> coeffs(scheme.n(), 0);
  for (size_t r = 0; r < image.rows; ++r) {
    for (size_t c = 0; c < image.cols; ++c) {
      const size_t idx[2] = {c, r};
      coeffs[IndexMap(scheme.ring()->params(), idx)] = image.pixels[r * image.cols + c] % scheme.params().t;
    }
  }
  return coeffs;
}

Image UnpackImage(const DemoScheme& scheme, const std::vector<Uint64>& coeffs, Uint64 maxval) {
  const auto& deg = scheme.ring()->params().degrees();
  Image image{deg[1], deg[0], maxval, std::vector<Uint64>(scheme.n())};
  for (size_t r = 0; r < image.rows; ++r) {
    for (size_t c = 0; c < image.cols; ++c) {
      const size_t idx[2] = {c, r};
      image.pixels[r * image.cols + c] = coeffs.at(IndexMap(scheme.ring()->params(), idx));
    }
  }
  return image;
}

std::vector<Uint64> IdentityKernel(const DemoScheme& scheme) {
  std::vector<Uint64> k(scheme.n(), 0);
  k[0] = 1;
  return k;
}

std::vector<Uint64> Blur3Kernel(const DemoScheme& scheme) {
  const auto& moduli = scheme.ring()->params().moduli();
  // Uses the ring itself only to place monomials; x^{-1} = x^{m - 1}.
  RingContextPtr ring = scheme.ring();
  RingElement sum = RingElement::Zero(ring);
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      const Uint64 exps[2] = {(moduli[0] + dc) % moduli[0], (moduli[1] + dr) % moduli[1]};
      sum = sum + RingElement::Monomial(ring, exps);
    }
  }
  RingElement coeffs = sum.ToCoefficients();
  std::vector<Uint64> out;
  for (Uint64 v : coeffs.data()) out.push_back(ReduceSigned(CenteredLift(v, scheme.params().q), scheme.params().t));
  return out;
}

std::vector<Uint64> NegacyclicConvolve2D(const std::vector<Uint64>& a,
                                         const std::vector<Uint64>& b, size_t rows,
                                         size_t cols, Uint64 t) {
  if (a.size() != rows * cols || b.size() != rows * cols) {
    throw std::invalid_argument("NegacyclicConvolve2D: size mismatch");
  }
  std::vector<Int64> acc(rows * cols, 0);
  const Int64 tt = static_cast<Int64>(t);
  for (size_t r1 = 0; r1 < rows; ++r1) {
    for (size_t c1 = 0; c1 < cols; ++c1) {
      const Int64 x = static_cast<Int64>(a[r1 * cols + c1]);
      if (x == 0) continue;
      for (size_t r2 = 0; r2 < rows; ++r2) {
        for (size_t c2 = 0; c2 < cols; ++c2) {
          size_t r = r1 + r2, c = c1 + c2;
          Int64 sign = 1;
          // Each wrap past the edge multiplies by x^n = -1.
          if (r >= rows) { r -= rows; sign = -sign; }
          if (c >= cols) { c -= cols; sign = -sign; }
          Int64& cell = acc[r * cols + c];
          cell = (cell + sign * x * static_cast<Int64>(b[r2 * cols + c2])) % tt;
        }
      }
    }
  }
  std::vector<Uint64> out;
  out.reserve(acc.size());
  for (Int64 v : acc) out.push_back(ReduceSigned(v, t));
  return out;
}

namespace {

// Next header token, skipping whitespace and '#' comments.
std::string PgmToken(std::istream& in) {
  std::string token;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {}
      if (!token.empty()) break;
      continue;
    }
    if (std::isspace(ch)) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(static_cast<char>(ch));
  }
  if (token.empty()) throw PgmError("PGM: truncated header");
  return token;
}

size_t PgmNumber(std::istream& in) {
  std::string token = PgmToken(in);
  size_t used = 0;
  unsigned long value = 0;
  try {
    value = std::stoul(token, &used);
  } catch (const std::logic_error&) {
    throw PgmError("PGM: bad number '" + token + "'");
  }
  if (used != token.size()) throw PgmError("PGM: bad number '" + token + "'");
  return value;
}

}  // namespace

Image ReadPgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PgmError("cannot open " + path.string());
  std::string magic = PgmToken(in);
  if (magic != "P5" && magic != "P2") throw PgmError("PGM: unsupported magic " + magic);
  Image image;
  image.cols = PgmNumber(in);
  image.rows = PgmNumber(in);
  image.maxval = PgmNumber(in);
  if (image.rows == 0 || image.cols == 0 || image.rows * image.cols > (1u << 24)) {
    throw PgmError("PGM: bad dimensions");
  }
  if (image.maxval == 0 || image.maxval > 255) throw PgmError("PGM: only 8-bit images are supported");
  image.pixels.resize(image.rows * image.cols);
  if (magic == "P5") {
    std::vector<char> raw(image.pixels.size());
    if (!in.read(raw.data(), static_cast<std::streamsize>(raw.size()))) throw PgmError("PGM: truncated data");
    for (size_t i = 0; i < raw.size(); ++i) image.pixels[i] = static_cast<unsigned char>(raw[i]);
  } else {
    for (Uint64& p : image.pixels) p = PgmNumber(in);
  }
  for (Uint64 p : image.pixels) {
    if (p > image.maxval) throw PgmError("PGM: sample exceeds maxval");
  }
  return image;
}

void WritePgm(const std::filesystem::path& path, const Image& image) {
  if (image.pixels.size() != image.rows * image.cols || image.maxval == 0 || image.maxval > 65535) {
    throw std::invalid_argument("WritePgm: malformed image");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PgmError("cannot write " + path.string());
  out << "P5\n" << image.cols << " " << image.rows << "\n" << image.maxval << "\n";
  for (Uint64 p : image.pixels) {
    if (p > image.maxval) throw std::invalid_argument("WritePgm: sample exceeds maxval");
    if (image.maxval > 255) out.put(static_cast<char>(p >> 8));
    out.put(static_cast<char>(p & 0xff));
  }
  if (!out) throw PgmError("write failed: " + path.string());
}

}  // namespace mrlwe
