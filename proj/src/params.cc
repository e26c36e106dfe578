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

#include "mrlwe/params.h"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mrlwe {

MixedRadix::MixedRadix(std::vector<size_t> radices)
    : radices_(std::move(radices)) {
  strides_.reserve(radices_.size());
  size_ = 1;
  for (size_t radix : radices_) {
    if (radix == 0) throw std::invalid_argument("MixedRadix: zero radix");
    strides_.push_back(size_);
    size_ *= radix;
  }
}

size_t MixedRadix::Map(std::span<const size_t> multi_index) const {
  if (multi_index.size() != radices_.size()) {
    throw std::out_of_range("MixedRadix::Map: wrong number of coordinates");
  }
  size_t flat = 0;
  for (size_t i = 0; i < radices_.size(); ++i) {
    if (multi_index[i] >= radices_[i]) {
      throw std::out_of_range("MixedRadix::Map: coordinate " +
                              std::to_string(i) + " out of range");
    }
    flat += multi_index[i] * strides_[i];
  }
  return flat;
}

std::vector<size_t> MixedRadix::Unmap(size_t flat) const {
  if (flat >= size_) throw std::out_of_range("MixedRadix::Unmap: index");
  std::vector<size_t> multi(radices_.size());
  for (size_t i = 0; i < radices_.size(); ++i) {
    multi[i] = flat % radices_[i];
    flat /= radices_[i];
  }
  return multi;
}

namespace {

std::vector<size_t> Degrees(const std::vector<Uint64>& moduli) {
  std::vector<size_t> degrees;
  for (Uint64 m : moduli) degrees.push_back(EulerPhi(m));
  return degrees;
}

void CheckModuli(const std::vector<Uint64>& moduli) {
  if (moduli.empty()) {
    throw std::invalid_argument("RingParams: at least one conductor needed");
  }
  for (Uint64 m : moduli) {
    if (m < 2) throw std::invalid_argument("RingParams: conductor m_i < 2");
  }
}

}  // namespace

RingParams::RingParams(std::vector<Uint64> moduli, Uint64 q,
                       std::vector<Uint64> roots)
    : moduli_(std::move(moduli)),
      q_(q),
      roots_(std::move(roots)),
      index_(Degrees(moduli_)) {}

RingParams RingParams::Create(std::vector<Uint64> moduli, Uint64 q) {
  CheckModuli(moduli);
  std::vector<Uint64> roots;
  bool admissible = q >= 2 && q < (Uint64{1} << kMaxModulusBits) && IsPrime(q);
  for (Uint64 m : moduli) admissible = admissible && (q - 1) % m == 0;
  if (admissible) {
    Uint64 g = FindGenerator(q);
    for (Uint64 m : moduli) roots.push_back(PowMod(g, (q - 1) / m, q));
  }
  return RingParams(std::move(moduli), q, std::move(roots));
}

RingParams RingParams::CreateWithRoots(std::vector<Uint64> moduli, Uint64 q,
                                       std::vector<Uint64> roots) {
  CheckModuli(moduli);
  if (roots.size() != moduli.size()) {
    throw std::invalid_argument("RingParams: one root per conductor needed");
  }
  return RingParams(std::move(moduli), q, std::move(roots));
}

RingParams RingParams::Parse(std::string_view text) {
  auto fail = [&]() {
    return std::invalid_argument("RingParams::Parse: malformed '" +
                                 std::string(text) + "'");
  };
  size_t semi = text.find(';');
  if (semi == std::string_view::npos || text.substr(0, 2) != "m=" ||
      text.substr(semi + 1, 2) != "q=") {
    throw fail();
  }
  std::vector<Uint64> moduli;
  std::string_view dims = text.substr(2, semi - 2);
  try {
    size_t start = 0;
    while (start <= dims.size()) {
      size_t end = dims.find('x', start);
      if (end == std::string_view::npos) end = dims.size();
      std::string token(dims.substr(start, end - start));
      size_t used = 0;
      moduli.push_back(std::stoull(token, &used));
      if (used != token.size()) throw fail();
      start = end + 1;
    }
    std::string q_text(text.substr(semi + 3));
    size_t used = 0;
    Uint64 q = std::stoull(q_text, &used);
    if (used != q_text.size()) throw fail();
    return Create(std::move(moduli), q);
  } catch (const std::logic_error&) {
    throw fail();
  }
}

std::string RingParams::ToString() const {
  std::ostringstream out;
  out << "m=";
  for (size_t i = 0; i < moduli_.size(); ++i) {
    if (i > 0) out << 'x';
    out << moduli_[i];
  }
  out << ";q=" << q_;
  return out.str();
}

bool RingParams::AllPowerOfTwo() const {
  for (Uint64 m : moduli_) {
    if (!IsPowerOfTwo(m)) return false;
  }
  return true;
}

ValidationReport Validate(const RingParams& params) {
  ValidationReport report;
  const Uint64 q = params.q();
  const bool prime = q >= 2 && IsPrime(q);
  if (!prime) report.failures.push_back("q=" + std::to_string(q) + " is not prime");
  if (q >= (Uint64{1} << kMaxModulusBits)) {
    report.failures.push_back("q exceeds " + std::to_string(kMaxModulusBits) +
                              " bits");
  }
  for (size_t i = 0; i < params.dims(); ++i) {
    Uint64 m = params.moduli()[i];
    if (q < 2 || (q - 1) % m != 0) {
      report.failures.push_back("q mod " + std::to_string(m) + " = " +
                                std::to_string(q % m) + ", expected 1");
    }
  }
  if (params.roots().size() != params.dims()) {
    report.failures.push_back("no primitive roots of unity available");
    return report;
  }
  if (!prime) return report;
  for (size_t i = 0; i < params.dims(); ++i) {
    Uint64 m = params.moduli()[i];
    Uint64 order = MultiplicativeOrder(params.roots()[i], q);
    if (order != m) {
      report.failures.push_back("root w_" + std::to_string(i + 1) + "=" +
                                std::to_string(params.roots()[i]) +
                                " has order " + std::to_string(order) +
                                ", expected " + std::to_string(m));
    }
  }
  return report;
}

void SecurityParams::CheckValid() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(xi >= alpha)) throw std::invalid_argument("xi must be >= alpha");
  if (sample_budget == 0) throw std::invalid_argument("sample budget is zero");
}

double SphericalWidth(double alpha, size_t n, Uint64 samples) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  double nl = static_cast<double>(n) * static_cast<double>(samples);
  if (nl <= 1.0) throw std::invalid_argument("n * l must exceed 1");
  return alpha * std::pow(nl / std::log(nl), 0.25);
}

RateReport CheckRates(const RingParams& params,
                             const SecurityParams& security,
                             double floor_constant) {
  if (!(security.alpha > 0.0)) {
    throw std::invalid_argument("alpha must be positive");
  }
  const double n = static_cast<double>(params.total_degree());
  RateReport report;
  double log_n = n > 1.0 ? std::log(n) : 0.0;
  report.rate_bound = n > 1.0 ? std::sqrt(log_n / n) : 0.0;
  report.alpha_below_rate = security.alpha < report.rate_bound;
  report.alpha_q = security.alpha * static_cast<double>(params.q());
  report.alpha_q_floor = floor_constant * std::sqrt(log_n);
  report.alpha_q_above_floor = report.alpha_q >= report.alpha_q_floor;
  report.xi = SphericalWidth(security.alpha, params.total_degree(),
                             security.sample_budget);
  return report;
}

}  // namespace mrlwe
