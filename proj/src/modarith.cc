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

#include "mrlwe/modarith.h"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mrlwe {

namespace {

bool MillerRabinWitness(Uint64 n, Uint64 a, Uint64 d, int r) {
  Uint64 x = PowMod(a % n, d, n);
  if (x == 1 || x == n - 1) return false;
  for (int i = 1; i < r; ++i) {
    x = MulMod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

Uint64 PollardRho(Uint64 n) {
  if (n % 2 == 0) return 2;
  for (Uint64 c = 1;; ++c) {
    Uint64 x = 2, y = 2, d = 1;
    auto f = [&](Uint64 v) { return AddMod(MulMod(v, v, n), c % n, n); };
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = Gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

void Factor(Uint64 n, std::vector<Uint64>& primes) {
  if (n == 1) return;
  for (Uint64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
    if (n % p == 0) {
      primes.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n == 1) return;
  if (IsPrime(n)) {
    primes.push_back(n);
    return;
  }
  Uint64 d = PollardRho(n);
  Factor(d, primes);
  Factor(n / d, primes);
}

std::vector<Uint64> DistinctPrimeFactors(Uint64 n) {
  std::vector<Uint64> primes;
  Factor(n, primes);
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  return primes;
}

}  // namespace

Uint64 PowMod(Uint64 base, Uint64 exponent, Uint64 modulus) {
  Uint64 result = 1 % modulus;
  base %= modulus;
  while (exponent > 0) {
    if (exponent & 1) result = MulMod(result, base, modulus);
    base = MulMod(base, base, modulus);
    exponent >>= 1;
  }
  return result;
}

Uint64 Gcd(Uint64 a, Uint64 b) {
  while (b != 0) {
    Uint64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Uint64 InvMod(Uint64 a, Uint64 modulus) {
  Int64 t = 0, new_t = 1;
  Uint64 r = modulus, new_r = a % modulus;
  while (new_r != 0) {
    Uint64 quotient = r / new_r;
    Int64 next_t = t - static_cast<Int64>(quotient) * new_t;
    t = new_t;
    new_t = next_t;
    Uint64 next_r = r - quotient * new_r;
    r = new_r;
    new_r = next_r;
  }
  if (r != 1) {
    throw std::invalid_argument("InvMod: " + std::to_string(a) +
                                " is not invertible modulo " +
                                std::to_string(modulus));
  }
  return ReduceSigned(t, modulus);
}

bool IsPrime(Uint64 n) {
  if (n < 2) return false;
  for (Uint64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                   29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  Uint64 d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // This witness set is exact below 3.3 * 10^24.
  for (Uint64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                   29ULL, 31ULL, 37ULL}) {
    if (MillerRabinWitness(n, a, d, r)) return false;
  }
  return true;
}

Uint64 EulerPhi(Uint64 m) {
  Uint64 result = m;
  for (Uint64 p : DistinctPrimeFactors(m)) result = result / p * (p - 1);
  return result;
}

std::vector<Uint64> Units(Uint64 m) {
  std::vector<Uint64> units;
  for (Uint64 k = 1; k < m; ++k) {
    if (Gcd(k, m) == 1) units.push_back(k);
  }
  return units;
}

Uint64 MultiplicativeOrder(Uint64 a, Uint64 modulus) {
  if (!IsPrime(modulus)) {
    throw std::invalid_argument("MultiplicativeOrder: modulus must be prime");
  }
  a %= modulus;
  if (a == 0) return 0;
  Uint64 order = modulus - 1;
  for (Uint64 p : DistinctPrimeFactors(modulus - 1)) {
    while (order % p == 0 && PowMod(a, order / p, modulus) == 1) order /= p;
  }
  return order;
}

Uint64 FindGenerator(Uint64 q) {
  if (!IsPrime(q)) throw std::invalid_argument("FindGenerator: q not prime");
  if (q == 2) return 1;
  std::vector<Uint64> factors = DistinctPrimeFactors(q - 1);
  for (Uint64 g = 2; g < q; ++g) {
    bool generator = true;
    for (Uint64 p : factors) {
      if (PowMod(g, (q - 1) / p, q) == 1) {
        generator = false;
        break;
      }
    }
    if (generator) return g;
  }
  throw std::logic_error("FindGenerator: no generator found");
}

std::vector<Int64> CyclotomicPolynomial(Uint64 m) {
  if (m == 0) throw std::invalid_argument("CyclotomicPolynomial: m == 0");
  // Phi_m = (x^m - 1) / prod_{d | m, d < m} Phi_d.
  std::vector<Int64> numerator(m + 1, 0);
  numerator[0] = -1;
  numerator[m] = 1;
  for (Uint64 d = 1; d < m; ++d) {
    if (m % d != 0) continue;
    std::vector<Int64> divisor = CyclotomicPolynomial(d);
    size_t deg_num = numerator.size() - 1;
    size_t deg_div = divisor.size() - 1;
    std::vector<Int64> quotient(deg_num - deg_div + 1, 0);
    for (size_t i = deg_num + 1; i-- > deg_div;) {
      Int64 coeff = numerator[i];
      quotient[i - deg_div] = coeff;
      for (size_t j = 0; j <= deg_div; ++j) {
        numerator[i - deg_div + j] -= coeff * divisor[j];
      }
    }
    numerator = std::move(quotient);
  }
  return numerator;
}

}  // namespace mrlwe
