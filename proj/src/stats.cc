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


#include "mrlwe/stats.h"

#include <algorithm>
#include <numeric>
#include <random>

#include <boost/math/special_functions/gamma.hpp>

namespace mrlwe {

nlohmann::json TestVerdict::ToJson() const {
  return nlohmann::json{{"name", name},         {"statistic", statistic},
                        {"p_value", p_value},   {"samples", samples},
                        {"threshold", threshold}, {"pass", pass}};
}

TestVerdict MakeVerdict(std::string name, double statistic, double p_value, Uint64 samples,
                        double threshold) {
  return TestVerdict{std::move(name), statistic, p_value, samples, threshold,
                     p_value > threshold};
}

double ChiSquareSurvival(double statistic, double dof) {
  if (dof <= 0) throw std::invalid_argument("ChiSquareSurvival: dof must be positive");
  if (statistic <= 0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

std::pair<double, double> ChiSquareCounts(std::span<const Uint64> counts) {
  if (counts.size() < 2) throw std::invalid_argument("ChiSquareCounts: need >= 2 bins");
  double total = 0;
  for (Uint64 c : counts) total += static_cast<double>(c);
  if (total == 0) throw InsufficientData("ChiSquareCounts: no observations");
  double expected = total / static_cast<double>(counts.size());
  double stat = 0;
  for (Uint64 c : counts) {
    double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  return {stat, ChiSquareSurvival(stat, static_cast<double>(counts.size() - 1))};
}

TestVerdict ChiSquareUniform(const std::vector<std::vector<Uint64>>& observations, Uint64 q,
                             double threshold) {
  if (q < 2) throw std::invalid_argument("ChiSquareUniform: q must be >= 2");
  if (observations.size() < 5 * q) {
    throw InsufficientData("ChiSquareUniform: need at least " + std::to_string(5 * q) +
                           " observations, got " + std::to_string(observations.size()));
  }
  const size_t columns = observations.front().size();
  if (columns == 0) throw std::invalid_argument("ChiSquareUniform: empty observations");
  double worst_stat = 0, min_p = 1.0;
  std::vector<Uint64> counts(q);
  for (size_t c = 0; c < columns; ++c) {
    std::fill(counts.begin(), counts.end(), 0);
    for (const auto& row : observations) {
      if (row.size() != columns || row[c] >= q) {
        throw std::invalid_argument("ChiSquareUniform: malformed observation");
      }
      ++counts[row[c]];
    }
    auto [stat, p] = ChiSquareCounts(counts);
    if (p < min_p || c == 0) {
      min_p = p;
      worst_stat = stat;
    }
  }
  double combined = std::min(1.0, static_cast<double>(columns) * min_p);
  return MakeVerdict("chi_square_uniform", worst_stat, combined, observations.size(), threshold);
}

TestVerdict ChiSquareHomogeneity(std::span<const Uint64> counts_a,
                                 std::span<const Uint64> counts_b, double threshold) {
  if (counts_a.size() != counts_b.size()) {
    throw std::invalid_argument("ChiSquareHomogeneity: bin count mismatch");
  }
  double na = 0, nb = 0;
  for (size_t i = 0; i < counts_a.size(); ++i) {
    na += static_cast<double>(counts_a[i]);
    nb += static_cast<double>(counts_b[i]);
  }
  if (na == 0 || nb == 0) throw InsufficientData("ChiSquareHomogeneity: empty sample");
  const double total = na + nb;
  // Merge adjacent bins until expected counts reach 5 on both sides.
  std::vector<std::pair<double, double>> merged;
  double acc_a = 0, acc_b = 0;
  auto ready = [&](double a, double b) {
    double pooled = a + b;
    return pooled * na / total >= 5.0 && pooled * nb / total >= 5.0;
  };
  for (size_t i = 0; i < counts_a.size(); ++i) {
    acc_a += static_cast<double>(counts_a[i]);
    acc_b += static_cast<double>(counts_b[i]);
    if (ready(acc_a, acc_b)) {
      merged.emplace_back(acc_a, acc_b);
      acc_a = acc_b = 0;
    }
  }
  if (acc_a + acc_b > 0) {
    if (merged.empty()) {
      merged.emplace_back(acc_a, acc_b);
    } else {
      merged.back().first += acc_a;
      merged.back().second += acc_b;
    }
  }
  if (merged.size() < 2) {
    // Everything fell into one bin: the samples cannot be told apart.
    return MakeVerdict("chi_square_homogeneity", 0.0, 1.0, static_cast<Uint64>(total),
                       threshold);
  }
  double stat = 0;
  for (auto [a, b] : merged) {
    double pooled = a + b;
    double ea = pooled * na / total, eb = pooled * nb / total;
    stat += (a - ea) * (a - ea) / ea + (b - eb) * (b - eb) / eb;
  }
  double p = ChiSquareSurvival(stat, static_cast<double>(merged.size() - 1));
  return MakeVerdict("chi_square_homogeneity", stat, p, static_cast<Uint64>(total), threshold);
}

double KolmogorovSurvival(double lambda) {
  if (lambda <= 0) return 1.0;
  if (lambda < 0.2) return 1.0;  // series converges slowly; Q is 1 to 1e-16 here
  double sum = 0;
  for (int k = 1; k <= 200; ++k) {
    double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestVerdict KolmogorovSmirnov(std::vector<double> samples,
                              const std::function<double(double)>& cdf, double threshold) {
  if (samples.size() < 5) throw InsufficientData("KolmogorovSmirnov: need >= 5 samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0;
  for (size_t i = 0; i < samples.size(); ++i) {
    double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  double sqrt_n = std::sqrt(n);
  double p = KolmogorovSurvival((sqrt_n + 0.12 + 0.11 / sqrt_n) * d);
  return MakeVerdict("kolmogorov_smirnov", d, p, samples.size(), threshold);
}

double HoeffdingRadius(Uint64 trials, double delta) {
  if (trials == 0 || !(delta > 0 && delta < 1)) {
    throw std::invalid_argument("HoeffdingRadius: bad arguments");
  }
  return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(trials)));
}

Binning Binning::UnitCube(size_t dims, size_t bins_per_axis) {
  return Binning{std::vector<double>(dims, 0.0), std::vector<double>(dims, 1.0),
                 std::vector<size_t>(dims, bins_per_axis)};
}

size_t Binning::total_bins() const {
  size_t total = 1;
  for (size_t b : bins) total *= b;
  return total;
}

size_t Binning::BinOf(std::span<const double> x) const {
  if (x.size() != bins.size()) throw std::invalid_argument("Binning: dimension mismatch");
  size_t flat = 0, stride = 1;
  for (size_t i = 0; i < bins.size(); ++i) {
    double t = (x[i] - lo[i]) / (hi[i] - lo[i]);
    Int64 b = static_cast<Int64>(std::floor(t * static_cast<double>(bins[i])));
    b = std::clamp<Int64>(b, 0, static_cast<Int64>(bins[i]) - 1);
    flat += static_cast<size_t>(b) * stride;
    stride *= bins[i];
  }
  return flat;
}

std::vector<Uint64> Histogram(const std::vector<std::vector<double>>& samples,
                              const Binning& binning) {
  std::vector<Uint64> counts(binning.total_bins(), 0);
  for (const auto& s : samples) ++counts[binning.BinOf(s)];
  return counts;
}

namespace {

Uint64 SampleBinomial(Rng& rng, Uint64 n, double p) {
  if (n == 0 || p <= 0) return 0;
  if (p >= 1) return n;
  return std::binomial_distribution<Uint64>(n, p)(rng);
}

std::vector<Uint64> SampleMultinomial(Rng& rng, Uint64 n, const std::vector<double>& probs) {
  std::vector<Uint64> out(probs.size(), 0);
  double remaining_mass = 1.0;
  Uint64 remaining = n;
  for (size_t i = 0; i + 1 < probs.size() && remaining > 0; ++i) {
    double p = remaining_mass > 0 ? std::clamp(probs[i] / remaining_mass, 0.0, 1.0) : 0.0;
    out[i] = SampleBinomial(rng, remaining, p);
    remaining -= out[i];
    remaining_mass -= probs[i];
  }
  out.back() += remaining;
  return out;
}

double HalfL1(const std::vector<Uint64>& a, const std::vector<Uint64>& b) {
  double na = std::accumulate(a.begin(), a.end(), 0.0);
  double nb = std::accumulate(b.begin(), b.end(), 0.0);
  double sum = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    sum += std::abs(static_cast<double>(a[i]) / na - static_cast<double>(b[i]) / nb);
  }
  return 0.5 * sum;
}

double Quantile(std::vector<double> values, double level) {
  std::sort(values.begin(), values.end());
  size_t idx = static_cast<size_t>(std::floor(level * (values.size() - 1)));
  return values[idx];
}

}  // namespace

TvEstimate EstimateTv(const std::vector<Uint64>& counts_a, const std::vector<Uint64>& counts_b,
                      Rng& rng, size_t bootstrap_rounds) {
  if (counts_a.size() != counts_b.size()) throw std::invalid_argument("EstimateTv: bins");
  Uint64 na = std::accumulate(counts_a.begin(), counts_a.end(), Uint64{0});
  Uint64 nb = std::accumulate(counts_b.begin(), counts_b.end(), Uint64{0});
  if (na < 10000 || nb < 10000) throw InsufficientData("EstimateTv: need >= 10^4 samples each");
  std::vector<double> pa(counts_a.size()), pb(counts_a.size()), pooled(counts_a.size());
  for (size_t i = 0; i < pa.size(); ++i) {
    pa[i] = static_cast<double>(counts_a[i]) / static_cast<double>(na);
    pb[i] = static_cast<double>(counts_b[i]) / static_cast<double>(nb);
    pooled[i] = static_cast<double>(counts_a[i] + counts_b[i]) / static_cast<double>(na + nb);
  }
  TvEstimate out;
  out.estimate = HalfL1(counts_a, counts_b);
  std::vector<double> boot, null;
  for (size_t r = 0; r < bootstrap_rounds; ++r) {
    boot.push_back(HalfL1(SampleMultinomial(rng, na, pa), SampleMultinomial(rng, nb, pb)));
    null.push_back(HalfL1(SampleMultinomial(rng, na, pooled), SampleMultinomial(rng, nb, pooled)));
  }
  out.ci_low = Quantile(boot, 0.025);
  out.ci_high = Quantile(boot, 0.975);
  out.noise_floor = Quantile(null, 0.95);
  return out;
}

TvEstimate EstimateTv(const std::vector<std::vector<double>>& samples_a,
                      const std::vector<std::vector<double>>& samples_b,
                      const Binning& binning, Rng& rng, size_t bootstrap_rounds) {
  return EstimateTv(Histogram(samples_a, binning), Histogram(samples_b, binning), rng,
                    bootstrap_rounds);
}

double MutualInformation(std::span<const Uint64> joint, size_t rows, size_t cols) {
  if (joint.size() != rows * cols) throw std::invalid_argument("MutualInformation: shape");
  double total = 0;
  std::vector<double> row_sum(rows, 0), col_sum(cols, 0);
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < cols; ++c) {
      double v = static_cast<double>(joint[r * cols + c]);
      row_sum[r] += v;
      col_sum[c] += v;
      total += v;
    }
  }
  if (total == 0) throw InsufficientData("MutualInformation: empty table");
  double mi = 0;
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < cols; ++c) {
      double v = static_cast<double>(joint[r * cols + c]);
      if (v == 0) continue;
      mi += v / total * std::log(v * total / (row_sum[r] * col_sum[c]));
    }
  }
  return mi;
}

void WriteHistogramCsv(std::ostream& out, std::span<const Uint64> counts_a,
                       std::span<const Uint64> counts_b) {
  if (counts_b.empty()) {
    out << "bin,count\n";
    for (size_t i = 0; i < counts_a.size(); ++i) out << i << ',' << counts_a[i] << '\n';
    return;
  }
  if (counts_a.size() != counts_b.size()) throw std::invalid_argument("histogram size mismatch");
  out << "bin,count_a,count_b\n";
  for (size_t i = 0; i < counts_a.size(); ++i) {
    out << i << ',' << counts_a[i] << ',' << counts_b[i] << '\n';
  }
}

}  // namespace mrlwe
