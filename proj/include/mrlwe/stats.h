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


#ifndef MRLWE_STATS_H_
#define MRLWE_STATS_H_

#include <cmath>
#include <cstddef>
#include <functional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "mrlwe/modarith.h"
#include "mrlwe/rng.h"

namespace mrlwe {

inline constexpr double kDefaultThreshold = 0.001;

class InsufficientData : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct TestVerdict {
  std::string name;
  double statistic = 0.0;
  double p_value = 0.0;
  Uint64 samples = 0;
  double threshold = kDefaultThreshold;
  bool pass = false;

  nlohmann::json ToJson() const;
};

TestVerdict MakeVerdict(std::string name, double statistic, double p_value, Uint64 samples,
                        double threshold);

// Upper tail of the chi-square distribution.
double ChiSquareSurvival(double statistic, double dof);

// Pearson statistic of `counts` against uniform; returns {statistic, p}.
std::pair<double, double> ChiSquareCounts(std::span<const Uint64> counts);

// Per-coordinate chi-square against uniform on Z_q for each column of
// `observations` (one row per observation), Bonferroni-combined:
// p = min(1, columns * min_i p_i). Needs >= 5 q rows.
TestVerdict ChiSquareUniform(const std::vector<std::vector<Uint64>>& observations, Uint64 q,
                             double threshold = kDefaultThreshold);

// Two-sample homogeneity test on binned counts. Bins are merged left to
// right until every merged bin has expected count >= 5 in both samples.
TestVerdict ChiSquareHomogeneity(std::span<const Uint64> counts_a,
                                 std::span<const Uint64> counts_b,
                                 double threshold = kDefaultThreshold);

// Q_KS(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
double KolmogorovSurvival(double lambda);

// One-sample KS test against a continuous CDF.
TestVerdict KolmogorovSmirnov(std::vector<double> samples,
                              const std::function<double(double)>& cdf,
                              double threshold = kDefaultThreshold);

// sqrt(ln(2 / delta) / (2 trials)).
double HoeffdingRadius(Uint64 trials, double delta);

struct AdvantageEstimate {
  double accept_a = 0.0;
  double accept_b = 0.0;
  double advantage = 0.0;  // |accept_a - accept_b|
  double radius = 0.0;     // Hoeffding radius of each acceptance estimate
  Uint64 trials = 0;
  // The two confidence intervals are disjoint.
  bool separated() const { return advantage > 2.0 * radius; }
};

// oracle(sample) -> bool; draw_a(rng) / draw_b(rng) produce inputs.
template <typename Oracle, typename DrawA, typename DrawB>
AdvantageEstimate DistinguisherAdvantage(Oracle&& oracle, DrawA&& draw_a, DrawB&& draw_b,
                                         Uint64 trials, Rng& rng, double delta = 0.001) {
  if (trials < 100) throw std::invalid_argument("DistinguisherAdvantage: trials < 100");
  Uint64 hits_a = 0, hits_b = 0;
  for (Uint64 t = 0; t < trials; ++t) {
    if (oracle(draw_a(rng))) ++hits_a;
    if (oracle(draw_b(rng))) ++hits_b;
  }
  AdvantageEstimate e;
  e.trials = trials;
  e.accept_a = static_cast<double>(hits_a) / static_cast<double>(trials);
  e.accept_b = static_cast<double>(hits_b) / static_cast<double>(trials);
  e.advantage = std::abs(e.accept_a - e.accept_b);
  e.radius = HoeffdingRadius(trials, delta);
  return e;
}

// Axis-aligned histogram binning of a box; values are clamped into range.
struct Binning {
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<size_t> bins;

  static Binning UnitCube(size_t dims, size_t bins_per_axis);
  size_t total_bins() const;
  size_t BinOf(std::span<const double> x) const;
};

std::vector<Uint64> Histogram(const std::vector<std::vector<double>>& samples,
                              const Binning& binning);

struct TvEstimate {
  double estimate = 0.0;  // 1/2 L1 distance of the normalized histograms
  double ci_low = 0.0;    // percentile bootstrap interval of the estimate
  double ci_high = 0.0;
  // 95% quantile of the estimate between two resamples of the pooled
  // histogram: the sampling noise floor when the distributions agree.
  double noise_floor = 0.0;
};

// Needs >= 10^4 samples on each side.
TvEstimate EstimateTv(const std::vector<Uint64>& counts_a, const std::vector<Uint64>& counts_b,
                      Rng& rng, size_t bootstrap_rounds = 200);
TvEstimate EstimateTv(const std::vector<std::vector<double>>& samples_a,
                      const std::vector<std::vector<double>>& samples_b,
                      const Binning& binning, Rng& rng, size_t bootstrap_rounds = 200);

// Plug-in mutual information (nats) of a joint count table, row-major
// rows x cols.
double MutualInformation(std::span<const Uint64> joint, size_t rows, size_t cols);

// "bin,count" rows, or "bin,count_a,count_b" when two histograms are given.
void WriteHistogramCsv(std::ostream& out, std::span<const Uint64> counts_a,
                       std::span<const Uint64> counts_b = {});

}  // namespace mrlwe

#endif  // MRLWE_STATS_H_
