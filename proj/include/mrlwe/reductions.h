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


#ifndef MRLWE_REDUCTIONS_H_
#define MRLWE_REDUCTIONS_H_

#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "mrlwe/gaussian.h"
#include "mrlwe/ring.h"
#include "mrlwe/rlwe.h"
#include "mrlwe/stats.h"

namespace mrlwe {

// Conventions: slot indices are 0-based flat indices. Hybrid levels j count
// randomized slots, so level j differs from level j - 1 in slot j - 1.

class OracleFailure : public std::runtime_error {
 public:
  OracleFailure(size_t slot, const std::string& what)
      : std::runtime_error("oracle failed at slot " + std::to_string(slot) + ": " + what),
        slot_(slot) {}
  size_t slot() const { return slot_; }

 private:
  size_t slot_;
};

class OracleTooWeak : public std::runtime_error {
 public:
  OracleTooWeak(const std::string& what, std::vector<double> profile)
      : std::runtime_error(what), profile_(std::move(profile)) {}
  const std::vector<double>& profile() const { return profile_; }

 private:
  std::vector<double> profile_;
};

// One JSON object per step; written as JSON lines after a header line that
// carries the parameters.
class Transcript {
 public:
  explicit Transcript(const RingParams& params);
  void Record(nlohmann::json step);
  const std::vector<nlohmann::json>& steps() const { return steps_; }
  void WriteJsonl(std::ostream& out) const;

 private:
  nlohmann::json header_;
  std::vector<nlohmann::json> steps_;
};

// Oracle callbacks. A q_i-LWE solver returns the slot value of the secret at
// its fixed target slot; a distinguisher accepts or rejects one batch.
// Callbacks may be invoked concurrently and must be thread-safe.
using QiLweSolver = std::function<Uint64(std::span<const RlweSample>)>;
using Distinguisher = std::function<bool(std::span<const RlweSample>)>;
using SampleSource = std::function<RlweSample(Rng&)>;

// --- Automorphism transport --------------------------------------------

// k with tau_k(q_source) = q_target: per axis k_i = u_source,i / u_target,i.
AutomorphismIndex TransportAutomorphism(const RingContext& ring, size_t target, size_t source);
// tau_k on a fixed-point torus vector (exact signed permutation mod q 2^f).
std::vector<Uint64> ApplyAutomorphismTorus(const RlweContext& ctx, std::span<const Uint64> b,
                                           const AutomorphismIndex& k);
RlweSample ApplyAutomorphism(const RlweContext& ctx, const RlweSample& sample,
                             const AutomorphismIndex& k);
RlweSample TransportToIdeal(const RlweContext& ctx, const RlweSample& sample, size_t target,
                            size_t source);

// --- Search from q_i-LWE -----------------------------------------------

// Transports the stream to every slot in turn, asks the solver (which works
// on slot `target`), maps each answer back with the inverse automorphism and
// assembles s from the n residues. Solver errors surface as OracleFailure
// naming the slot being recovered.
SecretKey SearchFromQi(const RlweContext& ctx, const QiLweSolver& solver, size_t target,
                       std::span<const RlweSample> stream, Transcript* transcript = nullptr);

// Majority vote of slot(round(q b)) / slot(a) over samples with a nonzero
// slot of a: exact whenever the scaled error rounds to zero.
QiLweSolver PlantedQiSolver(RlweContextPtr ctx, size_t target);

// --- Decision from search ----------------------------------------------

struct DecisionStepOptions {
  bool force_v_zero = false;  // test hook: collapses the step to a hybrid shift
};

// (a + v, b + (h + v g) / q) with v uniform in slot j - 1 only and h uniform
// in slots [0, j - 1). A correct guess g = s mod q_{j-1} maps A^{j-1} inputs
// to A^{j-1}; a wrong one yields A^j. Requires 1 <= j <= n.
RlweSample DecisionFromSearchStep(const RlweContext& ctx, const RlweSample& sample, Uint64 g,
                                  size_t j, Rng& rng, DecisionStepOptions options = {});

struct WdlweConfig {
  size_t batch = 1;          // samples per oracle query
  size_t trials = 200;       // queries per residue guess
  size_t max_doublings = 3;  // reruns with doubled trials on ties
  double delta = 1e-3;       // Hoeffding failure probability per estimate
};

struct QiSolveResult {
  Uint64 residue = 0;
  std::vector<double> acceptance;  // per guess g, last round
  double radius = 0.0;
  size_t trials = 0;               // per guess, last round
  size_t queries = 0;              // all rounds
};

// Tries every g in ascending order against the level-j step and returns
// the guess whose acceptance rate separates from the median (the wrong
// guesses). Several separated guesses trigger a rerun with doubled trials;
// if they persist the smallest wins. No separated guess: OracleTooWeak.
QiSolveResult SolveQiWithWdlwe(const RlweContext& ctx, const Distinguisher& oracle,
                               const SampleSource& source, size_t j, const WdlweConfig& config,
                               Rng& rng, Transcript* transcript = nullptr);

// Knows s; accepts a batch when at least half of its samples have residual
// slot `slot` equal to zero.
Distinguisher PlantedSlotDistinguisher(RlweContextPtr ctx, RingElement s, size_t slot);

// --- Worst case to average case ----------------------------------------

// r'_j^2 = alpha^2 sqrt(n) x_j, completing a width drawn from Upsilon.
GaussianSpec CompletionWidths(const RingParams& params, double alpha, const UpsilonDraw& draw);

// (a, b + (a s' + h) / q + e') with h = UniformSlotMask(k), e' ~ D_{r'}.
RlweSample WorstToAverageRandomize(const RlweContext& ctx, const RlweSample& sample,
                                   const RingElement& s_prime, const GaussianSpec& r_prime,
                                   size_t k, Rng& rng);

// xi = alpha (n l / log(n l))^{1/4}.
double ComputeXi(double alpha, size_t n, Uint64 l);

// Completes each sample's error D_r to D_xi with r'^2 = xi^2 - r^2, shared s'
// and fresh h per sample at level j. Throws std::invalid_argument when
// xi < max r.
std::vector<RlweSample> SphericalRandomize(const RlweContext& ctx,
                                           std::span<const RlweSample> samples,
                                           const RingElement& s_prime, size_t j, double xi,
                                           const GaussianSpec& r, Rng& rng);

// --- Hybrid walk -------------------------------------------------------

struct HybridWalkConfig {
  size_t trials = 200;
  size_t batch = 16;
  double delta = 1e-3;
};

struct HybridWalkResult {
  std::vector<double> profile;  // acceptance estimate at levels 0..n
  double radius = 0.0;
  double endpoint_gap = 0.0;    // |profile[n] - profile[0]|
  std::optional<size_t> level;  // j with A^{j-1}, A^j separated (largest gap)
  size_t queries = 0;
};

HybridWalkResult HybridWalk(const RlweContext& ctx, const Distinguisher& oracle,
                            const SecretKey& key, const GaussianSpec& psi,
                            const HybridWalkConfig& config, Rng& rng,
                            Transcript* transcript = nullptr);

// --- Verdict helpers ---------------------------------------------------

// Per-slot homogeneity of residual slot values between two streams,
// Bonferroni-combined over slots.
TestVerdict CompareSlotStatistics(const RlweContext& ctx, const RingElement& s,
                                  std::span<const RlweSample> a, std::span<const RlweSample> b,
                                  double threshold = kDefaultThreshold);

}  // namespace mrlwe

#endif  // MRLWE_REDUCTIONS_H_
