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


#include "mrlwe/reductions.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "mrlwe/parallel.h"
#include "mrlwe/tensor_poly.h"

namespace mrlwe {

namespace {

// Adds (a s' + h) / q + e' where e' is given by real power-basis coefficients.
RlweSample Rerandomize(const RlweContext& ctx, const RlweSample& sample,
                       const RingElement& s_prime, std::span<const double> error, size_t k,
                       Rng& rng) {
  RingElement shift = (sample.a * s_prime).ToCoefficients() + UniformSlotMask(ctx, k, rng);
  std::vector<Uint64> e = ctx.ScaleToTorus(ctx.ToDualCoordinates(error));
  const Uint64 m = ctx.torus_modulus();
  RlweSample out = sample;
  for (size_t i = 0; i < out.b.size(); ++i) {
    out.b[i] = AddMod(AddMod(out.b[i], shift.data()[i] << ctx.fraction_bits(), m), e[i], m);
  }
  return out;
}

Rng BranchBase(Rng& rng) { return rng.Derive(rng.NextU64()); }

nlohmann::json KJson(const AutomorphismIndex& k) { return nlohmann::json(k.k); }

}  // namespace

Transcript::Transcript(const RingParams& params)
    : header_{{"type", "header"}, {"version", 1}, {"params", params.ToString()}} {}

void Transcript::Record(nlohmann::json step) {
  step["index"] = steps_.size();
  steps_.push_back(std::move(step));
}

void Transcript::WriteJsonl(std::ostream& out) const {
  out << header_.dump() << '\n';
  for (const auto& step : steps_) out << step.dump() << '\n';
}

AutomorphismIndex TransportAutomorphism(const RingContext& ring, size_t target, size_t source) {
  const RingParams& params = ring.params();
  std::vector<size_t> t = params.index().Unmap(target);
  std::vector<size_t> s = params.index().Unmap(source);
  AutomorphismIndex k{std::vector<Uint64>(params.dims())};
  for (size_t i = 0; i < params.dims(); ++i) {
    const Uint64 m = params.moduli()[i];
    k.k[i] = MulMod(ring.units(i)[s[i]], InvMod(ring.units(i)[t[i]], m), m);
  }
  return k;
}

std::vector<Uint64> ApplyAutomorphismTorus(const RlweContext& ctx, std::span<const Uint64> b,
                                           const AutomorphismIndex& k) {
  k.CheckValid(ctx.params());
  return SubstituteMonomials(ModQField{ctx.torus_modulus()}, b, ctx.params().degrees(),
                             ctx.params().moduli(), k.k, ctx.ring()->cyclotomics());
}

RlweSample ApplyAutomorphism(const RlweContext& ctx, const RlweSample& sample,
                             const AutomorphismIndex& k) {
  return RlweSample{sample.a.ToCoefficients().ApplyAutomorphism(k),
                    ApplyAutomorphismTorus(ctx, sample.b, k)};
}

RlweSample TransportToIdeal(const RlweContext& ctx, const RlweSample& sample, size_t target,
                            size_t source) {
  return ApplyAutomorphism(ctx, sample, TransportAutomorphism(*ctx.ring(), target, source));
}

SecretKey SearchFromQi(const RlweContext& ctx, const QiLweSolver& solver, size_t target,
                       std::span<const RlweSample> stream, Transcript* transcript) {
  const size_t n = ctx.n();
  if (target >= n) throw std::out_of_range("SearchFromQi: target slot");
  std::vector<Uint64> slots(n);
  for (size_t j = 0; j < n; ++j) {
    AutomorphismIndex k = TransportAutomorphism(*ctx.ring(), target, j);
    std::vector<RlweSample> moved;
    moved.reserve(stream.size());
    for (const RlweSample& s : stream) moved.push_back(ApplyAutomorphism(ctx, s, k));
    Uint64 answer = 0;
    try {
      answer = solver(moved);
    } catch (const std::exception& e) {
      throw OracleFailure(j, e.what());
    }
    if (answer >= ctx.q()) throw OracleFailure(j, "answer is not a residue mod q");
    // The answer is tau_k(s) mod q_target; pull it back with tau_k^{-1}.
    std::vector<Uint64> t(n, 0);
    t[target] = answer;
    RingElement back = RingElement::FromSlotValues(ctx.ring(), std::move(t))
                           .ApplyAutomorphism(k.Inverse(ctx.params()));
    slots[j] = back.data()[j];
    if (transcript) {
      transcript->Record({{"op", "search_from_qi"}, {"slot", j}, {"k", KJson(k)},
                          {"samples", stream.size()}, {"answer", answer}});
    }
  }
  return SecretKey::FromElement(ctx, RingElement::FromSlotValues(ctx.ring(), std::move(slots)));
}

QiLweSolver PlantedQiSolver(RlweContextPtr ctx, size_t target) {
  return [ctx = std::move(ctx), target](std::span<const RlweSample> stream) -> Uint64 {
    const Uint64 q = ctx->q();
    const int f = ctx->fraction_bits();
    std::map<Uint64, size_t> votes;
    for (const RlweSample& s : stream) {
      Uint64 a_slot = s.a.ToSlots().data()[target];
      if (a_slot == 0) continue;
      std::vector<Uint64> qb(s.b.size());
      for (size_t i = 0; i < qb.size(); ++i) {
        qb[i] = ((s.b[i] + (Uint64{1} << f >> 1)) >> f) % q;
      }
      Uint64 b_slot = RingElement::FromCoefficients(ctx->ring(), std::move(qb)).ToSlots().data()[target];
      ++votes[MulMod(b_slot, InvMod(a_slot, q), q)];
    }
    if (votes.empty()) throw std::runtime_error("no sample with an invertible slot");
    return std::max_element(votes.begin(), votes.end(),
                            [](const auto& x, const auto& y) { return x.second < y.second; })
        ->first;
  };
}

RlweSample DecisionFromSearchStep(const RlweContext& ctx, const RlweSample& sample, Uint64 g,
                                  size_t j, Rng& rng, DecisionStepOptions options) {
  const size_t n = ctx.n();
  if (j < 1 || j > n) throw std::out_of_range("DecisionFromSearchStep: level must be in [1, n]");
  std::vector<Uint64> v_slots(n, 0);
  if (!options.force_v_zero) v_slots[j - 1] = rng.UniformBelow(ctx.q());
  RingElement v = RingElement::FromSlotValues(ctx.ring(), std::move(v_slots)).ToCoefficients();
  RingElement h = UniformSlotMask(ctx, j - 1, rng);
  RingElement shift = h + v.ScalarMul(g % ctx.q());
  RlweSample out{sample.a.ToCoefficients() + v, sample.b};
  const Uint64 m = ctx.torus_modulus();
  for (size_t i = 0; i < n; ++i) {
    out.b[i] = AddMod(out.b[i], shift.data()[i] << ctx.fraction_bits(), m);
  }
  return out;
}

QiSolveResult SolveQiWithWdlwe(const RlweContext& ctx, const Distinguisher& oracle,
                               const SampleSource& source, size_t j, const WdlweConfig& config,
                               Rng& rng, Transcript* transcript) {
  if (j < 1 || j > ctx.n()) throw std::out_of_range("SolveQiWithWdlwe: level must be in [1, n]");
  if (config.batch == 0 || config.trials == 0) {
    throw std::invalid_argument("SolveQiWithWdlwe: empty batch or trial count");
  }
  const Uint64 q = ctx.q();
  Rng base = BranchBase(rng);
  QiSolveResult result;
  size_t trials = config.trials;
  std::vector<Uint64> separated;
  for (size_t round = 0; round <= config.max_doublings; ++round, trials *= 2) {
    std::vector<double> acceptance(q);
    ParallelFor(q, [&](size_t g) {
      Rng branch = base.Derive(round * q + g);
      size_t accepted = 0;
      std::vector<RlweSample> batch;
      for (size_t t = 0; t < trials; ++t) {
        batch.clear();
        for (size_t b = 0; b < config.batch; ++b) {
          batch.push_back(DecisionFromSearchStep(ctx, source(branch), g, j, branch));
        }
        accepted += oracle(batch) ? 1 : 0;
      }
      acceptance[g] = static_cast<double>(accepted) / static_cast<double>(trials);
    });
    result.queries += q * trials;
    result.trials = trials;
    result.radius = HoeffdingRadius(trials, config.delta);
    std::vector<double> sorted = acceptance;
    std::nth_element(sorted.begin(), sorted.begin() + q / 2, sorted.end());
    const double median = sorted[q / 2];
    separated.clear();
    for (Uint64 g = 0; g < q; ++g) {
      if (std::abs(acceptance[g] - median) > 2.0 * result.radius) separated.push_back(g);
    }
    result.acceptance = std::move(acceptance);
    if (transcript) {
      transcript->Record({{"op", "solve_qi_with_wdlwe"}, {"level", j}, {"round", round},
                          {"trials", trials}, {"radius", result.radius},
                          {"acceptance", result.acceptance}, {"separated", separated}});
    }
    if (separated.size() == 1) break;
  }
  if (separated.empty()) {
    throw OracleTooWeak("no residue guess separated at level " + std::to_string(j),
                        result.acceptance);
  }
  result.residue = separated.front();
  return result;
}

Distinguisher PlantedSlotDistinguisher(RlweContextPtr ctx, RingElement s, size_t slot) {
  return [ctx = std::move(ctx), s = std::move(s), slot](std::span<const RlweSample> batch) {
    size_t zeros = 0;
    for (const RlweSample& sample : batch) {
      zeros += ResidualSlots(*ctx, s, sample)[slot] == 0 ? 1 : 0;
    }
    return 2 * zeros >= batch.size();
  };
}

GaussianSpec CompletionWidths(const RingParams& params, double alpha, const UpsilonDraw& draw) {
  const double sqrt_n = std::sqrt(static_cast<double>(params.total_degree()));
  std::vector<double> r(draw.x.size());
  for (size_t i = 0; i < r.size(); ++i) r[i] = alpha * std::sqrt(sqrt_n * draw.x[i]);
  return GaussianSpec::Elliptical(params, std::move(r));
}

RlweSample WorstToAverageRandomize(const RlweContext& ctx, const RlweSample& sample,
                                   const RingElement& s_prime, const GaussianSpec& r_prime,
                                   size_t k, Rng& rng) {
  if (k > ctx.n()) throw std::out_of_range("WorstToAverageRandomize: level exceeds n");
  RealVector e = SampleContinuous(ctx.embedding(), r_prime, rng);
  return Rerandomize(ctx, sample, s_prime, e, k, rng);
}

double ComputeXi(double alpha, size_t n, Uint64 l) { return SphericalWidth(alpha, n, l); }

std::vector<RlweSample> SphericalRandomize(const RlweContext& ctx,
                                           std::span<const RlweSample> samples,
                                           const RingElement& s_prime, size_t j, double xi,
                                           const GaussianSpec& r, Rng& rng) {
  if (j > ctx.n()) throw std::out_of_range("SphericalRandomize: level exceeds n");
  if (r.size() != ctx.n()) throw std::invalid_argument("SphericalRandomize: width length");
  if (xi < r.max_r()) {
    throw std::invalid_argument("SphericalRandomize: xi is below the largest input width");
  }
  std::vector<double> scale(ctx.n());
  for (size_t i = 0; i < scale.size(); ++i) {
    scale[i] = std::sqrt(xi * xi - r.r()[i] * r.r()[i]) / std::sqrt(2.0 * std::numbers::pi);
  }
  std::vector<RlweSample> out;
  out.reserve(samples.size());
  for (const RlweSample& sample : samples) {
    RealVector h(ctx.n());
    for (size_t i = 0; i < h.size(); ++i) h[i] = scale[i] * rng.StandardNormal();
    out.push_back(Rerandomize(ctx, sample, s_prime, ctx.embedding().HToCoefficients(h), j, rng));
  }
  return out;
}

HybridWalkResult HybridWalk(const RlweContext& ctx, const Distinguisher& oracle,
                            const SecretKey& key, const GaussianSpec& psi,
                            const HybridWalkConfig& config, Rng& rng, Transcript* transcript) {
  if (config.batch == 0 || config.trials == 0) {
    throw std::invalid_argument("HybridWalk: empty batch or trial count");
  }
  const size_t n = ctx.n();
  Rng base = BranchBase(rng);
  HybridWalkResult result;
  result.profile.assign(n + 1, 0.0);
  ParallelFor(n + 1, [&](size_t level) {
    Rng branch = base.Derive(level);
    size_t accepted = 0;
    std::vector<RlweSample> batch;
    for (size_t t = 0; t < config.trials; ++t) {
      batch.clear();
      for (size_t b = 0; b < config.batch; ++b) {
        batch.push_back(SampleHybrid(ctx, key, psi, level, branch));
      }
      accepted += oracle(batch) ? 1 : 0;
    }
    result.profile[level] = static_cast<double>(accepted) / static_cast<double>(config.trials);
  });
  result.queries = (n + 1) * config.trials;
  result.radius = HoeffdingRadius(config.trials, config.delta);
  result.endpoint_gap = std::abs(result.profile[n] - result.profile[0]);
  double best = 0.0;
  for (size_t j = 1; j <= n; ++j) {
    double gap = std::abs(result.profile[j] - result.profile[j - 1]);
    if (gap > 2.0 * result.radius && gap > best) {
      best = gap;
      result.level = j;
    }
  }
  if (transcript) {
    nlohmann::json step = {{"op", "hybrid_walk"},       {"trials", config.trials},
                           {"batch", config.batch},     {"radius", result.radius},
                           {"profile", result.profile}, {"endpoint_gap", result.endpoint_gap}};
    step["level"] = result.level ? nlohmann::json(*result.level) : nlohmann::json(nullptr);
    transcript->Record(std::move(step));
  }
  return result;
}

TestVerdict CompareSlotStatistics(const RlweContext& ctx, const RingElement& s,
                                  std::span<const RlweSample> a, std::span<const RlweSample> b,
                                  double threshold) {
  const size_t n = ctx.n();
  const Uint64 q = ctx.q();
  std::vector<std::vector<Uint64>> counts_a(n, std::vector<Uint64>(q, 0)), counts_b = counts_a;
  for (const RlweSample& sample : a) {
    std::vector<Uint64> slots = ResidualSlots(ctx, s, sample);
    for (size_t i = 0; i < n; ++i) ++counts_a[i][slots[i]];
  }
  for (const RlweSample& sample : b) {
    std::vector<Uint64> slots = ResidualSlots(ctx, s, sample);
    for (size_t i = 0; i < n; ++i) ++counts_b[i][slots[i]];
  }
  double min_p = 1.0, worst = 0.0;
  for (size_t i = 0; i < n; ++i) {
    TestVerdict v = ChiSquareHomogeneity(counts_a[i], counts_b[i], threshold);
    if (v.p_value < min_p || i == 0) {
      min_p = v.p_value;
      worst = v.statistic;
    }
  }
  return MakeVerdict("slot_homogeneity", worst, std::min(1.0, min_p * static_cast<double>(n)),
                     a.size() + b.size(), threshold);
}

}  // namespace mrlwe
