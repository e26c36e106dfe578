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


#include "mrlwe/gaussian.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>

namespace mrlwe {

std::vector<std::vector<size_t>> SymmetryClasses(const RingParams& params) {
  const MixedRadix& index = params.index();
  const size_t l = params.dims();
  std::vector<bool> seen(index.size(), false);
  std::vector<std::vector<size_t>> classes;
  for (size_t j = 0; j < index.size(); ++j) {
    if (seen[j]) continue;
    std::vector<size_t> base = index.Unmap(j);
    std::set<size_t> members;
    for (size_t mask = 0; mask < (size_t{1} << l); ++mask) {
      std::vector<size_t> flipped = base;
      for (size_t i = 0; i < l; ++i) {
        size_t n_i = params.degrees()[i];
        if ((mask >> i & 1) && n_i >= 2) flipped[i] = (flipped[i] + n_i / 2) % n_i;
      }
      members.insert(index.Map(flipped));
    }
    for (size_t m : members) seen[m] = true;
    classes.emplace_back(members.begin(), members.end());
  }
  return classes;
}

GaussianSpec GaussianSpec::Spherical(const RingParams& params, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("GaussianSpec: width must be positive");
  }
  return GaussianSpec(GaussianKind::kSpherical,
                      std::vector<double>(params.total_degree(), r));
}

GaussianSpec GaussianSpec::Elliptical(const RingParams& params, std::vector<double> r) {
  if (r.size() != params.total_degree()) {
    throw std::invalid_argument("GaussianSpec: expected one width per coordinate");
  }
  for (double v : r) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("GaussianSpec: widths must be positive");
    }
  }
  for (const auto& cls : SymmetryClasses(params)) {
    for (size_t j : cls) {
      if (r[j] != r[cls.front()]) {
        throw std::invalid_argument("GaussianSpec: widths break conjugate-pair symmetry");
      }
    }
  }
  return GaussianSpec(GaussianKind::kElliptical, std::move(r));
}

double GaussianSpec::max_r() const { return *std::max_element(r_.begin(), r_.end()); }

RealVector SampleContinuousH(const GaussianSpec& spec, Rng& rng) {
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  RealVector h(spec.size());
  for (size_t j = 0; j < h.size(); ++j) {
    h[j] = spec.r()[j] * inv_sqrt_2pi * rng.StandardNormal();
  }
  return h;
}

RealVector SampleContinuous(const EmbeddingContext& ctx, const GaussianSpec& spec, Rng& rng) {
  RealVector h = SampleContinuousH(spec, rng);
  return ctx.HToCoefficients(h);
}

double SampleGamma21(Rng& rng) { return rng.Exponential() + rng.Exponential(); }

double Gamma21Cdf(double x) { return x <= 0 ? 0.0 : 1.0 - (1.0 + x) * std::exp(-x); }

UpsilonDraw SampleUpsilon(double alpha, const RingParams& params, Rng& rng) {
  if (!(alpha > 0.0)) throw std::invalid_argument("SampleUpsilon: alpha must be positive");
  const double sqrt_n = std::sqrt(static_cast<double>(params.total_degree()));
  RealVector x(params.total_degree());
  std::vector<double> r(params.total_degree());
  for (const auto& cls : SymmetryClasses(params)) {
    double draw = SampleGamma21(rng);
    double width = alpha * std::sqrt(1.0 + sqrt_n * draw);
    for (size_t j : cls) {
      x[j] = draw;
      r[j] = width;
    }
  }
  return UpsilonDraw{GaussianSpec::Elliptical(params, std::move(r)), std::move(x)};
}

Int64 SampleIntegerGaussian(Rng& rng, double center, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("SampleIntegerGaussian: s must be positive");
  constexpr double kTail = 12.0;
  const Int64 lo = static_cast<Int64>(std::floor(center - kTail * s));
  const Int64 hi = static_cast<Int64>(std::ceil(center + kTail * s));
  const double nearest = std::round(center);
  const double best = (nearest - center) * (nearest - center);
  const Uint64 span = static_cast<Uint64>(hi - lo) + 1;
  while (true) {
    Int64 z = lo + static_cast<Int64>(rng.UniformBelow(span));
    double d = static_cast<double>(z) - center;
    double accept = std::exp(-std::numbers::pi * (d * d - best) / (s * s));
    if (rng.UniformUnit() < accept) return z;
  }
}

LatticeGaussianSampler::LatticeGaussianSampler(Eigen::MatrixXd basis, Eigen::VectorXd shift,
                                               double r)
    : basis_(std::move(basis)), shift_(std::move(shift)), r_(r) {
  if (!(r > 0.0)) throw std::invalid_argument("LatticeGaussianSampler: r must be positive");
  const Eigen::Index n = basis_.rows();
  if (basis_.cols() != n || shift_.size() != n) {
    throw std::invalid_argument("LatticeGaussianSampler: shape mismatch");
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(basis_);
  if (lu.rank() < n) throw std::invalid_argument("LatticeGaussianSampler: degenerate basis");

  diagonal_ = true;
  for (Eigen::Index i = 0; i < n && diagonal_; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && basis_(i, j) != 0.0) {
        diagonal_ = false;
        break;
      }
    }
  }
  if (diagonal_) return;

  // Babai rounding bounds the distance from 0 to the nearest coset point.
  Eigen::VectorXd coords = -(basis_.transpose().fullPivLu().solve(shift_));
  Eigen::VectorXd babai = shift_;
  for (Eigen::Index i = 0; i < n; ++i) babai += std::round(coords(i)) * basis_.row(i).transpose();
  const double radius = babai.norm() + 6.0 * r * std::sqrt(static_cast<double>(n));
  std::vector<double> norms2;
  EnumerateLattice(basis_, shift_, radius,
                   [&](const std::vector<Int64>&, const Eigen::VectorXd& x) {
                     points_.push_back(x);
                     norms2.push_back(x.squaredNorm());
                   });
  double min2 = *std::min_element(norms2.begin(), norms2.end());
  double total = 0.0;
  for (double v : norms2) {
    total += std::exp(-std::numbers::pi * (v - min2) / (r * r));
    cumulative_.push_back(total);
  }
}

Eigen::VectorXd LatticeGaussianSampler::Sample(Rng& rng) const {
  const Eigen::Index n = basis_.rows();
  if (diagonal_) {
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double b = basis_(i, i);
      // x_i = b z + u_i with weight exp(-pi x_i^2 / r^2).
      Int64 z = SampleIntegerGaussian(rng, -shift_(i) / b, r_ / std::abs(b));
      x(i) = b * static_cast<double>(z) + shift_(i);
    }
    return x;
  }
  double target = rng.UniformUnit() * cumulative_.back();
  size_t k = std::upper_bound(cumulative_.begin(), cumulative_.end(), target) - cumulative_.begin();
  return points_[std::min(k, points_.size() - 1)];
}

Int64 RoundToCoset(double y, Int64 p, Int64 w) {
  if (p < 1) throw std::invalid_argument("RoundToCoset: p must be >= 1");
  double t = (y - static_cast<double>(w)) / static_cast<double>(p);
  double base = std::floor(t);
  double frac = t - base;
  Int64 k = static_cast<Int64>(base);
  if (frac > 0.5 || (frac == 0.5 && (k % 2 != 0))) ++k;
  return w + p * k;
}

std::vector<Int64> Discretize(const RingParams& params, std::span<const double> y, Int64 p,
                              std::span<const Int64> w) {
  if (!params.AllPowerOfTwo()) {
    throw std::invalid_argument("Discretize: power-of-two conductors required");
  }
  if (y.size() != params.total_degree() || w.size() != y.size()) {
    throw std::invalid_argument("Discretize: length mismatch");
  }
  std::vector<Int64> out(y.size());
  for (size_t i = 0; i < y.size(); ++i) out[i] = RoundToCoset(y[i], p, w[i]);
  return out;
}

SmoothingReport SmoothingBound(const LatticeInstance& lattice, double epsilon) {
  const size_t n = lattice.dim();
  if (n > 16) throw std::invalid_argument("SmoothingBound: n must be <= 16");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("SmoothingBound: epsilon must lie in (0, 1)");
  }
  double max_row = 0.0;
  for (Eigen::Index i = 0; i < lattice.basis().rows(); ++i) {
    max_row = std::max(max_row, lattice.basis().row(i).norm());
  }
  std::vector<LatticeVector> minima = SuccessiveMinima(lattice, max_row * (1 + 1e-9));
  SmoothingReport report;
  report.lambda_n_bound =
      std::sqrt(std::log(static_cast<double>(n) / epsilon)) * minima.back().length;
  report.dual_bound = std::numeric_limits<double>::infinity();
  if (epsilon >= std::ldexp(1.0, -2 * static_cast<int>(n))) {
    LatticeInstance dual = lattice.Dual();
    double min_row = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < dual.basis().rows(); ++i) {
      min_row = std::min(min_row, dual.basis().row(i).norm());
    }
    double lambda1 = BruteForceLambda1(dual, 2.0, min_row * (1 + 1e-9)).length;
    report.dual_bound = std::sqrt(static_cast<double>(n)) / lambda1;
  }
  report.bound = std::min(report.lambda_n_bound, report.dual_bound);
  return report;
}

}  // namespace mrlwe
