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


#ifndef MRLWE_GAUSSIAN_H_
#define MRLWE_GAUSSIAN_H_

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mrlwe/embedding.h"
#include "mrlwe/lattice.h"
#include "mrlwe/params.h"
#include "mrlwe/rng.h"

namespace mrlwe {

// Width convention: rho_r(x) = exp(-pi |x|^2 / r^2), so a one-dimensional
// D_r has variance r^2 / (2 pi).

// Groups of h-indices that must share a width: every index reachable from
// (j_1, ..., j_l) by replacing any subset of j_i with (j_i + n_i/2) mod n_i.
std::vector<std::vector<size_t>> SymmetryClasses(const RingParams& params);

enum class GaussianKind { kSpherical, kElliptical };

class GaussianSpec {
 public:
  // Throws std::invalid_argument unless r > 0.
  static GaussianSpec Spherical(const RingParams& params, double r);
  // Throws std::invalid_argument on wrong length, a nonpositive width, or a
  // width vector that is not constant on every symmetry class.
  static GaussianSpec Elliptical(const RingParams& params, std::vector<double> r);

  GaussianKind kind() const { return kind_; }
  const std::vector<double>& r() const { return r_; }
  size_t size() const { return r_.size(); }
  double max_r() const;

 private:
  GaussianSpec(GaussianKind kind, std::vector<double> r) : kind_(kind), r_(std::move(r)) {}
  GaussianKind kind_;
  std::vector<double> r_;
};

// Independent D_{r_j} coordinates in the h basis.
RealVector SampleContinuousH(const GaussianSpec& spec, Rng& rng);
// Same draw mapped to real power-basis coefficients.
RealVector SampleContinuous(const EmbeddingContext& ctx, const GaussianSpec& spec, Rng& rng);

// Gamma(2, 1) as the sum of two unit exponentials.
double SampleGamma21(Rng& rng);
double Gamma21Cdf(double x);

struct UpsilonDraw {
  GaussianSpec spec;
  RealVector x;  // x_j >= 0 per h-index, shared within symmetry classes
};

// r_j^2 = alpha^2 (1 + sqrt(n) x_j), x_j ~ Gamma(2, 1) per symmetry class.
// Throws std::invalid_argument for alpha <= 0.
UpsilonDraw SampleUpsilon(double alpha, const RingParams& params, Rng& rng);

// Integer z with probability proportional to exp(-pi (z - center)^2 / s^2).
Int64 SampleIntegerGaussian(Rng& rng, double center, double s);

// Discrete Gaussian D_{L + u, r} over a full-rank lattice L (basis rows).
// Diagonal bases use per-coordinate integer sampling; otherwise all points
// of L + u within distance d_0 + 6 r sqrt(n) of the origin are enumerated
// (d_0 is the Babai distance) and sampled from a normalized table.
class LatticeGaussianSampler {
 public:
  // Throws std::invalid_argument on a degenerate basis or r <= 0.
  LatticeGaussianSampler(Eigen::MatrixXd basis, Eigen::VectorXd shift, double r);

  Eigen::VectorXd Sample(Rng& rng) const;
  bool uses_fast_path() const { return diagonal_; }
  size_t table_size() const { return points_.size(); }

 private:
  Eigen::MatrixXd basis_;
  Eigen::VectorXd shift_;
  double r_;
  bool diagonal_ = false;
  std::vector<Eigen::VectorXd> points_;
  std::vector<double> cumulative_;
};

// Nearest element of w + pZ to y; ties go to the even quotient.
Int64 RoundToCoset(double y, Int64 p, Int64 w);

// Coordinate-wise rounding of y (coordinates in the basis of R^dual, i.e.
// y = prod n_i * power-basis coefficients) to the coset w + p R^dual.
// Returns integer R^dual coordinates. Throws std::invalid_argument unless
// all conductors are powers of two.
std::vector<Int64> Discretize(const RingParams& params, std::span<const double> y,
                              Int64 p, std::span<const Int64> w);

struct SmoothingReport {
  double bound = 0.0;
  double lambda_n_bound = 0.0;  // sqrt(ln(n / eps)) lambda_n
  double dual_bound = 0.0;      // sqrt(n) / lambda_1(dual); +inf when eps < 2^{-2n}
};

// Upper bound on eta_eps(L), the smaller of the two available bounds.
// Requires n <= 16 and 0 < eps < 1.
SmoothingReport SmoothingBound(const LatticeInstance& lattice, double epsilon);

}  // namespace mrlwe

#endif  // MRLWE_GAUSSIAN_H_
