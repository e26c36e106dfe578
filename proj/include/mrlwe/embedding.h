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


#ifndef MRLWE_EMBEDDING_H_
#define MRLWE_EMBEDDING_H_

#include <complex>
#include <cstddef>
#include <memory>
#include <ostream>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mrlwe/params.h"

namespace mrlwe {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
using RealVector = std::vector<double>;

// Default tolerance for the conjugate-symmetry check in SigmaInverse.
inline constexpr double kSymmetryTolerance = 1e-6;

// (numerator, denominator) with R^dual = (numerator / denominator) R.
struct DualScale {
  Int64 numerator = 1;
  Int64 denominator = 1;
  double value() const {
    return static_cast<double>(numerator) / static_cast<double>(denominator);
  }
};

// Throws std::invalid_argument unless every conductor is a power of two.
DualScale DualScaleFor(const RingParams& params);

// Complex Kronecker embedding sigma for the tensor of cyclotomic fields
// Q(zeta_{m_1}) x ... x Q(zeta_{m_l}). Coordinates follow the slot order of
// RingContext: axis i evaluates at omega_{m_i}^u for units u ascending,
// omega_m = exp(2 pi i / m). Only the conductors matter; q is ignored.
class EmbeddingContext {
 public:
  static std::shared_ptr<const EmbeddingContext> Create(const RingParams& params);

  const RingParams& params() const { return params_; }
  size_t n() const { return params_.total_degree(); }
  const std::vector<size_t>& degrees() const { return params_.degrees(); }

  // Flat index of the complex-conjugate coordinate (u_i -> m_i - u_i).
  size_t ConjugateIndex(size_t j) const;

  ComplexVector Sigma(std::span<const double> coeffs) const;
  ComplexVector SigmaIntegers(std::span<const Int64> coeffs) const;
  // Throws std::invalid_argument if v is not conjugate symmetric within tol
  // (relative to max |v_j|).
  RealVector SigmaInverse(std::span<const Complex> v,
                          double tol = kSymmetryTolerance) const;

  // Real orthonormal basis of H: per-axis conjugate-pair vectors tensored.
  // Axis basis: for p < n_i/2 with partner p' = n_i - 1 - p,
  //   h_p = (e_p + e_p') / sqrt 2,  h_{p + n_i/2} = i (e_p - e_p') / sqrt 2.
  std::vector<ComplexVector> HBasis() const;
  // t_j = <sigma(a), h_j>; real for real a.
  RealVector CoefficientsToH(std::span<const double> coeffs) const;
  RealVector HToCoefficients(std::span<const double> h_coords) const;
  ComplexVector HToSigma(std::span<const double> h_coords) const;

  // x_i -> x_i^{k_i} on real coefficient vectors.
  RealVector Automorphism(std::span<const double> coeffs,
                          const std::vector<Uint64>& k) const;
  // Schoolbook product of real coefficient vectors.
  RealVector Multiply(std::span<const double> a, std::span<const double> b) const;

  // Dense n x n matrix whose column c is sigma of the c-th power-basis
  // monomial. For cross-checks only.
  Eigen::MatrixXcd DenseMatrix() const;
  // Per-axis Vandermonde matrices.
  const Eigen::MatrixXcd& AxisVandermonde(size_t axis) const { return axes_[axis].v; }

 private:
  struct Axis {
    Eigen::MatrixXcd v;      // evaluation
    Eigen::MatrixXcd v_inv;
    Eigen::MatrixXcd h;      // columns = axis h basis
    Eigen::MatrixXd to_h;    // Re(h^H v)
    Eigen::MatrixXd from_h;  // Re(v^{-1} h)
  };

  explicit EmbeddingContext(const RingParams& params);

  RingParams params_;
  std::vector<Axis> axes_;
  std::vector<std::vector<Int64>> phis_;
};

using EmbeddingContextPtr = std::shared_ptr<const EmbeddingContext>;

// p >= 1 or infinity. Throws std::invalid_argument for p < 1.
double LpNorm(std::span<const Complex> v, double p);
double LpNorm(const EmbeddingContext& ctx, std::span<const double> coeffs, double p);

double Trace(const EmbeddingContext& ctx, std::span<const double> coeffs);
double NormField(const EmbeddingContext& ctx, std::span<const double> coeffs);

struct DualCheckReport {
  bool passed = false;
  double max_integrality_error = 0.0;  // of the change-of-basis matrix
  double determinant_error = 0.0;      // | |det| - 1 |
};

// Verifies that sigma((1/prod n_i) R) equals the complex conjugate of the
// dual lattice of sigma(R): the change of basis between the two must be an
// integral unimodular matrix. Power-of-two conductors, n <= 16.
DualCheckReport DualLatticeCheck(const RingParams& params, double tol = 1e-6);

// "j,re,im" rows.
void WriteEmbeddedCsv(std::ostream& out, std::span<const Complex> v);

}  // namespace mrlwe

#endif  // MRLWE_EMBEDDING_H_
